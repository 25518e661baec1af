//! Randomized agreement check between the log-MAP SISO decoder and the
//! exhaustive MAP oracle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decoder::{exhaustive_map_oracle, siso_decode, Algorithm, SisoInput, ORACLE_MAX_K};
use crate::rng::stream_rng;
use crate::trellis::build_trellis;
use crate::{Error, Result};

/// Domain tag of oracle-check inputs.
const DOMAIN_ORACLE: u64 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest `|log-MAP posterior - oracle posterior|`.
    pub max_deviation: f64,
    /// Largest deviation of the extrinsic from `oracle - ys - la`.
    pub max_extrinsic_deviation: f64,
}

/// Runs `trials` random SISO inputs of length `k`, every LLR uniform in
/// `[-scale, scale]`.
pub fn oracle_check(k: usize, trials: usize, seed: u64, scale: f64) -> Result<OracleReport> {
    if k == 0 || k > ORACLE_MAX_K {
        return Err(Error::OracleTooLarge {
            k,
            max: ORACLE_MAX_K,
        });
    }
    if trials == 0 || !(scale.is_finite() && scale >= 0.0) {
        return Err(Error::InvalidConfig(
            "oracle check needs trials >= 1 and a finite scale".into(),
        ));
    }
    let spec = build_trellis();
    let mut report = OracleReport {
        k,
        trials,
        seed,
        max_deviation: 0.0,
        max_extrinsic_deviation: 0.0,
    };
    for t in 0..trials {
        let mut rng = stream_rng(seed, DOMAIN_ORACLE, ((k as u64) << 32) | t as u64);
        let mut draw =
            |n: usize| -> Vec<f64> { (0..n).map(|_| rng.random_range(-scale..=scale)).collect() };
        let (ys, yp, la, tail) = (draw(k), draw(k), draw(k), draw(6));
        let input = SisoInput {
            ys: &ys,
            yp: &yp,
            la: &la,
            tail_ys: [tail[0], tail[1], tail[2]],
            tail_yp: [tail[3], tail[4], tail[5]],
        };
        let exact = exhaustive_map_oracle(&input, &spec)?;
        let out = siso_decode(&input, &spec, Algorithm::LogMap)?;
        for j in 0..k {
            let d = (out.posterior[j] - exact[j]).abs();
            let e = (out.extrinsic[j] - (exact[j] - ys[j] - la[j])).abs();
            report.max_deviation = report.max_deviation.max(d);
            report.max_extrinsic_deviation = report.max_extrinsic_deviation.max(e);
        }
    }
    Ok(report)
}
