//! Pairwise BER comparison with binomial confidence intervals.

use serde::{Deserialize, Serialize};

use super::ber::BerReport;
use crate::{Error, Result};

/// Normal quantile of a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// `decoder` against `baseline` at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub snr_db: f64,
    pub decoder: String,
    pub baseline: String,
    pub decoder_ber: f64,
    pub baseline_ber: f64,
    pub decoder_ci: (f64, f64),
    pub baseline_ci: (f64, f64),
    /// `decoder_ber / baseline_ber`; 1 when both are zero.
    pub ratio: f64,
    /// Conservative ratio interval from the two Wilson intervals.
    pub ratio_ci: (f64, f64),
}

impl Comparison {
    /// Point estimate no worse than the baseline.
    pub fn not_worse(&self) -> bool {
        self.decoder_ber <= self.baseline_ber
    }

    /// No worse than the baseline up to the 95% intervals.
    pub fn not_worse_within_ci(&self) -> bool {
        self.decoder_ci.0 <= self.baseline_ci.1
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else {
        a / b
    }
}

/// Every ordered pair `(decoder, baseline)` with `decoder` listed before
/// `baseline`, at every SNR.
pub fn compare_decoders(report: &BerReport) -> Result<Vec<Comparison>> {
    let decoders = report.decoders();
    if decoders.len() < 2 {
        return Err(Error::InvalidConfig(
            "comparison needs at least two decoders".into(),
        ));
    }
    let mut out = Vec::new();
    for snr in report.snr_points() {
        for (i, a) in decoders.iter().enumerate() {
            for b in &decoders[i + 1..] {
                if let Some(c) = compare_pair(report, snr, a, b) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// `decoder` against `baseline` at `snr_db`, if both rows exist.
pub fn compare_pair(
    report: &BerReport,
    snr_db: f64,
    decoder: &str,
    baseline: &str,
) -> Option<Comparison> {
    let a = report.row(snr_db, decoder)?;
    let b = report.row(snr_db, baseline)?;
    let ca = wilson_interval(a.bit_errors, a.bits, Z95);
    let cb = wilson_interval(b.bit_errors, b.bits, Z95);
    Some(Comparison {
        snr_db,
        decoder: decoder.to_string(),
        baseline: baseline.to_string(),
        decoder_ber: a.ber,
        baseline_ber: b.ber,
        decoder_ci: ca,
        baseline_ci: cb,
        ratio: ratio(a.ber, b.ber),
        ratio_ci: (ratio(ca.0, cb.1), ratio(ca.1, cb.0)),
    })
}
