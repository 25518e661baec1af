//! Classic turbo decoding: log-MAP and max-log-MAP SISO decoders, the
//! iterative turbo loop, and an exhaustive MAP reference for small blocks.
//!
//! Stage `j` of the trellis (0-based) consumes the LLRs of information bit `j`
//! for `j < K` and the tail LLRs for `K <= j < K + 3`. `alpha[j]` and
//! `beta[j]` are the state metrics on either side of the stage, so both tables
//! have `K + 4` rows and the boundaries sit at row 0 and row `K + 3`.

use serde::{Deserialize, Serialize};

use crate::channel::LlrFrame;
use crate::codec::TurboCodeConfig;
use crate::trellis::{rsce_encode, TrellisSpec, MEMORY, NUM_STATES, NUM_TRANSITIONS};
use crate::{Bit, Error, Result};

/// Log-domain "zero" used for the boundary states.
pub const LOG_ZERO: f64 = -128.0;

/// Largest block the exhaustive oracle accepts.
pub const ORACLE_MAX_K: usize = 12;

/// Branch metrics of every stage.
pub type GammaTable = Vec<[f64; NUM_TRANSITIONS]>;
/// Forward or backward state metrics of every stage boundary.
pub type StateTable = Vec<[f64; NUM_STATES]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LogMap,
    MaxLogMap,
}

impl Algorithm {
    #[inline]
    fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            Algorithm::LogMap => maxstar(a, b),
            Algorithm::MaxLogMap => max_first(a, b),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::LogMap => "log-map",
            Algorithm::MaxLogMap => "max-log-map",
        }
    }
}

/// Jacobian logarithm `max(x, y) + ln(1 + e^-|x - y|)`.
#[inline]
pub fn maxstar(x: f64, y: f64) -> f64 {
    let m = if y > x { y } else { x };
    m + (-(x - y).abs()).exp().ln_1p()
}

/// `max` that keeps the first operand on ties.
#[inline]
pub(crate) fn max_first(a: f64, b: f64) -> f64 {
    if b > a {
        b
    } else {
        a
    }
}

/// Input of one constituent SISO decoder.
#[derive(Debug, Clone, Copy)]
pub struct SisoInput<'a> {
    pub ys: &'a [f64],
    pub yp: &'a [f64],
    /// A priori LLRs `L(u_k)`.
    pub la: &'a [f64],
    pub tail_ys: [f64; MEMORY],
    pub tail_yp: [f64; MEMORY],
}

impl SisoInput<'_> {
    pub fn k(&self) -> usize {
        self.ys.len()
    }

    fn check(&self) -> Result<()> {
        let k = self.ys.len();
        for len in [self.yp.len(), self.la.len()] {
            if len != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: len,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SisoOutput {
    pub posterior: Vec<f64>,
    pub extrinsic: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrellisMetrics {
    pub gamma: GammaTable,
    pub alpha: StateTable,
    pub beta: StateTable,
}

/// Boundary row: state 0 live, everything else at [`LOG_ZERO`].
pub fn boundary_metrics() -> [f64; NUM_STATES] {
    let mut b = [LOG_ZERO; NUM_STATES];
    b[0] = 0.0;
    b
}

/// `gamma_j(s', s) = u L(u_j)/2 + x^s y^s_j/2 + x^p y^p_j/2` with bipolar labels.
/// Tail stages carry no a priori term.
pub fn branch_metrics(input: &SisoInput<'_>, spec: &TrellisSpec) -> GammaTable {
    let k = input.k();
    let mut gamma = Vec::with_capacity(k + MEMORY);
    for j in 0..k + MEMORY {
        let (ys, yp, la) = if j < k {
            (input.ys[j], input.yp[j], input.la[j])
        } else {
            (input.tail_ys[j - k], input.tail_yp[j - k], 0.0)
        };
        let mut row = [0.0; NUM_TRANSITIONS];
        for (g, tr) in row.iter_mut().zip(spec.transitions()) {
            let u = tr.input_sign();
            let p = tr.parity_sign();
            *g = 0.5 * (u * la) + 0.5 * (u * ys) + 0.5 * (p * yp);
        }
        gamma.push(row);
    }
    gamma
}

/// Number of information stages implied by a gamma table.
fn info_stages(gamma: &GammaTable) -> usize {
    gamma.len().saturating_sub(MEMORY)
}

fn normalize(row: &mut [f64; NUM_STATES]) {
    let m = row.iter().copied().fold(f64::NEG_INFINITY, max_first);
    for v in row.iter_mut() {
        *v -= m;
    }
}

/// Forward recursion with per-stage max normalization.
pub fn forward_recursion(gamma: &GammaTable, spec: &TrellisSpec, algo: Algorithm) -> StateTable {
    forward_recursion_with(gamma, spec, algo, true)
}

pub fn forward_recursion_with(
    gamma: &GammaTable,
    spec: &TrellisSpec,
    algo: Algorithm,
    normalized: bool,
) -> StateTable {
    let k = info_stages(gamma);
    let mut alpha = Vec::with_capacity(gamma.len() + 1);
    alpha.push(boundary_metrics());
    for (j, g) in gamma.iter().enumerate() {
        let prev = alpha[j];
        let mut row = [0.0; NUM_STATES];
        if j < k {
            for (s, v) in row.iter_mut().enumerate() {
                let [t0, t1] = spec.incoming(s);
                let a = prev[spec.transition(t0 as usize).from as usize] + g[t0 as usize];
                let b = prev[spec.transition(t1 as usize).from as usize] + g[t1 as usize];
                *v = algo.combine(a, b);
            }
        } else {
            // Only termination edges exist; they end in states 0..4.
            let half = NUM_STATES / 2;
            for s in 0..half {
                let ta = spec.tail_transition(2 * s) as usize;
                let tb = spec.tail_transition(2 * s + 1) as usize;
                row[s] = algo.combine(prev[2 * s] + g[ta], prev[2 * s + 1] + g[tb]);
            }
            let live = row[..half]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, max_first);
            for v in row[half..].iter_mut() {
                *v = live + LOG_ZERO;
            }
        }
        if normalized {
            normalize(&mut row);
        }
        alpha.push(row);
    }
    alpha
}

/// Backward recursion with per-stage max normalization.
pub fn backward_recursion(gamma: &GammaTable, spec: &TrellisSpec, algo: Algorithm) -> StateTable {
    backward_recursion_with(gamma, spec, algo, true)
}

pub fn backward_recursion_with(
    gamma: &GammaTable,
    spec: &TrellisSpec,
    algo: Algorithm,
    normalized: bool,
) -> StateTable {
    let k = info_stages(gamma);
    let stages = gamma.len();
    let mut beta = vec![[0.0; NUM_STATES]; stages + 1];
    beta[stages] = boundary_metrics();
    for j in (0..stages).rev() {
        let next = beta[j + 1];
        let g = &gamma[j];
        let mut row = [0.0; NUM_STATES];
        for (s, v) in row.iter_mut().enumerate() {
            *v = if j < k {
                let t0 = 2 * s;
                let t1 = 2 * s + 1;
                let a = next[spec.transition(t0).to as usize] + g[t0];
                let b = next[spec.transition(t1).to as usize] + g[t1];
                algo.combine(a, b)
            } else {
                let t = spec.tail_transition(s) as usize;
                next[spec.transition(t).to as usize] + g[t]
            };
        }
        if normalized {
            normalize(&mut row);
        }
        beta[j] = row;
    }
    beta
}

/// `L(u_j | y)` for the information stages only.
pub fn posterior_llrs(metrics: &TrellisMetrics, spec: &TrellisSpec, algo: Algorithm) -> Vec<f64> {
    let k = info_stages(&metrics.gamma);
    (0..k)
        .map(|j| {
            let alpha = &metrics.alpha[j];
            let beta = &metrics.beta[j + 1];
            let g = &metrics.gamma[j];
            let mut best = [f64::NEG_INFINITY; 2];
            let mut first = [true; 2];
            for (t, tr) in spec.transitions().iter().enumerate() {
                let m = alpha[tr.from as usize] + g[t] + beta[tr.to as usize];
                let b = tr.input as usize;
                best[b] = if first[b] {
                    m
                } else {
                    algo.combine(best[b], m)
                };
                first[b] = false;
            }
            best[1] - best[0]
        })
        .collect()
}

/// Runs the full BCJR pass and returns the trellis metrics alongside the output.
pub fn siso_decode_with_metrics(
    input: &SisoInput<'_>,
    spec: &TrellisSpec,
    algo: Algorithm,
) -> Result<(SisoOutput, TrellisMetrics)> {
    input.check()?;
    let gamma = branch_metrics(input, spec);
    let alpha = forward_recursion(&gamma, spec, algo);
    let beta = backward_recursion(&gamma, spec, algo);
    let metrics = TrellisMetrics { gamma, alpha, beta };
    let posterior = posterior_llrs(&metrics, spec, algo);
    let extrinsic = extrinsic(&posterior, input.ys, input.la);
    Ok((
        SisoOutput {
            posterior,
            extrinsic,
        },
        metrics,
    ))
}

pub fn siso_decode(
    input: &SisoInput<'_>,
    spec: &TrellisSpec,
    algo: Algorithm,
) -> Result<SisoOutput> {
    siso_decode_with_metrics(input, spec, algo).map(|(out, _)| out)
}

/// `L_e = L(u|y) - y^s - L(u)`.
pub fn extrinsic(posterior: &[f64], ys: &[f64], la: &[f64]) -> Vec<f64> {
    posterior
        .iter()
        .zip(ys)
        .zip(la)
        .map(|((p, y), a)| p - y - a)
        .collect()
}

/// Hard decision: bit 1 when the LLR is non-negative.
pub fn hard_decision(llrs: &[f64]) -> Vec<Bit> {
    llrs.iter().map(|&l| Bit::from(l >= 0.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    /// Final a posteriori LLRs in natural bit order.
    pub llrs: Vec<f64>,
    pub bits: Vec<Bit>,
}

/// Iterative turbo decoding with `iterations` full iterations.
pub fn turbo_decode(
    frame: &LlrFrame,
    config: &TurboCodeConfig,
    iterations: usize,
    algo: Algorithm,
) -> Result<DecodeOutput> {
    if iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be at least 1".into()));
    }
    let k = config.k();
    frame.validate(k)?;
    let spec = config.trellis();
    let il = config.interleaver();
    let (t1s, t1p) = frame.tail_of(1);
    let (t2s, t2p) = frame.tail_of(2);
    let ys2 = il.interleave(&frame.ys)?;
    let mut la1 = vec![0.0; k];
    let mut la2 = vec![0.0; k];
    let mut llrs = vec![0.0; k];
    for it in 0..iterations {
        let out1 = siso_decode(
            &SisoInput {
                ys: &frame.ys,
                yp: &frame.y1p,
                la: &la1,
                tail_ys: t1s,
                tail_yp: t1p,
            },
            spec,
            algo,
        )?;
        il.interleave_into(&out1.extrinsic, &mut la2);
        let out2 = siso_decode(
            &SisoInput {
                ys: &ys2,
                yp: &frame.y2p,
                la: &la2,
                tail_ys: t2s,
                tail_yp: t2p,
            },
            spec,
            algo,
        )?;
        if it + 1 == iterations {
            il.deinterleave_into(&out2.posterior, &mut llrs);
        } else {
            il.deinterleave_into(&out2.extrinsic, &mut la1);
        }
    }
    let bits = hard_decision(&llrs);
    Ok(DecodeOutput { llrs, bits })
}

/// Exact MAP posteriors by summing over every input sequence.
///
/// Each sequence is run through the encoder, terminated, and scored with the
/// same branch metric as [`branch_metrics`]; the per-bit sums are combined
/// with a log-sum-exp. Cost is `O(2^K K)`.
pub fn exhaustive_map_oracle(input: &SisoInput<'_>, spec: &TrellisSpec) -> Result<Vec<f64>> {
    input.check()?;
    let k = input.k();
    if k == 0 {
        return Err(Error::EmptyInput);
    }
    if k > ORACLE_MAX_K {
        return Err(Error::OracleTooLarge {
            k,
            max: ORACLE_MAX_K,
        });
    }
    let sign = |b: Bit| if b == 1 { 1.0 } else { -1.0 };
    let mut paths = Vec::with_capacity(1 << k);
    for word in 0u32..(1 << k) {
        let u: Vec<Bit> = (0..k).map(|i| ((word >> i) & 1) as Bit).collect();
        let enc = rsce_encode(spec, &u)?;
        let mut metric = 0.0;
        for i in 0..k {
            metric += 0.5 * sign(u[i]) * input.la[i]
                + 0.5 * sign(u[i]) * input.ys[i]
                + 0.5 * sign(enc.parity[i]) * input.yp[i];
        }
        for i in 0..MEMORY {
            metric += 0.5 * sign(enc.tail_systematic[i]) * input.tail_ys[i]
                + 0.5 * sign(enc.tail_parity[i]) * input.tail_yp[i];
        }
        paths.push((word, metric));
    }
    let mut peak = vec![[f64::NEG_INFINITY; 2]; k];
    for &(word, m) in &paths {
        for (i, p) in peak.iter_mut().enumerate() {
            let b = ((word >> i) & 1) as usize;
            p[b] = p[b].max(m);
        }
    }
    let mut sums = vec![[0.0f64; 2]; k];
    for &(word, m) in &paths {
        for (i, s) in sums.iter_mut().enumerate() {
            let b = ((word >> i) & 1) as usize;
            s[b] += (m - peak[i][b]).exp();
        }
    }
    Ok((0..k)
        .map(|i| (peak[i][1] + sums[i][1].ln()) - (peak[i][0] + sums[i][0].ln()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelConfig;
    use crate::codec::{depuncture, encode_flat};
    use crate::rng::stream_rng;
    use crate::trellis::build_trellis;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    struct Owned {
        ys: Vec<f64>,
        yp: Vec<f64>,
        la: Vec<f64>,
        tail_ys: [f64; 3],
        tail_yp: [f64; 3],
    }

    impl Owned {
        fn random(k: usize, seed: u64, scale: f64) -> Self {
            let mut rng = stream_rng(seed, 99, k as u64);
            let mut draw = |n: usize| -> Vec<f64> {
                (0..n)
                    .map(|_| scale * rng.random_range(-1.0..1.0))
                    .collect()
            };
            let ys = draw(k);
            let yp = draw(k);
            let la = draw(k);
            let t = draw(6);
            Owned {
                ys,
                yp,
                la,
                tail_ys: [t[0], t[1], t[2]],
                tail_yp: [t[3], t[4], t[5]],
            }
        }

        fn zeros(k: usize) -> Self {
            Owned {
                ys: vec![0.0; k],
                yp: vec![0.0; k],
                la: vec![0.0; k],
                tail_ys: [0.0; 3],
                tail_yp: [0.0; 3],
            }
        }

        fn input(&self) -> SisoInput<'_> {
            SisoInput {
                ys: &self.ys,
                yp: &self.yp,
                la: &self.la,
                tail_ys: self.tail_ys,
                tail_yp: self.tail_yp,
            }
        }
    }

    #[test]
    fn maxstar_examples() {
        assert_abs_diff_eq!(maxstar(0.0, 0.0), 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(maxstar(5.0, 0.0), 5.006_715_348_489_118, epsilon = 1e-12);
        assert_abs_diff_eq!(maxstar(0.0, 5.0), maxstar(5.0, 0.0), epsilon = 1e-15);
        let x = 3.0;
        let d = maxstar(x, LOG_ZERO) - x;
        assert!((0.0..1e-40).contains(&d));
    }

    #[test]
    fn branch_metric_examples() {
        let spec = build_trellis();
        let o = Owned {
            ys: vec![2.0],
            yp: vec![-1.0],
            la: vec![0.5],
            tail_ys: [0.0; 3],
            tail_yp: [0.0; 3],
        };
        let g = branch_metrics(&o.input(), &spec);
        for (t, tr) in spec.transitions().iter().enumerate() {
            match (tr.input, tr.parity) {
                (1, 1) => assert_abs_diff_eq!(g[0][t], 0.75, epsilon = 1e-15),
                (0, 1) => assert_abs_diff_eq!(g[0][t], -1.75, epsilon = 1e-15),
                _ => {}
            }
        }
        let z = branch_metrics(&Owned::zeros(5).input(), &spec);
        assert!(z.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn first_forward_stage_has_two_live_states() {
        let spec = build_trellis();
        let gamma = branch_metrics(&Owned::zeros(6).input(), &spec);
        let alpha = forward_recursion_with(&gamma, &spec, Algorithm::MaxLogMap, false);
        assert_eq!(alpha[1][0], 0.0);
        assert_eq!(alpha[1][4], 0.0);
        for s in [1, 2, 3, 5, 6, 7] {
            assert_eq!(alpha[1][s], LOG_ZERO);
        }
        let beta = backward_recursion_with(&gamma, &spec, Algorithm::MaxLogMap, false);
        // One step back from the terminal boundary only states 0 and 1 reach state 0.
        assert_eq!(beta[8][0], 0.0);
        assert_eq!(beta[8][1], 0.0);
        for s in 2..8 {
            assert_eq!(beta[8][s], LOG_ZERO);
        }
    }

    #[test]
    fn logmap_metrics_dominate_maxlogmap() {
        let spec = build_trellis();
        for seed in 0..20 {
            let o = Owned::random(12, seed, 4.0);
            let gamma = branch_metrics(&o.input(), &spec);
            for (log, max) in [
                (
                    forward_recursion_with(&gamma, &spec, Algorithm::LogMap, false),
                    forward_recursion_with(&gamma, &spec, Algorithm::MaxLogMap, false),
                ),
                (
                    backward_recursion_with(&gamma, &spec, Algorithm::LogMap, false),
                    backward_recursion_with(&gamma, &spec, Algorithm::MaxLogMap, false),
                ),
            ] {
                for (a, b) in log.iter().zip(&max) {
                    for s in 0..8 {
                        assert!(a[s] >= b[s] - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn normalization_does_not_change_posteriors() {
        let spec = build_trellis();
        for seed in 0..100 {
            let o = Owned::random(40, seed, 3.0);
            let gamma = branch_metrics(&o.input(), &spec);
            for algo in [Algorithm::LogMap, Algorithm::MaxLogMap] {
                let norm = TrellisMetrics {
                    alpha: forward_recursion_with(&gamma, &spec, algo, true),
                    beta: backward_recursion_with(&gamma, &spec, algo, true),
                    gamma: gamma.clone(),
                };
                let raw = TrellisMetrics {
                    alpha: forward_recursion_with(&gamma, &spec, algo, false),
                    beta: backward_recursion_with(&gamma, &spec, algo, false),
                    gamma: gamma.clone(),
                };
                let a = posterior_llrs(&norm, &spec, algo);
                let b = posterior_llrs(&raw, &spec, algo);
                for (x, y) in a.iter().zip(&b) {
                    assert_abs_diff_eq!(x, y, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn zero_frame_gives_zero_outputs() {
        let spec = build_trellis();
        let o = Owned::zeros(10);
        for algo in [Algorithm::LogMap, Algorithm::MaxLogMap] {
            let out = siso_decode(&o.input(), &spec, algo).unwrap();
            assert!(out.posterior.iter().all(|&v| v.abs() < 1e-12));
            assert!(out.extrinsic.iter().all(|&v| v.abs() < 1e-12));
        }
        let oracle = exhaustive_map_oracle(&Owned::zeros(4).input(), &spec).unwrap();
        assert!(oracle.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn strong_systematic_evidence_sets_the_sign() {
        let spec = build_trellis();
        let mut o = Owned::zeros(10);
        o.ys[4] = 6.0;
        let out = siso_decode(&o.input(), &spec, Algorithm::LogMap).unwrap();
        assert!(out.posterior[4] > 0.0);
    }

    #[test]
    fn extrinsic_identity() {
        assert_eq!(extrinsic(&[3.0], &[1.0], &[0.5]), vec![1.5]);
        let spec = build_trellis();
        let o = Owned::random(20, 3, 3.0);
        for algo in [Algorithm::LogMap, Algorithm::MaxLogMap] {
            let out = siso_decode(&o.input(), &spec, algo).unwrap();
            for j in 0..20 {
                assert_eq!(out.extrinsic[j], out.posterior[j] - o.ys[j] - o.la[j]);
            }
        }
    }

    #[test]
    fn logmap_matches_exhaustive_oracle() {
        let spec = build_trellis();
        for k in [1, 2, 4, 8] {
            for seed in 0..10 {
                let o = Owned::random(k, seed, 4.0);
                let oracle = exhaustive_map_oracle(&o.input(), &spec).unwrap();
                let out = siso_decode(&o.input(), &spec, Algorithm::LogMap).unwrap();
                for j in 0..k {
                    assert_abs_diff_eq!(out.posterior[j], oracle[j], epsilon = 1e-9);
                    assert_abs_diff_eq!(
                        out.extrinsic[j],
                        oracle[j] - o.ys[j] - o.la[j],
                        epsilon = 1e-9
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_single_bit_by_hand() {
        // K=1: u=0 stays in state 0 (all-zero tail); u=1 drives 0 -> 4 and the
        // flush walks 4 -> 2 -> 1 -> 0 emitting systematic 0,1,1 and parity 1,0,1.
        let spec = build_trellis();
        let o = Owned::random(1, 7, 2.0);
        let enc = rsce_encode(&spec, &[1]).unwrap();
        assert_eq!(enc.tail_systematic, [0, 1, 1]);
        assert_eq!(enc.tail_parity, [1, 0, 1]);
        let s = |b: u8| if b == 1 { 1.0 } else { -1.0 };
        let path = |u: u8, par: u8, ts: [u8; 3], tp: [u8; 3]| {
            let mut m = 0.5 * s(u) * (o.la[0] + o.ys[0]) + 0.5 * s(par) * o.yp[0];
            for i in 0..3 {
                m += 0.5 * s(ts[i]) * o.tail_ys[i] + 0.5 * s(tp[i]) * o.tail_yp[i];
            }
            m
        };
        let m1 = path(1, 1, [0, 1, 1], [1, 0, 1]);
        let m0 = path(0, 0, [0; 3], [0; 3]);
        let oracle = exhaustive_map_oracle(&o.input(), &spec).unwrap();
        assert_abs_diff_eq!(oracle[0], m1 - m0, epsilon = 1e-12);
    }

    #[test]
    fn oracle_rejects_large_blocks() {
        let spec = build_trellis();
        assert!(matches!(
            exhaustive_map_oracle(&Owned::zeros(13).input(), &spec),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn noiseless_frames_decode_exactly() {
        for punctured in [false, true] {
            let cfg = TurboCodeConfig::lte40(punctured);
            let ch = ChannelConfig::noiseless();
            for seed in 0..5 {
                let mut rng = stream_rng(seed, 0, 0);
                let u: Vec<u8> = (0..40).map(|_| rng.random_range(0..2)).collect();
                let llr = ch
                    .transmit(&encode_flat(&cfg, &u).unwrap(), &mut rng)
                    .unwrap();
                let frame = depuncture(&cfg, &llr).unwrap();
                for algo in [Algorithm::LogMap, Algorithm::MaxLogMap] {
                    let out = turbo_decode(&frame, &cfg, 3, algo).unwrap();
                    assert_eq!(out.bits, u);
                }
            }
        }
    }

    #[test]
    fn zero_iterations_rejected() {
        let cfg = TurboCodeConfig::lte40(false);
        assert!(turbo_decode(&LlrFrame::zeros(40), &cfg, 0, Algorithm::LogMap).is_err());
    }
}
