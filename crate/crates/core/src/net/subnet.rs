//! One weighted max-log-MAP subnet, with a recorded forward pass and its
//! reverse-mode gradient.
//!
//! The forward pass keeps every intermediate value and, for every `max`, the
//! index of the winning operand (first operand on ties). The backward pass
//! routes each adjoint to that winner only, which is the exact derivative of
//! the piecewise-linear recursions away from ties.

use crate::decoder::{boundary_metrics, LOG_ZERO};
use crate::trellis::{TrellisSpec, MEMORY, NUM_STATES, NUM_TRANSITIONS};

use super::weights::{EXT_OFFSET, GAMMA_OFFSET, LLR_OFFSET, WEIGHTS_PER_POSITION};

/// Channel and a priori inputs of a subnet.
#[derive(Debug, Clone, Copy)]
pub struct SubnetInput<'a> {
    pub ys: &'a [f64],
    pub yp: &'a [f64],
    pub la: &'a [f64],
    pub tail_ys: [f64; MEMORY],
    pub tail_yp: [f64; MEMORY],
}

/// Everything the backward pass needs from one subnet evaluation.
#[derive(Debug, Clone)]
pub struct SubnetTape {
    ys: Vec<f64>,
    yp: Vec<f64>,
    la: Vec<f64>,
    gamma: Vec<[f64; NUM_TRANSITIONS]>,
    /// `alpha[j]` for `j < K`.
    alpha: Vec<[f64; NUM_STATES]>,
    alpha_arg: Vec<[u8; NUM_STATES]>,
    alpha_norm: Vec<u8>,
    /// `beta[j]` for `j <= K + 3`; row 0 is never computed.
    beta: Vec<[f64; NUM_STATES]>,
    beta_arg: Vec<[u8; NUM_STATES]>,
    beta_norm: Vec<u8>,
    /// Winning transition of the `u = 0` and `u = 1` reductions.
    post_arg: Vec<[u8; 2]>,
    pub posterior: Vec<f64>,
    pub extrinsic: Vec<f64>,
}

#[inline]
fn argmax_row(row: &[f64; NUM_STATES]) -> (usize, f64) {
    let mut best = 0;
    for s in 1..NUM_STATES {
        if row[s] > row[best] {
            best = s;
        }
    }
    (best, row[best])
}

/// Weighted branch metrics; tail stages are unweighted.
pub fn weighted_branch_metrics(
    input: &SubnetInput<'_>,
    weights: &[f64],
    spec: &TrellisSpec,
) -> Vec<[f64; NUM_TRANSITIONS]> {
    let k = input.ys.len();
    let mut gamma = Vec::with_capacity(k + MEMORY);
    for j in 0..k + MEMORY {
        let mut row = [0.0; NUM_TRANSITIONS];
        if j < k {
            let w = &weights[j * WEIGHTS_PER_POSITION + GAMMA_OFFSET..];
            let (ys, yp, la) = (input.ys[j], input.yp[j], input.la[j]);
            for (g, tr) in row.iter_mut().zip(spec.transitions()) {
                let u = tr.input_sign();
                let p = tr.parity_sign();
                *g = 0.5 * (w[0] * (u * la)) + 0.5 * (w[1] * (u * ys)) + 0.5 * (w[2] * (p * yp));
            }
        } else {
            let (ys, yp) = (input.tail_ys[j - k], input.tail_yp[j - k]);
            for (g, tr) in row.iter_mut().zip(spec.transitions()) {
                let u = tr.input_sign();
                let p = tr.parity_sign();
                *g = 0.5 * (u * 0.0) + 0.5 * (u * ys) + 0.5 * (p * yp);
            }
        }
        gamma.push(row);
    }
    gamma
}

/// `max_{S1}(w1 a + w2 g + w3 b) - max_{S0}(w4 a + w5 g + w6 b)` at one position,
/// returning the value and the winning transitions `[u=0, u=1]`.
#[inline]
fn weighted_posterior_at(
    spec: &TrellisSpec,
    alpha: &[f64; NUM_STATES],
    gamma: &[f64; NUM_TRANSITIONS],
    beta: &[f64; NUM_STATES],
    w: &[f64],
) -> (f64, [u8; 2]) {
    let mut best = [f64::NEG_INFINITY; 2];
    let mut arg = [u8::MAX; 2];
    for (t, tr) in spec.transitions().iter().enumerate() {
        let b = tr.input as usize;
        // S1 uses weights 0..3, S0 weights 3..6.
        let o = if b == 1 { 0 } else { 3 };
        let m = (w[o] * alpha[tr.from as usize] + w[o + 1] * gamma[t])
            + w[o + 2] * beta[tr.to as usize];
        if arg[b] == u8::MAX || m > best[b] {
            best[b] = m;
            arg[b] = t as u8;
        }
    }
    (best[1] - best[0], arg)
}

/// Weighted posterior LLRs from precomputed (unweighted) state metrics.
///
/// `alpha` and `beta` are indexed by stage boundary as in the classic decoder.
pub fn weighted_posterior(
    spec: &TrellisSpec,
    alpha: &[[f64; NUM_STATES]],
    gamma: &[[f64; NUM_TRANSITIONS]],
    beta: &[[f64; NUM_STATES]],
    weights: &[f64],
    k: usize,
) -> Vec<f64> {
    (0..k)
        .map(|j| {
            let w = &weights[j * WEIGHTS_PER_POSITION + LLR_OFFSET..];
            weighted_posterior_at(spec, &alpha[j], &gamma[j], &beta[j + 1], w).0
        })
        .collect()
}

/// `w1 L(u|y) - w2 y^s - w3 L(u)`.
pub fn weighted_extrinsic(posterior: &[f64], ys: &[f64], la: &[f64], weights: &[f64]) -> Vec<f64> {
    (0..posterior.len())
        .map(|j| {
            let w = &weights[j * WEIGHTS_PER_POSITION + EXT_OFFSET..];
            (w[0] * posterior[j] - w[1] * ys[j]) - w[2] * la[j]
        })
        .collect()
}

/// Runs one subnet and records the tape.
pub fn subnet_forward(spec: &TrellisSpec, input: &SubnetInput<'_>, weights: &[f64]) -> SubnetTape {
    let k = input.ys.len();
    let stages = k + MEMORY;
    let gamma = weighted_branch_metrics(input, weights, spec);

    // Forward metrics are only needed up to alpha[K - 1].
    let mut alpha = Vec::with_capacity(k);
    let mut alpha_arg = vec![[0u8; NUM_STATES]; k];
    let mut alpha_norm = vec![0u8; k];
    alpha.push(boundary_metrics());
    for j in 1..k {
        let prev = &alpha[j - 1];
        let g = &gamma[j - 1];
        let mut row = [0.0; NUM_STATES];
        for s in 0..NUM_STATES {
            let [t0, t1] = spec.incoming(s);
            let a = prev[spec.transition(t0 as usize).from as usize] + g[t0 as usize];
            let b = prev[spec.transition(t1 as usize).from as usize] + g[t1 as usize];
            if b > a {
                row[s] = b;
                alpha_arg[j][s] = t1;
            } else {
                row[s] = a;
                alpha_arg[j][s] = t0;
            }
        }
        let (arg, m) = argmax_row(&row);
        for v in row.iter_mut() {
            *v -= m;
        }
        alpha_norm[j] = arg as u8;
        alpha.push(row);
    }

    let mut beta = vec![[0.0; NUM_STATES]; stages + 1];
    let mut beta_arg = vec![[0u8; NUM_STATES]; stages + 1];
    let mut beta_norm = vec![0u8; stages + 1];
    beta[stages] = boundary_metrics();
    for j in (1..stages).rev() {
        let next = beta[j + 1];
        let g = &gamma[j];
        let mut row = [0.0; NUM_STATES];
        for s in 0..NUM_STATES {
            if j < k {
                let (t0, t1) = (2 * s, 2 * s + 1);
                let a = next[spec.transition(t0).to as usize] + g[t0];
                let b = next[spec.transition(t1).to as usize] + g[t1];
                if b > a {
                    row[s] = b;
                    beta_arg[j][s] = t1 as u8;
                } else {
                    row[s] = a;
                    beta_arg[j][s] = t0 as u8;
                }
            } else {
                let t = spec.tail_transition(s) as usize;
                row[s] = next[spec.transition(t).to as usize] + g[t];
                beta_arg[j][s] = t as u8;
            }
        }
        let (arg, m) = argmax_row(&row);
        for v in row.iter_mut() {
            *v -= m;
        }
        beta_norm[j] = arg as u8;
        beta[j] = row;
    }
    debug_assert!(beta[stages].iter().skip(1).all(|&v| v == LOG_ZERO));

    let mut posterior = Vec::with_capacity(k);
    let mut post_arg = Vec::with_capacity(k);
    for j in 0..k {
        let w = &weights[j * WEIGHTS_PER_POSITION + LLR_OFFSET..];
        let (p, arg) = weighted_posterior_at(spec, &alpha[j], &gamma[j], &beta[j + 1], w);
        posterior.push(p);
        post_arg.push(arg);
    }
    let extrinsic = weighted_extrinsic(&posterior, input.ys, input.la, weights);

    SubnetTape {
        ys: input.ys.to_vec(),
        yp: input.yp.to_vec(),
        la: input.la.to_vec(),
        gamma,
        alpha,
        alpha_arg,
        alpha_norm,
        beta,
        beta_arg,
        beta_norm,
        post_arg,
        posterior,
        extrinsic,
    }
}

impl SubnetTape {
    /// Every discrete choice made by the forward pass, in a fixed order.
    ///
    /// Two evaluations with equal decision vectors lie on the same linear
    /// piece of the network.
    pub fn decisions(&self) -> Vec<u8> {
        let mut d = Vec::new();
        for row in &self.alpha_arg {
            d.extend_from_slice(row);
        }
        d.extend_from_slice(&self.alpha_norm);
        for row in &self.beta_arg {
            d.extend_from_slice(row);
        }
        d.extend_from_slice(&self.beta_norm);
        for a in &self.post_arg {
            d.extend_from_slice(a);
        }
        d
    }

    /// Accumulates weight gradients into `grad` (a `K * 12` block) and returns
    /// the adjoint of the a priori input.
    ///
    /// `d_post` is the adjoint reaching the posterior directly (from the loss),
    /// `d_ext` the adjoint reaching the extrinsic output.
    pub fn backward(
        &self,
        spec: &TrellisSpec,
        weights: &[f64],
        d_post: Option<&[f64]>,
        d_ext: Option<&[f64]>,
        grad: &mut [f64],
    ) -> Vec<f64> {
        let k = self.ys.len();
        let stages = k + MEMORY;
        let mut d_la = vec![0.0; k];
        let mut dp = match d_post {
            Some(d) => d.to_vec(),
            None => vec![0.0; k],
        };

        if let Some(de) = d_ext {
            for j in 0..k {
                let o = j * WEIGHTS_PER_POSITION + EXT_OFFSET;
                let w = &weights[o..o + 3];
                let g = de[j];
                dp[j] += w[0] * g;
                grad[o] += self.posterior[j] * g;
                grad[o + 1] -= self.ys[j] * g;
                grad[o + 2] -= self.la[j] * g;
                d_la[j] -= w[2] * g;
            }
        }

        let mut d_gamma = vec![[0.0; NUM_TRANSITIONS]; stages];
        let mut d_alpha = vec![[0.0; NUM_STATES]; k];
        let mut d_beta = vec![[0.0; NUM_STATES]; stages + 1];

        for j in 0..k {
            let g = dp[j];
            if g == 0.0 {
                continue;
            }
            let o = j * WEIGHTS_PER_POSITION + LLR_OFFSET;
            let w = &weights[o..o + 6];
            for (b, sign, wo) in [(1usize, 1.0, 0usize), (0, -1.0, 3)] {
                let t = self.post_arg[j][b] as usize;
                let tr = spec.transition(t);
                let (from, to) = (tr.from as usize, tr.to as usize);
                let gs = sign * g;
                grad[o + wo] += self.alpha[j][from] * gs;
                grad[o + wo + 1] += self.gamma[j][t] * gs;
                grad[o + wo + 2] += self.beta[j + 1][to] * gs;
                d_alpha[j][from] += w[wo] * gs;
                d_gamma[j][t] += w[wo + 1] * gs;
                d_beta[j + 1][to] += w[wo + 2] * gs;
            }
        }

        // beta rows were produced from K+2 down to 1; unwind in the opposite order.
        for j in 1..stages {
            let d = d_beta[j];
            let total: f64 = d.iter().sum();
            if total == 0.0 && d.iter().all(|&v| v == 0.0) {
                continue;
            }
            let mut raw = d;
            raw[self.beta_norm[j] as usize] -= total;
            for (s, &r) in raw.iter().enumerate() {
                if r == 0.0 {
                    continue;
                }
                let t = self.beta_arg[j][s] as usize;
                d_beta[j + 1][spec.transition(t).to as usize] += r;
                d_gamma[j][t] += r;
            }
        }

        for j in (1..k).rev() {
            let d = d_alpha[j];
            let total: f64 = d.iter().sum();
            if total == 0.0 && d.iter().all(|&v| v == 0.0) {
                continue;
            }
            let mut raw = d;
            raw[self.alpha_norm[j] as usize] -= total;
            for (s, &r) in raw.iter().enumerate() {
                if r == 0.0 {
                    continue;
                }
                let t = self.alpha_arg[j][s] as usize;
                d_alpha[j - 1][spec.transition(t).from as usize] += r;
                d_gamma[j - 1][t] += r;
            }
        }

        for j in 0..k {
            let o = j * WEIGHTS_PER_POSITION + GAMMA_OFFSET;
            let w0 = weights[o];
            let (ys, yp, la) = (self.ys[j], self.yp[j], self.la[j]);
            for (t, tr) in spec.transitions().iter().enumerate() {
                let g = d_gamma[j][t];
                if g == 0.0 {
                    continue;
                }
                let u = tr.input_sign();
                let p = tr.parity_sign();
                grad[o] += 0.5 * (u * la) * g;
                grad[o + 1] += 0.5 * (u * ys) * g;
                grad[o + 2] += 0.5 * (p * yp) * g;
                d_la[j] += 0.5 * w0 * u * g;
            }
        }
        d_la
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{
        backward_recursion, branch_metrics, forward_recursion, posterior_llrs, Algorithm,
        SisoInput, TrellisMetrics,
    };
    use crate::rng::stream_rng;
    use crate::trellis::build_trellis;
    use rand::Rng;

    fn random_vec(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
        (0..n)
            .map(|_| scale * rng.random_range(-1.0..1.0))
            .collect()
    }

    #[test]
    fn unit_weights_reduce_to_classic_metrics() {
        let spec = build_trellis();
        let mut rng = stream_rng(1, 0, 0);
        let k = 12;
        let (ys, yp, la) = (
            random_vec(&mut rng, k, 3.0),
            random_vec(&mut rng, k, 3.0),
            random_vec(&mut rng, k, 3.0),
        );
        let input = SubnetInput {
            ys: &ys,
            yp: &yp,
            la: &la,
            tail_ys: [0.3, -1.0, 2.0],
            tail_yp: [1.0, 0.5, -0.2],
        };
        let w = vec![1.0; k * WEIGHTS_PER_POSITION];
        let classic_in = SisoInput {
            ys: &ys,
            yp: &yp,
            la: &la,
            tail_ys: input.tail_ys,
            tail_yp: input.tail_yp,
        };
        let g = weighted_branch_metrics(&input, &w, &spec);
        assert_eq!(g, branch_metrics(&classic_in, &spec));

        let tape = subnet_forward(&spec, &input, &w);
        let alpha = forward_recursion(&g, &spec, Algorithm::MaxLogMap);
        let beta = backward_recursion(&g, &spec, Algorithm::MaxLogMap);
        let classic = posterior_llrs(
            &TrellisMetrics {
                gamma: g.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
            &spec,
            Algorithm::MaxLogMap,
        );
        assert_eq!(tape.posterior, classic);
        assert_eq!(weighted_posterior(&spec, &alpha, &g, &beta, &w, k), classic);
    }

    #[test]
    fn gamma_weight_examples() {
        let spec = build_trellis();
        let ys = [1.5];
        let zeros = [0.0];
        let input = SubnetInput {
            ys: &ys,
            yp: &zeros,
            la: &zeros,
            tail_ys: [0.0; 3],
            tail_yp: [0.0; 3],
        };
        let mut w = vec![1.0; WEIGHTS_PER_POSITION];
        let base = weighted_branch_metrics(&input, &w, &spec);
        w[1] = 2.0;
        let doubled = weighted_branch_metrics(&input, &w, &spec);
        for t in 0..NUM_TRANSITIONS {
            assert_eq!(doubled[0][t], 2.0 * base[0][t]);
        }
        let zero_w = vec![0.0; WEIGHTS_PER_POSITION];
        let la = [0.7];
        let yp = [-2.0];
        let z = weighted_branch_metrics(
            &SubnetInput {
                la: &la,
                yp: &yp,
                ..input
            },
            &zero_w,
            &spec,
        );
        assert!(z[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn extrinsic_weight_examples() {
        let ones = vec![1.0; WEIGHTS_PER_POSITION];
        assert_eq!(weighted_extrinsic(&[3.0], &[1.0], &[0.5], &ones), vec![1.5]);
        let mut w = vec![0.0; WEIGHTS_PER_POSITION];
        w[EXT_OFFSET] = 2.0;
        assert_eq!(weighted_extrinsic(&[1.25], &[9.0], &[4.0], &w), vec![2.5]);
        assert_eq!(weighted_extrinsic(&[0.0], &[0.0], &[0.0], &ones), vec![0.0]);
    }

    #[test]
    fn symmetric_weights_on_zero_frame_give_zero_posterior() {
        let spec = build_trellis();
        let k = 6;
        let z = vec![0.0; k];
        let input = SubnetInput {
            ys: &z,
            yp: &z,
            la: &z,
            tail_ys: [0.0; 3],
            tail_yp: [0.0; 3],
        };
        let mut rng = stream_rng(2, 0, 0);
        let mut w = vec![0.0; k * WEIGHTS_PER_POSITION];
        for j in 0..k {
            let o = j * WEIGHTS_PER_POSITION;
            for i in 0..WEIGHTS_PER_POSITION {
                w[o + i] = rng.random_range(0.5..1.5);
            }
            for i in 0..3 {
                w[o + LLR_OFFSET + 3 + i] = w[o + LLR_OFFSET + i];
            }
        }
        let tape = subnet_forward(&spec, &input, &w);
        assert!(tape.posterior.iter().all(|&p| p == 0.0));
    }

    /// Straight-line evaluation of the weighted posterior: every path metric
    /// written out explicitly, no shared helpers.
    #[test]
    fn weighted_posterior_matches_straight_line_evaluation() {
        let spec = build_trellis();
        let mut rng = stream_rng(3, 0, 0);
        for _ in 0..20 {
            let k = 5;
            let alpha: Vec<[f64; 8]> = (0..k + 4)
                .map(|_| std::array::from_fn(|_| rng.random_range(-5.0..0.0)))
                .collect();
            let beta: Vec<[f64; 8]> = (0..k + 4)
                .map(|_| std::array::from_fn(|_| rng.random_range(-5.0..0.0)))
                .collect();
            let gamma: Vec<[f64; 16]> = (0..k + 3)
                .map(|_| std::array::from_fn(|_| rng.random_range(-3.0..3.0)))
                .collect();
            let w: Vec<f64> = (0..k * WEIGHTS_PER_POSITION)
                .map(|_| rng.random_range(0.5..1.5))
                .collect();
            let got = weighted_posterior(&spec, &alpha, &gamma, &beta, &w, k);
            for j in 0..k {
                let lw = &w[j * 12 + 3..j * 12 + 9];
                let mut one = Vec::new();
                let mut zero = Vec::new();
                for from in 0..8usize {
                    for u in 0..2usize {
                        let to = spec.next_state[from][u] as usize;
                        let t = 2 * from + u;
                        if u == 1 {
                            one.push(
                                lw[0] * alpha[j][from]
                                    + lw[1] * gamma[j][t]
                                    + lw[2] * beta[j + 1][to],
                            );
                        } else {
                            zero.push(
                                lw[3] * alpha[j][from]
                                    + lw[4] * gamma[j][t]
                                    + lw[5] * beta[j + 1][to],
                            );
                        }
                    }
                }
                let m1 = one.iter().cloned().fold(f64::MIN, f64::max);
                let m0 = zero.iter().cloned().fold(f64::MIN, f64::max);
                assert!((got[j] - (m1 - m0)).abs() < 1e-12);
            }
        }
    }
}
