use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// ADAM hyper-parameters other than the learning rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Moment accumulators, shaped like the flat weight vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }
}

/// One bias-corrected ADAM update of `weights` in place.
pub fn adam_step(
    weights: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    lr: f64,
    cfg: &AdamConfig,
) -> Result<()> {
    let n = weights.len();
    for len in [grads.len(), state.m.len(), state.v.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    state.t += 1;
    let bc1 = 1.0 - cfg.beta1.powi(state.t as i32);
    let bc2 = 1.0 - cfg.beta2.powi(state.t as i32);
    for i in 0..n {
        let g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        weights[i] -= lr * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_weights() {
        let mut w = vec![1.0, 2.0, -3.0];
        let mut s = AdamState::new(3);
        adam_step(&mut w, &[0.0; 3], &mut s, 0.1, &AdamConfig::default()).unwrap();
        assert_eq!(w, vec![1.0, 2.0, -3.0]);
        assert_eq!(s.t, 1);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let lr = 1e-3;
        let grads = [1e-6, -0.5, 3.0, -200.0];
        let mut w = vec![0.0; 4];
        let mut s = AdamState::new(4);
        adam_step(&mut w, &grads, &mut s, lr, &AdamConfig::default()).unwrap();
        for (dw, g) in w.iter().zip(&grads) {
            assert!(dw.abs() >= 0.9 * lr && dw.abs() <= lr, "{dw}");
            assert_eq!(dw.signum(), -g.signum());
        }
    }

    #[test]
    fn trajectories_are_deterministic() {
        let run = || {
            let mut w = vec![0.5; 3];
            let mut s = AdamState::new(3);
            for i in 0..10 {
                let g = [i as f64, -1.0, 0.25 * i as f64];
                adam_step(&mut w, &g, &mut s, 0.01, &AdamConfig::default()).unwrap();
            }
            w
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn shape_mismatch() {
        let mut s = AdamState::new(2);
        assert!(adam_step(
            &mut [0.0; 3],
            &[0.0; 3],
            &mut s,
            0.1,
            &AdamConfig::default()
        )
        .is_err());
    }
}
