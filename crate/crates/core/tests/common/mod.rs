//! Test-only oracles shared by the integration suites.
#![allow(dead_code)]

use rand::Rng;
use turbonet::channel::ChannelConfig;
use turbonet::codec::TurboCodeConfig;
use turbonet::net::{forward_with_tape, generate_sample, loss, loss_and_gradient, WeightSet};
use turbonet::rng::stream_rng;

/// Finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// Outcome of comparing analytic and finite-difference gradients on one draw.
#[derive(Debug, Clone, Copy)]
pub struct GradientCheck {
    pub checked: usize,
    pub skipped: usize,
    pub worst_relative_error: f64,
}

/// Draws a random frame (0..3 dB) and random weights in `[0.7, 1.3]`, then
/// compares the analytic gradient with central differences on `coords`
/// random coordinates.
///
/// A coordinate is eligible when the network's argmax pattern is unchanged
/// at `w +- 10h`, i.e. no competing max operand lies within `10h`. The
/// relative error uses `max(|analytic|, |fd|, 1e-7 * max(1, loss))` as its
/// scale; below that the central difference is dominated by roundoff
/// (about `1e-12 * loss` absolute at `h = 1e-4`).
pub fn check_gradient_draw(
    code: &TurboCodeConfig,
    units: usize,
    seed: u64,
    coords: usize,
) -> GradientCheck {
    let h = FD_STEP;
    let mut rng = stream_rng(seed, 77, 0);
    let snr = rng.random_range(0.0..3.0);
    let sample =
        generate_sample(code, &ChannelConfig::awgn(snr, code.rate()), 6, &mut rng).unwrap();
    let mut weights = WeightSet::ones(code.k(), units);
    for v in weights.values_mut() {
        *v = rng.random_range(0.7..1.3);
    }
    let (l0, grad) = loss_and_gradient(&sample.frame, code, &weights, &sample.target_llrs).unwrap();
    let base = forward_with_tape(&sample.frame, code, &weights)
        .unwrap()
        .decisions();

    let eval = |w: &WeightSet| {
        let tape = forward_with_tape(&sample.frame, code, w).unwrap();
        (loss(&tape.llrs, &sample.target_llrs), tape.decisions())
    };
    let shifted = |i: usize, d: f64| {
        let mut w = weights.clone();
        w.values_mut()[i] += d;
        w
    };

    let n = weights.values().len();
    let floor = 1e-7 * l0.max(1.0);
    let mut out = GradientCheck {
        checked: 0,
        skipped: 0,
        worst_relative_error: 0.0,
    };
    for _ in 0..coords {
        let i = rng.random_range(0..n);
        if eval(&shifted(i, 10.0 * h)).1 != base || eval(&shifted(i, -10.0 * h)).1 != base {
            out.skipped += 1;
            continue;
        }
        let fd = (eval(&shifted(i, h)).0 - eval(&shifted(i, -h)).0) / (2.0 * h);
        let a = grad.values()[i];
        let rel = (a - fd).abs() / a.abs().max(fd.abs()).max(floor);
        out.worst_relative_error = out.worst_relative_error.max(rel);
        out.checked += 1;
    }
    out
}
