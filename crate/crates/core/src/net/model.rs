//! The unrolled TurboNet decoder: `M` decoding units, each a pair of weighted
//! max-log-MAP subnets wired like one turbo iteration.

use crate::channel::LlrFrame;
use crate::codec::TurboCodeConfig;
use crate::{Bit, Error, Result};

use super::subnet::{subnet_forward, SubnetInput, SubnetTape};
use super::weights::WeightSet;

/// Logistic function `1 / (1 + e^-x)`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurboNetOutput {
    /// `L^M(u_k | y)` in natural bit order.
    pub llrs: Vec<f64>,
    /// `o_k = sigmoid(L^M(u_k | y))`.
    pub outputs: Vec<f64>,
    pub bits: Vec<Bit>,
}

/// Recorded forward pass of the whole network.
#[derive(Debug, Clone)]
pub struct ForwardTape {
    /// `[subnet 1, subnet 2]` per unit.
    pub units: Vec<[SubnetTape; 2]>,
    pub llrs: Vec<f64>,
}

impl ForwardTape {
    pub fn decisions(&self) -> Vec<u8> {
        self.units
            .iter()
            .flat_map(|[a, b]| a.decisions().into_iter().chain(b.decisions()))
            .collect()
    }
}

fn check_shapes(frame: &LlrFrame, config: &TurboCodeConfig, weights: &WeightSet) -> Result<()> {
    weights.validate()?;
    if weights.k() != config.k() {
        return Err(Error::WeightShape(format!(
            "weights are for K={}, code has K={}",
            weights.k(),
            config.k()
        )));
    }
    frame.validate(config.k())
}

/// Runs all units and keeps the tape for [`backward`].
pub fn forward_with_tape(
    frame: &LlrFrame,
    config: &TurboCodeConfig,
    weights: &WeightSet,
) -> Result<ForwardTape> {
    check_shapes(frame, config, weights)?;
    let k = config.k();
    let spec = config.trellis();
    let il = config.interleaver();
    let (t1s, t1p) = frame.tail_of(1);
    let (t2s, t2p) = frame.tail_of(2);
    let mut ys2 = vec![0.0; k];
    il.interleave_into(&frame.ys, &mut ys2);

    let mut la1 = vec![0.0; k];
    let mut la2 = vec![0.0; k];
    let mut units = Vec::with_capacity(weights.units());
    for m in 0..weights.units() {
        let first = subnet_forward(
            spec,
            &SubnetInput {
                ys: &frame.ys,
                yp: &frame.y1p,
                la: &la1,
                tail_ys: t1s,
                tail_yp: t1p,
            },
            weights.block(m, 0),
        );
        il.interleave_into(&first.extrinsic, &mut la2);
        let second = subnet_forward(
            spec,
            &SubnetInput {
                ys: &ys2,
                yp: &frame.y2p,
                la: &la2,
                tail_ys: t2s,
                tail_yp: t2p,
            },
            weights.block(m, 1),
        );
        il.deinterleave_into(&second.extrinsic, &mut la1);
        units.push([first, second]);
    }
    let mut llrs = vec![0.0; k];
    if let Some([_, last]) = units.last() {
        il.deinterleave_into(&last.posterior, &mut llrs);
    }
    Ok(ForwardTape { units, llrs })
}

/// Decodes one frame.
pub fn turbonet_forward(
    frame: &LlrFrame,
    config: &TurboCodeConfig,
    weights: &WeightSet,
) -> Result<TurboNetOutput> {
    let tape = forward_with_tape(frame, config, weights)?;
    Ok(output_from_llrs(tape.llrs))
}

pub(crate) fn output_from_llrs(llrs: Vec<f64>) -> TurboNetOutput {
    let outputs: Vec<f64> = llrs.iter().map(|&l| sigmoid(l)).collect();
    // o_k >= 0.5 exactly when L >= 0; deciding on L avoids sigmoid rounding at |L| < 1e-16.
    let bits = llrs.iter().map(|&l| Bit::from(l >= 0.0)).collect();
    TurboNetOutput {
        llrs,
        outputs,
        bits,
    }
}

/// Mean squared error between network and target LLRs.
pub fn loss(llrs: &[f64], target: &[f64]) -> f64 {
    let k = llrs.len();
    llrs.iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / k as f64
}

/// Gradient of [`loss`] with respect to every weight, given a recorded forward pass.
pub fn backward(
    tape: &ForwardTape,
    config: &TurboCodeConfig,
    weights: &WeightSet,
    target: &[f64],
) -> Result<WeightSet> {
    let k = config.k();
    if target.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            actual: target.len(),
        });
    }
    let spec = config.trellis();
    let il = config.interleaver();
    let mut grad = weights.zeros_like();

    let scale = 2.0 / k as f64;
    let d_llr: Vec<f64> = tape
        .llrs
        .iter()
        .zip(target)
        .map(|(l, t)| scale * (l - t))
        .collect();
    let mut d_post2 = vec![0.0; k];
    il.interleave_into(&d_llr, &mut d_post2);

    let units = tape.units.len();
    let mut d_e2 = vec![0.0; k];
    let mut d_e1 = vec![0.0; k];
    for m in (0..units).rev() {
        let [first, second] = &tape.units[m];
        let last = m + 1 == units;

        let o2 = grad.block_offset(m, 1);
        let d_la2 = {
            let g = &mut grad.values_mut()[o2..o2 + k * super::WEIGHTS_PER_POSITION];
            if last {
                second.backward(spec, weights.block(m, 1), Some(&d_post2), None, g)
            } else {
                second.backward(spec, weights.block(m, 1), None, Some(&d_e2), g)
            }
        };
        il.deinterleave_into(&d_la2, &mut d_e1);

        let o1 = grad.block_offset(m, 0);
        let d_la1 = {
            let g = &mut grad.values_mut()[o1..o1 + k * super::WEIGHTS_PER_POSITION];
            first.backward(spec, weights.block(m, 0), None, Some(&d_e1), g)
        };
        il.interleave_into(&d_la1, &mut d_e2);
    }
    Ok(grad)
}

/// Forward pass, loss and gradient for one training example.
pub fn loss_and_gradient(
    frame: &LlrFrame,
    config: &TurboCodeConfig,
    weights: &WeightSet,
    target: &[f64],
) -> Result<(f64, WeightSet)> {
    let tape = forward_with_tape(frame, config, weights)?;
    let grad = backward(&tape, config, weights, target)?;
    Ok((loss(&tape.llrs, target), grad))
}
