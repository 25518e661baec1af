//! With every weight equal to one, TurboNet is exactly max-log-MAP: decisions
//! match and LLRs agree to rounding.
//!
//! cargo run --release --example turbonet_reduction [frames]

use rand::Rng;
use turbonet::channel::ChannelConfig;
use turbonet::codec::{depuncture, encode_flat, TurboCodeConfig};
use turbonet::decoder::{turbo_decode, Algorithm};
use turbonet::net::{turbonet_forward, WeightSet};
use turbonet::rng::stream_rng;

fn main() -> turbonet::Result<()> {
    let frames: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1000);
    for punctured in [false, true] {
        let code = TurboCodeConfig::lte40(punctured);
        let ones = WeightSet::ones(code.k(), 3);
        let (mut worst, mut mismatches) = (0f64, 0usize);
        for i in 0..frames {
            let mut rng = stream_rng(1, 0, i);
            let snr = rng.random_range(0.0..3.0);
            let u: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
            let llrs = ChannelConfig::awgn(snr, code.rate())
                .transmit(&encode_flat(&code, &u)?, &mut rng)?;
            let frame = depuncture(&code, &llrs)?;
            let net = turbonet_forward(&frame, &code, &ones)?;
            let classic = turbo_decode(&frame, &code, 3, Algorithm::MaxLogMap)?;
            mismatches += net
                .bits
                .iter()
                .zip(&classic.bits)
                .filter(|(a, b)| a != b)
                .count();
            for (a, b) in net.llrs.iter().zip(&classic.llrs) {
                worst = worst.max((a - b).abs());
            }
        }
        println!(
            "({}, {}): {frames} frames, decision mismatches {mismatches}, max |dLLR| {worst:.3e}",
            code.k(),
            code.n()
        );
    }
    Ok(())
}
