//! Sends random blocks over AWGN and decodes them with log-MAP and
//! max-log-MAP for an increasing number of turbo iterations.
//!
//! cargo run --release --example classic_decode [snr_db] [frames]

use rand::Rng;
use turbonet::channel::ChannelConfig;
use turbonet::codec::{depuncture, encode_flat, TurboCodeConfig};
use turbonet::decoder::{turbo_decode, Algorithm};
use turbonet::rng::stream_rng;

fn main() -> turbonet::Result<()> {
    let mut args = std::env::args().skip(1);
    let snr: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let frames: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);

    let code = TurboCodeConfig::lte40(false);
    let channel = ChannelConfig::awgn(snr, code.rate());
    println!(
        "Eb/N0 {snr} dB, sigma {:.4}, {frames} frames",
        channel.sigma()
    );

    let mut errors = [[0u64; 6]; 2];
    for i in 0..frames {
        let mut rng = stream_rng(7, 0, i);
        let u: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
        let frame = depuncture(
            &code,
            &channel.transmit(&encode_flat(&code, &u)?, &mut rng)?,
        )?;
        for (a, algo) in [Algorithm::LogMap, Algorithm::MaxLogMap]
            .into_iter()
            .enumerate()
        {
            for it in 1..=6 {
                let out = turbo_decode(&frame, &code, it, algo)?;
                errors[a][it - 1] += out.bits.iter().zip(&u).filter(|(x, y)| x != y).count() as u64;
            }
        }
    }
    let bits = (frames * code.k() as u64) as f64;
    println!(
        "{:>12} {:>12} {:>12}",
        "iterations", "log-map", "max-log-map"
    );
    for it in 0..6 {
        println!(
            "{:>12} {:>12.3e} {:>12.3e}",
            it + 1,
            errors[0][it] as f64 / bits,
            errors[1][it] as f64 / bits
        );
    }
    Ok(())
}
