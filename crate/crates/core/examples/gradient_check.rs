//! Checks the reverse-mode TurboNet gradient against central differences on
//! a few random coordinates.
//!
//! cargo run --release --example gradient_check [seed]

use rand::Rng;
use turbonet::channel::ChannelConfig;
use turbonet::codec::TurboCodeConfig;
use turbonet::net::{forward_with_tape, generate_sample, loss, loss_and_gradient, WeightSet};
use turbonet::rng::stream_rng;

fn main() -> turbonet::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let code = TurboCodeConfig::lte40(false);
    let mut rng = stream_rng(seed, 0, 0);
    let sample = generate_sample(&code, &ChannelConfig::awgn(1.0, code.rate()), 6, &mut rng)?;
    let mut w = WeightSet::ones(code.k(), 3);
    for v in w.values_mut() {
        *v = rng.random_range(0.8..1.2);
    }
    let (l, grad) = loss_and_gradient(&sample.frame, &code, &w, &sample.target_llrs)?;
    println!("loss {l:.6}");
    println!(
        "{:>6} {:>14} {:>14} {:>10}",
        "index", "analytic", "central", "rel"
    );
    let h = 1e-4;
    let eval = |i: usize, d: f64| -> turbonet::Result<f64> {
        let mut v = w.clone();
        v.values_mut()[i] += d;
        let tape = forward_with_tape(&sample.frame, &code, &v)?;
        Ok(loss(&tape.llrs, &sample.target_llrs))
    };
    for _ in 0..12 {
        let i = rng.random_range(0..w.values().len());
        let fd = (eval(i, h)? - eval(i, -h)?) / (2.0 * h);
        let a = grad.values()[i];
        let rel = (a - fd).abs() / a.abs().max(fd.abs()).max(1e-7 * l.max(1.0));
        println!("{i:>6} {a:>14.6e} {fd:>14.6e} {rel:>10.2e}");
    }
    Ok(())
}
