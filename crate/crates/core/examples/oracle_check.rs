//! Compares the log-MAP SISO decoder with brute-force MAP decoding over all
//! 2^K input sequences.
//!
//! cargo run --release --example oracle_check [trials]

use turbonet::harness::oracle_check;

fn main() -> turbonet::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    println!(
        "{:>3} {:>8} {:>14} {:>14}",
        "K", "trials", "posterior", "extrinsic"
    );
    for k in 1..=10 {
        let r = oracle_check(k, trials, 0, 4.0)?;
        println!(
            "{:>3} {:>8} {:>14.3e} {:>14.3e}",
            k, r.trials, r.max_deviation, r.max_extrinsic_deviation
        );
    }
    Ok(())
}
