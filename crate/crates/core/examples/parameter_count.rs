//! TurboNet parameter counts for a few configurations.
//!
//! cargo run --example parameter_count

use turbonet::cli::NEURAL_BCJR_PARAMETERS;
use turbonet::harness::count_parameters;
use turbonet::net::{parameter_count_formula, WeightSet};

fn main() {
    println!(
        "{:>4} {:>6} {:>7} {:>10} {:>10} {:>12}",
        "K", "units", "shared", "counted", "M*2*K*12", "vs 3.85M"
    );
    for (k, m, shared) in [
        (40, 3, false),
        (40, 3, true),
        (40, 5, false),
        (1, 1, false),
        (6144, 3, false),
    ] {
        let w = if shared {
            WeightSet::ones_shared(k, m)
        } else {
            WeightSet::ones(k, m)
        };
        let n = count_parameters(&w);
        println!(
            "{k:>4} {m:>6} {shared:>7} {n:>10} {:>10} {:>11.4}%",
            parameter_count_formula(k, m),
            100.0 * n as f64 / NEURAL_BCJR_PARAMETERS as f64
        );
    }
}
