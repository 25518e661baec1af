//! Paired-noise BER sweep of log-MAP, max-log-MAP and TurboNet.
//!
//! cargo run --release --example ber_sweep [weights.json] [min_errors]
//!
//! Without a weight file TurboNet runs with all-ones weights, which makes its
//! column identical to max-log-MAP.

use std::path::Path;

use turbonet::codec::CodeSpec;
use turbonet::harness::io::WeightFile;
use turbonet::harness::{ber_simulate, compare_pair, DecoderSpec, ExperimentConfig};
use turbonet::net::WeightSet;

fn main() -> turbonet::Result<()> {
    let mut args = std::env::args().skip(1);
    let (code, weights) = match args.next() {
        Some(p) => {
            let f = WeightFile::load(Path::new(&p))?;
            (f.code, f.weight_set()?)
        }
        None => (CodeSpec::lte40(false), WeightSet::ones(40, 3)),
    };
    let min_errors = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let exp = ExperimentConfig {
        code,
        min_bit_errors: min_errors,
        decoders: vec![
            DecoderSpec::LogMap { iterations: 3 },
            DecoderSpec::MaxLogMap { iterations: 3 },
            DecoderSpec::Turbonet,
        ],
        ..Default::default()
    };
    let report = ber_simulate(&exp, Some(&weights))?;
    let names = report.decoders();
    println!(
        "{:>6} {:>9} {:>12} {:>12} {:>12} {:>10}",
        "snr", "frames", names[0], names[1], names[2], "net/max"
    );
    for snr in report.snr_points() {
        let row = |d: &str| report.row(snr, d).expect("row");
        let c = compare_pair(&report, snr, &names[2], &names[1]).expect("pair");
        println!(
            "{:>6} {:>9} {:>12.3e} {:>12.3e} {:>12.3e} {:>10.4}",
            snr,
            row(&names[0]).frames,
            row(&names[0]).ber,
            row(&names[1]).ber,
            row(&names[2]).ber,
            c.ratio
        );
    }
    report.write_csv(std::io::stdout())
}
