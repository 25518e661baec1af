//! Trains TurboNet and writes the weight file and loss history.
//!
//! cargo run --release --example train [epochs] [samples_per_epoch] [learning_rate] [punctured]
//!
//! Files are written to `target/turbonet-weights.json` and
//! `target/turbonet-weights.loss.csv`.

use std::fs;
use std::path::Path;

use turbonet::codec::CodeSpec;
use turbonet::harness::io::{write_loss_history, TrainingMetadata, WeightFile};
use turbonet::net::{train_with_observer, TrainingConfig};

fn main() -> turbonet::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize| args.get(i).map(String::as_str);
    let mut config = TrainingConfig::default();
    if let Some(v) = arg(0).and_then(|s| s.parse().ok()) {
        config.epochs = v;
    }
    if let Some(v) = arg(1).and_then(|s| s.parse().ok()) {
        config.samples_per_epoch = v;
    }
    if let Some(v) = arg(2).and_then(|s| s.parse().ok()) {
        config.learning_rate = v;
    }
    config.code = CodeSpec::lte40(arg(3) == Some("punctured"));

    println!("{:>5} {:>14} {:>14}", "epoch", "train", "validation");
    let outcome = train_with_observer(&config, |r| {
        println!(
            "{:>5} {:>14.6} {:>14.6}",
            r.epoch, r.train_loss, r.validation_loss
        );
    })?;
    println!("best epoch {}", outcome.best_epoch);

    let out = Path::new("target/turbonet-weights.json");
    let meta = TrainingMetadata::from_outcome(&config, &outcome);
    WeightFile::new(config.code, &outcome.weights, Some(meta)).save(out)?;
    let mut csv = Vec::new();
    write_loss_history(&outcome.history, &mut csv)?;
    let loss_path = out.with_extension("loss.csv");
    fs::write(&loss_path, csv).map_err(|e| turbonet::Error::Io {
        path: loss_path.clone(),
        source: e,
    })?;
    println!("wrote {} and {}", out.display(), loss_path.display());
    Ok(())
}
