use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelConfig, LlrFrame, Noise, SnrKind};
use crate::codec::{depuncture, encode_flat, CodeSpec, TurboCodeConfig};
use crate::decoder::{turbo_decode, Algorithm};
use crate::rng::{stream_rng, DOMAIN_TRAIN, DOMAIN_VALIDATION};
use crate::{Bit, Error, Result};

use super::adam::{adam_step, AdamConfig, AdamState};
use super::model::{forward_with_tape, loss, loss_and_gradient};
use super::weights::WeightSet;

/// Samples per gradient chunk; chunks are summed in index order.
const CHUNK: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingConfig {
    pub code: CodeSpec,
    /// Decoding units `M`.
    pub units: usize,
    /// Log-MAP iterations `T` used for the target LLRs.
    pub target_iterations: usize,
    pub train_snr_db: f64,
    pub snr_kind: SnrKind,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub samples_per_epoch: usize,
    /// Held-out frames used to pick the best weights.
    pub validation_samples: usize,
    pub seed: u64,
    pub adam: AdamConfig,
    /// Reuse one unit's weights in every unit.
    pub shared_weights: bool,
    /// Replaces the AWGN channel at `train_snr_db`, e.g. for noiseless tests.
    pub channel_override: Option<Noise>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            code: CodeSpec::lte40(false),
            units: 3,
            target_iterations: 6,
            train_snr_db: 0.0,
            snr_kind: SnrKind::EbN0,
            batch_size: 500,
            learning_rate: 1e-5,
            epochs: 10,
            samples_per_epoch: 20_000,
            validation_samples: 2_000,
            seed: 0,
            adam: AdamConfig::default(),
            shared_weights: false,
            channel_override: None,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.units == 0 {
            return bad("units must be at least 1");
        }
        if self.target_iterations == 0 {
            return bad("target_iterations must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be finite and non-negative");
        }
        if self.samples_per_epoch == 0 && self.epochs > 0 {
            return bad("samples_per_epoch must be positive");
        }
        self.channel().validate()?;
        TurboCodeConfig::new(self.code).map(|_| ())
    }

    pub fn channel(&self) -> ChannelConfig {
        match self.channel_override {
            Some(noise) => ChannelConfig { noise },
            None => ChannelConfig::with_kind(self.train_snr_db, self.snr_kind, self.code.rate()),
        }
    }

    pub fn initial_weights(&self) -> WeightSet {
        if self.shared_weights {
            WeightSet::ones_shared(self.code.k, self.units)
        } else {
            WeightSet::ones(self.code.k, self.units)
        }
    }
}

/// One training example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSample {
    pub frame: LlrFrame,
    /// Log-MAP posterior LLRs after `T` iterations, natural order.
    pub target_llrs: Vec<f64>,
    /// Transmitted bits, for monitoring only.
    pub true_bits: Vec<Bit>,
}

/// Draws one random block, sends it through the channel and labels it.
pub fn generate_sample<R: Rng + ?Sized>(
    code: &TurboCodeConfig,
    channel: &ChannelConfig,
    target_iterations: usize,
    rng: &mut R,
) -> Result<TrainingSample> {
    let u: Vec<Bit> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
    let llrs = channel.transmit(&encode_flat(code, &u)?, rng)?;
    let frame = depuncture(code, &llrs)?;
    let target = turbo_decode(&frame, code, target_iterations, Algorithm::LogMap)?;
    Ok(TrainingSample {
        frame,
        target_llrs: target.llrs,
        true_bits: u,
    })
}

/// Samples `start..start + count` of the stream `domain`; identical for a
/// given seed regardless of thread count.
pub fn generate_training_set(
    config: &TrainingConfig,
    domain: u64,
    start: u64,
    count: usize,
) -> Result<Vec<TrainingSample>> {
    let code = TurboCodeConfig::new(config.code)?;
    let channel = config.channel();
    channel.validate()?;
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(config.seed, domain, start + i);
            generate_sample(&code, &channel, config.target_iterations, &mut rng)
        })
        .collect()
}

/// Mean loss and mean gradient over `samples`.
pub fn batch_gradient(
    samples: &[TrainingSample],
    code: &TurboCodeConfig,
    weights: &WeightSet,
) -> Result<(f64, WeightSet)> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let partials: Vec<(f64, Vec<f64>)> = samples
        .par_chunks(CHUNK)
        .map(|chunk| -> Result<(f64, Vec<f64>)> {
            let mut total = 0.0;
            let mut acc = vec![0.0; weights.values().len()];
            for s in chunk {
                let (l, g) = loss_and_gradient(&s.frame, code, weights, &s.target_llrs)?;
                total += l;
                for (a, v) in acc.iter_mut().zip(g.values()) {
                    *a += v;
                }
            }
            Ok((total, acc))
        })
        .collect::<Result<_>>()?;
    let n = samples.len() as f64;
    let mut grad = weights.zeros_like();
    let mut total = 0.0;
    for (l, g) in partials {
        total += l;
        for (a, v) in grad.values_mut().iter_mut().zip(&g) {
            *a += v;
        }
    }
    for v in grad.values_mut() {
        *v /= n;
    }
    Ok((total / n, grad))
}

fn mean_loss(
    samples: &[TrainingSample],
    code: &TurboCodeConfig,
    weights: &WeightSet,
) -> Result<f64> {
    let losses: Vec<f64> = samples
        .par_iter()
        .map(|s| forward_with_tape(&s.frame, code, weights).map(|t| loss(&t.llrs, &s.target_llrs)))
        .collect::<Result<_>>()?;
    Ok(losses.iter().sum::<f64>() / losses.len().max(1) as f64)
}

/// Per-epoch losses. Epoch 0 is the untrained all-ones network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean of the minibatch losses seen during the epoch (before each update).
    pub train_loss: f64,
    /// Mean loss on the held-out set after the epoch.
    pub validation_loss: f64,
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    /// Weights with the lowest validation loss.
    pub weights: WeightSet,
    /// Weights after the last epoch.
    pub final_weights: WeightSet,
    pub history: Vec<EpochRecord>,
    pub best_epoch: usize,
}

impl TrainingOutcome {
    pub fn best_validation_loss(&self) -> f64 {
        self.history[self.best_epoch].validation_loss
    }
}

pub fn train(config: &TrainingConfig) -> Result<TrainingOutcome> {
    train_with_observer(config, |_| {})
}

/// Minibatch ADAM on fresh random data every epoch.
pub fn train_with_observer(
    config: &TrainingConfig,
    mut observer: impl FnMut(&EpochRecord),
) -> Result<TrainingOutcome> {
    config.validate()?;
    let code = TurboCodeConfig::new(config.code)?;
    let mut weights = config.initial_weights();
    let mut adam = AdamState::new(weights.values().len());

    let validation =
        generate_training_set(config, DOMAIN_VALIDATION, 0, config.validation_samples)?;
    let initial = if validation.is_empty() {
        f64::NAN
    } else {
        mean_loss(&validation, &code, &weights)?
    };
    let first = EpochRecord {
        epoch: 0,
        train_loss: initial,
        validation_loss: initial,
    };
    observer(&first);
    let mut history = vec![first];
    let mut best = (0usize, weights.clone());

    for epoch in 1..=config.epochs {
        let start = ((epoch - 1) * config.samples_per_epoch) as u64;
        let data = generate_training_set(config, DOMAIN_TRAIN, start, config.samples_per_epoch)?;
        let mut seen = 0usize;
        let mut total = 0.0;
        for (batch_idx, batch) in data.chunks(config.batch_size).enumerate() {
            let (l, grad) = batch_gradient(batch, &code, &weights)?;
            if !l.is_finite() || grad.values().iter().any(|g| !g.is_finite()) {
                return Err(Error::Diverged {
                    epoch,
                    batch: batch_idx,
                    loss: l,
                });
            }
            total += l * batch.len() as f64;
            seen += batch.len();
            adam_step(
                weights.values_mut(),
                grad.values(),
                &mut adam,
                config.learning_rate,
                &config.adam,
            )?;
        }
        let validation_loss = if validation.is_empty() {
            f64::NAN
        } else {
            mean_loss(&validation, &code, &weights)?
        };
        if !validation_loss.is_finite() && !validation.is_empty() {
            return Err(Error::Diverged {
                epoch,
                batch: seen / config.batch_size,
                loss: validation_loss,
            });
        }
        let rec = EpochRecord {
            epoch,
            train_loss: total / seen as f64,
            validation_loss,
        };
        observer(&rec);
        if validation_loss < history[best.0].validation_loss
            || history[best.0].validation_loss.is_nan()
        {
            best = (epoch, weights.clone());
        }
        history.push(rec);
    }

    Ok(TrainingOutcome {
        weights: best.1,
        final_weights: weights,
        best_epoch: best.0,
        history,
    })
}
