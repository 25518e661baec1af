//! Weight files, datasets, loss histories and plain-text bit/LLR lists.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::SnrKind;
use crate::codec::CodeSpec;
use crate::net::{EpochRecord, TrainingConfig, TrainingOutcome, TrainingSample, WeightSet};
use crate::{Bit, Error, Result};

pub const WEIGHTS_FORMAT: &str = "turbonet-weights";
pub const DATASET_FORMAT: &str = "turbonet-dataset";
pub const FORMAT_VERSION: u32 = 1;
/// Human-readable description of the flat weight order.
pub const WEIGHT_LAYOUT: &str =
    "unit,subnet,position,[gamma_apriori,gamma_sys,gamma_par,llr1_alpha,llr1_gamma,llr1_beta,llr0_alpha,llr0_gamma,llr0_beta,ext_post,ext_sys,ext_apriori]";

/// Provenance of trained weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub train_snr_db: f64,
    pub snr_kind: SnrKind,
    pub target_iterations: usize,
    pub epochs: usize,
    pub samples_per_epoch: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub best_epoch: usize,
    pub best_validation_loss: f64,
    pub final_train_loss: f64,
}

impl TrainingMetadata {
    pub fn from_outcome(config: &TrainingConfig, outcome: &TrainingOutcome) -> Self {
        TrainingMetadata {
            seed: config.seed,
            train_snr_db: config.train_snr_db,
            snr_kind: config.snr_kind,
            target_iterations: config.target_iterations,
            epochs: config.epochs,
            samples_per_epoch: config.samples_per_epoch,
            batch_size: config.batch_size,
            learning_rate: config.learning_rate,
            best_epoch: outcome.best_epoch,
            best_validation_loss: outcome.best_validation_loss(),
            final_train_loss: outcome.history.last().map_or(f64::NAN, |r| r.train_loss),
        }
    }
}

/// Versioned weight document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub format: String,
    pub version: u32,
    pub code: CodeSpec,
    pub units: usize,
    pub shared: bool,
    pub layout: String,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingMetadata>,
}

impl WeightFile {
    pub fn new(code: CodeSpec, weights: &WeightSet, training: Option<TrainingMetadata>) -> Self {
        WeightFile {
            format: WEIGHTS_FORMAT.to_string(),
            version: FORMAT_VERSION,
            code,
            units: weights.units(),
            shared: weights.shared(),
            layout: WEIGHT_LAYOUT.to_string(),
            weights: weights.values().to_vec(),
            training,
        }
    }

    /// Checks the header and rebuilds the weight set.
    pub fn weight_set(&self) -> Result<WeightSet> {
        check_header(&self.format, self.version, WEIGHTS_FORMAT)?;
        WeightSet::from_values(self.code.k, self.units, self.shared, self.weights.clone())
    }

    pub fn to_writer<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn from_reader<R: Read>(input: R) -> Result<Self> {
        let f: WeightFile = serde_json::from_reader(input)?;
        f.weight_set()?;
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.to_writer(&mut buf)?;
        buf.push(b'\n');
        fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(std::io::BufReader::new(f))
    }
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<()> {
    if format != expected {
        return Err(Error::Malformed(format!(
            "expected format {expected:?}, found {format:?}"
        )));
    }
    if version != FORMAT_VERSION {
        return Err(Error::Malformed(format!(
            "unsupported {expected} version {version}"
        )));
    }
    Ok(())
}

/// Versioned training-set document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format: String,
    pub version: u32,
    pub config: TrainingConfig,
    pub samples: Vec<TrainingSample>,
}

impl DatasetFile {
    pub fn new(config: TrainingConfig, samples: Vec<TrainingSample>) -> Self {
        DatasetFile {
            format: DATASET_FORMAT.to_string(),
            version: FORMAT_VERSION,
            config,
            samples,
        }
    }

    pub fn to_writer<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer(out, self)?;
        Ok(())
    }

    pub fn from_reader<R: Read>(input: R) -> Result<Self> {
        let f: DatasetFile = serde_json::from_reader(input)?;
        check_header(&f.format, f.version, DATASET_FORMAT)?;
        let k = f.config.code.k;
        for s in &f.samples {
            s.frame.validate(k)?;
            if s.target_llrs.len() != k || s.true_bits.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: s.target_llrs.len().min(s.true_bits.len()),
                });
            }
        }
        Ok(f)
    }
}

/// Writes `epoch,train_loss,validation_loss` rows.
pub fn write_loss_history<W: Write>(history: &[EpochRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in history {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_loss_history<R: Read>(input: R) -> Result<Vec<EpochRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    Ok(rd
        .deserialize()
        .collect::<std::result::Result<Vec<EpochRecord>, _>>()?)
}

/// Parses bits written either as a run of `0`/`1` characters or separated by
/// whitespace or commas.
pub fn parse_bits(text: &str) -> Result<Vec<Bit>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Malformed(format!("not a bit: {other:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[Bit]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

/// Parses finite LLR values separated by whitespace or commas.
pub fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Malformed(format!("not a finite LLR: {t:?}"))),
        })
        .collect()
}

/// Formats values with shortest round-trip precision, one per line.
pub fn format_llrs(values: &[f64]) -> String {
    let mut s = String::new();
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}
