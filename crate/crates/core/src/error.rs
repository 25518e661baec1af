use std::path::PathBuf;

/// Errors raised anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid trellis state {0} (expected 0..8)")]
    InvalidState(usize),
    #[error("invalid bit value {0} (expected 0 or 1)")]
    InvalidBit(u8),
    #[error("input block is empty")]
    EmptyInput,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("QPP coefficients f1={f1}, f2={f2} do not define a permutation for K={k}")]
    InvalidInterleaver { k: usize, f1: usize, f2: usize },
    #[error("no default interleaver for K={0}; pass f1 and f2 explicitly")]
    NoDefaultInterleaver(usize),
    #[error("noise standard deviation must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("block length K={k} exceeds the exhaustive oracle limit of {max}")]
    OracleTooLarge { k: usize, max: usize },
    #[error("weight shape mismatch: {0}")]
    WeightShape(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("TurboNet decoder requested but no weights were supplied")]
    MissingWeights,
    #[error("training diverged at epoch {epoch}, batch {batch}: loss = {loss}")]
    Diverged {
        epoch: usize,
        batch: usize,
        loss: f64,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidState(_) => "invalid-state",
            Error::InvalidBit(_) => "invalid-bit",
            Error::EmptyInput => "empty-input",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::InvalidInterleaver { .. } => "invalid-interleaver",
            Error::NoDefaultInterleaver(_) => "no-default-interleaver",
            Error::InvalidSigma(_) => "invalid-sigma",
            Error::OracleTooLarge { .. } => "oracle-too-large",
            Error::WeightShape(_) => "weight-shape",
            Error::InvalidConfig(_) => "invalid-config",
            Error::MissingWeights => "missing-weights",
            Error::Diverged { .. } => "diverged",
            Error::Malformed(_) => "malformed-input",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
