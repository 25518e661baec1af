//! Monte Carlo BER evaluation, decoder comparison and file formats.

pub mod ber;
pub mod compare;
pub mod io;
pub mod oracle;

pub use ber::{
    ber_simulate, default_snr_sweep, parse_snr_list, BerReport, BerRow, DecoderSpec,
    ExperimentConfig,
};
pub use compare::{compare_decoders, compare_pair, wilson_interval, Comparison, Z95};
pub use io::{DatasetFile, TrainingMetadata, WeightFile};
pub use oracle::{oracle_check, OracleReport};

use crate::net::WeightSet;

/// Number of trainable TurboNet parameters.
pub fn count_parameters(weights: &WeightSet) -> usize {
    weights.count_parameters()
}
