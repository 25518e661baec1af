//! Turbo-coding laboratory.
//!
//! The crate covers the whole chain of an LTE-style parallel concatenated
//! convolutional code: the 8-state recursive systematic encoder ([`trellis`]),
//! QPP interleaving, multiplexing and puncturing ([`codec`]), BPSK over AWGN
//! with soft demapping ([`channel`]), the classic log-MAP and max-log-MAP turbo
//! decoders with an exhaustive MAP reference ([`decoder`]), and TurboNet, an
//! unrolled max-log-MAP decoder with per-position trainable weights, together
//! with its exact gradient, ADAM and a training loop ([`net`]). Monte Carlo BER
//! evaluation and file formats live in [`harness`].
//!
//! Every runnable capability has a matching program under `examples/`.

pub mod channel;
pub mod cli;
pub mod codec;
pub mod decoder;
mod error;
pub mod harness;
pub mod net;
pub mod rng;
pub mod trellis;

pub use error::{Error, Result};

/// A hard bit, always `0` or `1`.
pub type Bit = u8;
