//! BPSK over AWGN and soft demapping.
//!
//! Mapping `0 -> -1`, `1 -> +1`; LLRs follow `log P(1)/P(0)`, so a positive
//! value favours bit 1.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::codec::TAIL_BITS;
use crate::trellis::MEMORY;
use crate::{Bit, Error, Result};

/// LLR magnitude used for noiseless transmission.
pub const DEFAULT_LLR_CLAMP: f64 = 50.0;

/// How the SNR axis is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnrKind {
    /// Energy per information bit over N0.
    #[default]
    EbN0,
    /// Energy per channel symbol over N0.
    EsN0,
}

/// Noise model of a transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Noise {
    /// AWGN at the given SNR (dB) for a code of rate `rate`.
    Awgn {
        snr_db: f64,
        #[serde(default)]
        kind: SnrKind,
        rate: f64,
    },
    /// AWGN with an explicit per-dimension standard deviation.
    Sigma { sigma: f64 },
    /// No noise; LLRs are `+-clamp`.
    Noiseless { clamp: f64 },
}

/// A configured BPSK/AWGN channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub noise: Noise,
}

impl ChannelConfig {
    pub fn awgn(snr_db: f64, rate: f64) -> Self {
        ChannelConfig {
            noise: Noise::Awgn {
                snr_db,
                kind: SnrKind::EbN0,
                rate,
            },
        }
    }

    pub fn with_kind(snr_db: f64, kind: SnrKind, rate: f64) -> Self {
        ChannelConfig {
            noise: Noise::Awgn { snr_db, kind, rate },
        }
    }

    pub fn with_sigma(sigma: f64) -> Self {
        ChannelConfig {
            noise: Noise::Sigma { sigma },
        }
    }

    pub fn noiseless() -> Self {
        ChannelConfig {
            noise: Noise::Noiseless {
                clamp: DEFAULT_LLR_CLAMP,
            },
        }
    }

    /// Noise standard deviation per real dimension; 0 for a noiseless channel.
    ///
    /// With unit symbol energy, `sigma^2 = 1 / (2 R Eb/N0)` or `1 / (2 Es/N0)`.
    pub fn sigma(&self) -> f64 {
        match self.noise {
            Noise::Awgn { snr_db, kind, rate } => {
                let snr = 10f64.powf(snr_db / 10.0);
                let es_n0 = match kind {
                    SnrKind::EbN0 => rate * snr,
                    SnrKind::EsN0 => snr,
                };
                (1.0 / (2.0 * es_n0)).sqrt()
            }
            Noise::Sigma { sigma } => sigma,
            Noise::Noiseless { .. } => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.noise {
            Noise::Noiseless { clamp } if clamp > 0.0 && clamp.is_finite() => Ok(()),
            Noise::Noiseless { clamp } => Err(Error::InvalidConfig(format!(
                "LLR clamp must be positive, got {clamp}"
            ))),
            _ => {
                let s = self.sigma();
                if s > 0.0 && s.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSigma(s))
                }
            }
        }
    }

    /// Modulates `bits`, adds noise and demaps to LLRs.
    pub fn transmit<R: Rng + ?Sized>(&self, bits: &[Bit], rng: &mut R) -> Result<Vec<f64>> {
        let symbols = bpsk_modulate(bits);
        match self.noise {
            Noise::Noiseless { clamp } => Ok(symbols.iter().map(|&x| x * clamp).collect()),
            _ => {
                let sigma = self.sigma();
                let received = awgn(&symbols, sigma, rng)?;
                llr_demap(&received, sigma)
            }
        }
    }
}

/// `0 -> -1.0`, `1 -> +1.0`.
pub fn bpsk_modulate(bits: &[Bit]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b == 0 { -1.0 } else { 1.0 })
        .collect()
}

/// Adds i.i.d. `N(0, sigma^2)` noise.
pub fn awgn<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    Ok(symbols
        .iter()
        .map(|&x| {
            let n: f64 = rng.sample(StandardNormal);
            x + sigma * n
        })
        .collect())
}

/// `y = 2 r / sigma^2`.
pub fn llr_demap(received: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    let scale = 2.0 / (sigma * sigma);
    Ok(received.iter().map(|&r| scale * r).collect())
}

/// Received LLRs of one codeword, split by stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlrFrame {
    pub ys: Vec<f64>,
    pub y1p: Vec<f64>,
    pub y2p: Vec<f64>,
    /// Tail LLRs in transmitted order: `(x, z) x 3` of encoder 1, then encoder 2.
    pub tail: [f64; TAIL_BITS],
}

impl LlrFrame {
    pub fn zeros(k: usize) -> Self {
        LlrFrame {
            ys: vec![0.0; k],
            y1p: vec![0.0; k],
            y2p: vec![0.0; k],
            tail: [0.0; TAIL_BITS],
        }
    }

    pub fn k(&self) -> usize {
        self.ys.len()
    }

    /// `(systematic, parity)` tail LLRs of constituent encoder `which` (1 or 2).
    pub fn tail_of(&self, which: usize) -> ([f64; MEMORY], [f64; MEMORY]) {
        let base = if which == 1 { 0 } else { 2 * MEMORY };
        let mut sys = [0.0; MEMORY];
        let mut par = [0.0; MEMORY];
        for i in 0..MEMORY {
            sys[i] = self.tail[base + 2 * i];
            par[i] = self.tail[base + 2 * i + 1];
        }
        (sys, par)
    }

    pub fn is_finite(&self) -> bool {
        self.ys
            .iter()
            .chain(&self.y1p)
            .chain(&self.y2p)
            .chain(&self.tail)
            .all(|v| v.is_finite())
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        for len in [self.ys.len(), self.y1p.len(), self.y2p.len()] {
            if len != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: len,
                });
            }
        }
        if !self.is_finite() {
            return Err(Error::Malformed("non-finite LLR in frame".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(bpsk_modulate(&[0, 1, 0]), vec![-1.0, 1.0, -1.0]);
        let sliced: Vec<u8> = bpsk_modulate(&[1, 0, 1, 1])
            .iter()
            .map(|&x| u8::from(x > 0.0))
            .collect();
        assert_eq!(sliced, vec![1, 0, 1, 1]);
    }

    #[test]
    fn demap_examples() {
        assert_eq!(llr_demap(&[1.0, 0.0], 1.0).unwrap(), vec![2.0, 0.0]);
        let ch = ChannelConfig::awgn(0.0, 40.0 / 132.0);
        let s = ch.sigma();
        assert_abs_diff_eq!(s * s, 1.65, epsilon = 1e-12);
        assert_abs_diff_eq!(
            llr_demap(&[1.0], s).unwrap()[0],
            1.212_121_212_1,
            epsilon = 1e-9
        );
        assert!(matches!(
            llr_demap(&[1.0], 0.0),
            Err(Error::InvalidSigma(_))
        ));
    }

    #[test]
    fn es_n0_ignores_rate() {
        let ch = ChannelConfig::with_kind(0.0, SnrKind::EsN0, 0.3);
        assert_abs_diff_eq!(ch.sigma(), 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn zero_sigma_is_identity() {
        let mut rng = stream_rng(1, 0, 0);
        let x = vec![1.0, -1.0, 1.0];
        assert_eq!(awgn(&x, 0.0, &mut rng).unwrap(), x);
    }

    #[test]
    fn noise_variance_is_unit_at_sigma_one() {
        let mut rng = stream_rng(3, 0, 0);
        let n = 1_000_000;
        let zeros = vec![0.0; n];
        let r = awgn(&zeros, 1.0, &mut rng).unwrap();
        let mean = r.iter().sum::<f64>() / n as f64;
        let var = r.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn seeded_transmission_is_reproducible() {
        let ch = ChannelConfig::awgn(1.0, 0.5);
        let bits = [0u8, 1, 1, 0, 1];
        let a = ch.transmit(&bits, &mut stream_rng(9, 1, 2)).unwrap();
        let b = ch.transmit(&bits, &mut stream_rng(9, 1, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noiseless_llrs_are_clamped_with_correct_sign() {
        let llr = ChannelConfig::noiseless()
            .transmit(&[0, 1], &mut stream_rng(0, 0, 0))
            .unwrap();
        assert_eq!(llr, vec![-DEFAULT_LLR_CLAMP, DEFAULT_LLR_CLAMP]);
    }

    #[test]
    fn high_snr_llr_signs_match_symbols() {
        let ch = ChannelConfig::with_sigma(0.05);
        let bits: Vec<u8> = (0..1000).map(|i| (i % 3 == 0) as u8).collect();
        let llr = ch.transmit(&bits, &mut stream_rng(4, 0, 0)).unwrap();
        for (b, y) in bits.iter().zip(&llr) {
            assert_eq!(*b == 1, *y > 0.0);
        }
    }

    #[test]
    fn llr_magnitude_increases_with_received_magnitude() {
        let r = [0.1, 0.5, 1.0, 2.0];
        let y = llr_demap(&r, 0.8).unwrap();
        assert!(y.windows(2).all(|w| w[0].abs() < w[1].abs()));
    }
}
