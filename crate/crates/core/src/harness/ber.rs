//! Paired-noise Monte Carlo BER simulation.

use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelConfig, Noise, SnrKind};
use crate::codec::{depuncture, encode_flat, CodeSpec, TurboCodeConfig};
use crate::decoder::{turbo_decode, Algorithm};
use crate::net::{turbonet_forward, WeightSet};
use crate::rng::{stream_rng, DOMAIN_BER};
use crate::{Bit, Error, Result};

/// First chunk size; chunks double up to `chunk_frames`.
const FIRST_CHUNK: u64 = 100;

/// A decoder taking part in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum DecoderSpec {
    LogMap {
        iterations: usize,
    },
    MaxLogMap {
        iterations: usize,
    },
    /// TurboNet with the weights passed to [`ber_simulate`]; one unit per iteration.
    Turbonet,
}

impl DecoderSpec {
    pub fn classic(algo: Algorithm, iterations: usize) -> Self {
        match algo {
            Algorithm::LogMap => DecoderSpec::LogMap { iterations },
            Algorithm::MaxLogMap => DecoderSpec::MaxLogMap { iterations },
        }
    }

    fn label(&self, weights: Option<&WeightSet>) -> String {
        match self {
            DecoderSpec::LogMap { iterations } => format!("log-map-{iterations}"),
            DecoderSpec::MaxLogMap { iterations } => format!("max-log-map-{iterations}"),
            DecoderSpec::Turbonet => match weights {
                Some(w) => format!("turbonet-{}", w.units()),
                None => "turbonet".to_string(),
            },
        }
    }
}

/// A BER sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub code: CodeSpec,
    pub snr_db: Vec<f64>,
    pub snr_kind: SnrKind,
    /// A point stops once every decoder has this many bit errors...
    pub min_bit_errors: u64,
    /// ...or after this many frames.
    pub max_frames: u64,
    pub decoders: Vec<DecoderSpec>,
    pub seed: u64,
    /// Largest number of frames simulated between two stopping checks.
    pub chunk_frames: u64,
    /// Replaces the AWGN channel at every point, e.g. noiseless or fixed sigma.
    pub channel_override: Option<Noise>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            code: CodeSpec::lte40(false),
            snr_db: default_snr_sweep(),
            snr_kind: SnrKind::EbN0,
            min_bit_errors: 200,
            max_frames: 1_000_000,
            decoders: vec![DecoderSpec::MaxLogMap { iterations: 3 }],
            seed: 0,
            chunk_frames: 4_000,
            channel_override: None,
        }
    }
}

/// `0, 0.5, ..., 3` dB.
pub fn default_snr_sweep() -> Vec<f64> {
    parse_snr_list("0:0.5:3").expect("static sweep")
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidConfig(format!("bad SNR list {s:?}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = s.split(':').collect();
    let out = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step.is_nan()
                || step <= 0.0
                || stop < start
                || !start.is_finite()
                || !stop.is_finite()
            {
                return Err(bad());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..n)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect()
        }
        [list] => list.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if out.is_empty() || out.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.snr_db.is_empty() {
            return bad("SNR list is empty");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("SNR values must be finite");
        }
        if self.min_bit_errors == 0 || self.max_frames == 0 {
            return bad("stopping rule needs positive min_bit_errors and max_frames");
        }
        if self.chunk_frames == 0 {
            return bad("chunk_frames must be positive");
        }
        if self.decoders.is_empty() {
            return bad("no decoders");
        }
        for d in &self.decoders {
            if let DecoderSpec::LogMap { iterations: 0 }
            | DecoderSpec::MaxLogMap { iterations: 0 } = d
            {
                return bad("iterations must be at least 1");
            }
        }
        TurboCodeConfig::new(self.code)?;
        for &snr in &self.snr_db {
            self.channel(snr).validate()?;
        }
        Ok(())
    }

    pub fn channel(&self, snr_db: f64) -> ChannelConfig {
        match self.channel_override {
            Some(noise) => ChannelConfig { noise },
            None => ChannelConfig::with_kind(snr_db, self.snr_kind, self.code.rate()),
        }
    }

    /// FNV-1a hash of the configuration and, if given, the weights.
    pub fn fingerprint(&self, weights: Option<&WeightSet>) -> String {
        let mut h = Fnv::new();
        h.write(
            serde_json::to_string(self)
                .expect("serializable")
                .as_bytes(),
        );
        if let Some(w) = weights {
            h.write(&(w.k() as u64).to_le_bytes());
            h.write(&(w.units() as u64).to_le_bytes());
            h.write(&[w.shared() as u8]);
            for v in w.values() {
                h.write(&v.to_bits().to_le_bytes());
            }
        }
        format!("{:016x}", h.0)
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

/// Error counts of one decoder at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRow {
    pub snr_db: f64,
    pub decoder: String,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub seed: u64,
    pub fingerprint: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    /// Grouped by SNR, decoders in configuration order within each group.
    pub rows: Vec<BerRow>,
    pub seed: u64,
    pub fingerprint: String,
}

impl BerReport {
    pub fn decoders(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.decoder) {
                out.push(r.decoder.clone());
            }
        }
        out
    }

    pub fn snr_points(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.snr_db) {
                out.push(r.snr_db);
            }
        }
        out
    }

    pub fn row(&self, snr_db: f64, decoder: &str) -> Option<&BerRow> {
        self.rows
            .iter()
            .find(|r| r.snr_db == snr_db && r.decoder == decoder)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let rows = rd
            .deserialize()
            .collect::<std::result::Result<Vec<BerRow>, _>>()?;
        let first = rows
            .first()
            .ok_or_else(|| Error::Malformed("empty BER report".into()))?;
        let (seed, fingerprint) = (first.seed, first.fingerprint.clone());
        if rows
            .iter()
            .any(|r| r.seed != seed || r.fingerprint != fingerprint)
        {
            return Err(Error::Malformed("rows from different experiments".into()));
        }
        Ok(BerReport {
            rows,
            seed,
            fingerprint,
        })
    }
}

enum Runner<'a> {
    Classic(Algorithm, usize),
    Net(&'a WeightSet),
}

impl Runner<'_> {
    fn decode(&self, frame: &crate::channel::LlrFrame, code: &TurboCodeConfig) -> Result<Vec<Bit>> {
        match *self {
            Runner::Classic(algo, iters) => Ok(turbo_decode(frame, code, iters, algo)?.bits),
            Runner::Net(w) => Ok(turbonet_forward(frame, code, w)?.bits),
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Counts {
    bit_errors: u64,
    frame_errors: u64,
}

/// Simulates every SNR point of `exp` with all decoders on the same frames.
///
/// Frame `i` at point `j` is drawn from its own random stream, so every
/// decoder sees identical bits and noise, and the counts do not depend on
/// the number of worker threads.
pub fn ber_simulate(exp: &ExperimentConfig, weights: Option<&WeightSet>) -> Result<BerReport> {
    exp.validate()?;
    let code = TurboCodeConfig::new(exp.code)?;
    let k = code.k() as u64;
    let runners = exp
        .decoders
        .iter()
        .map(|d| match d {
            DecoderSpec::LogMap { iterations } => {
                Ok(Runner::Classic(Algorithm::LogMap, *iterations))
            }
            DecoderSpec::MaxLogMap { iterations } => {
                Ok(Runner::Classic(Algorithm::MaxLogMap, *iterations))
            }
            DecoderSpec::Turbonet => {
                let w = weights.ok_or(Error::MissingWeights)?;
                if w.k() != code.k() {
                    return Err(Error::WeightShape(format!(
                        "weights are for K={}, code has K={}",
                        w.k(),
                        code.k()
                    )));
                }
                w.validate()?;
                Ok(Runner::Net(w))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = unique_labels(exp.decoders.iter().map(|d| d.label(weights)).collect());
    let fingerprint = exp.fingerprint(weights);

    let mut rows = Vec::new();
    for (j, &snr) in exp.snr_db.iter().enumerate() {
        let channel = exp.channel(snr);
        let mut totals = vec![Counts::default(); runners.len()];
        let mut frames = 0u64;
        let mut chunk = FIRST_CHUNK.min(exp.chunk_frames);
        while frames < exp.max_frames && totals.iter().any(|c| c.bit_errors < exp.min_bit_errors) {
            let n = chunk.min(exp.max_frames - frames);
            let partial = (frames..frames + n)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(exp.seed, DOMAIN_BER, ((j as u64) << 40) | i);
                    let u: Vec<Bit> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
                    let llrs = channel.transmit(&encode_flat(&code, &u)?, &mut rng)?;
                    let frame = depuncture(&code, &llrs)?;
                    runners
                        .iter()
                        .map(|r| {
                            let bits = r.decode(&frame, &code)?;
                            let e = bits.iter().zip(&u).filter(|(a, b)| a != b).count() as u64;
                            Ok(Counts {
                                bit_errors: e,
                                frame_errors: u64::from(e > 0),
                            })
                        })
                        .collect::<Result<Vec<Counts>>>()
                })
                .try_reduce(
                    || vec![Counts::default(); runners.len()],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            x.bit_errors += y.bit_errors;
                            x.frame_errors += y.frame_errors;
                        }
                        Ok(a)
                    },
                )?;
            for (t, p) in totals.iter_mut().zip(partial) {
                t.bit_errors += p.bit_errors;
                t.frame_errors += p.frame_errors;
            }
            frames += n;
            chunk = (chunk * 2).min(exp.chunk_frames);
        }
        for (label, c) in labels.iter().zip(&totals) {
            let bits = frames * k;
            rows.push(BerRow {
                snr_db: snr,
                decoder: label.clone(),
                frames,
                bits,
                bit_errors: c.bit_errors,
                frame_errors: c.frame_errors,
                ber: c.bit_errors as f64 / bits as f64,
                fer: c.frame_errors as f64 / frames as f64,
                seed: exp.seed,
                fingerprint: fingerprint.clone(),
            });
        }
    }
    Ok(BerReport {
        rows,
        seed: exp.seed,
        fingerprint,
    })
}

fn unique_labels(labels: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(labels.len());
    for l in labels {
        let mut name = l.clone();
        let mut n = 2;
        while out.contains(&name) {
            name = format!("{l}#{n}");
            n += 1;
        }
        out.push(name);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(decoders: Vec<DecoderSpec>) -> ExperimentConfig {
        ExperimentConfig {
            snr_db: vec![1.0],
            min_bit_errors: 50,
            max_frames: 2_000,
            decoders,
            seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn snr_ranges() {
        assert_eq!(
            parse_snr_list("0:0.5:3").unwrap(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
        );
        assert_eq!(
            parse_snr_list("0:0.1:0.3").unwrap(),
            vec![0.0, 0.1, 0.2, 0.3]
        );
        assert_eq!(parse_snr_list("1, 2.5").unwrap(), vec![1.0, 2.5]);
        assert_eq!(parse_snr_list("2").unwrap(), vec![2.0]);
        for bad in ["", "a", "0:0:3", "3:0.5:0", "0:1", "1,,2"] {
            assert!(parse_snr_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn noiseless_has_no_errors() {
        let exp = ExperimentConfig {
            channel_override: Some(ChannelConfig::noiseless().noise),
            max_frames: 300,
            ..quick(vec![
                DecoderSpec::LogMap { iterations: 3 },
                DecoderSpec::MaxLogMap { iterations: 3 },
                DecoderSpec::Turbonet,
            ])
        };
        let w = WeightSet::ones(40, 3);
        let report = ber_simulate(&exp, Some(&w)).unwrap();
        assert_eq!(report.rows.len(), 3);
        for r in &report.rows {
            assert_eq!(r.frames, 300);
            assert_eq!(r.bits, 300 * 40);
            assert_eq!(r.ber, 0.0);
        }
    }

    #[test]
    fn pure_noise_gives_coin_flips() {
        let exp = ExperimentConfig {
            channel_override: Some(Noise::Sigma { sigma: 1e6 }),
            min_bit_errors: u64::MAX,
            max_frames: 2_500,
            ..quick(vec![DecoderSpec::MaxLogMap { iterations: 3 }])
        };
        let r = &ber_simulate(&exp, None).unwrap().rows[0];
        assert!(r.bits >= 100_000);
        assert!((r.ber - 0.5).abs() < 0.01, "{}", r.ber);
    }

    #[test]
    fn turbonet_requires_weights() {
        assert!(matches!(
            ber_simulate(&quick(vec![DecoderSpec::Turbonet]), None),
            Err(Error::MissingWeights)
        ));
    }

    #[test]
    fn stopping_rule_and_counts() {
        let report =
            ber_simulate(&quick(vec![DecoderSpec::MaxLogMap { iterations: 1 }]), None).unwrap();
        let r = &report.rows[0];
        assert!(r.bit_errors >= 50 || r.frames == 2_000);
        assert_eq!(r.bits, r.frames * 40);
        assert!(r.frame_errors <= r.frames && r.frame_errors <= r.bit_errors);
        assert_eq!(r.ber, r.bit_errors as f64 / r.bits as f64);
    }

    #[test]
    fn seeded_reproducibility_and_csv_round_trip() {
        let exp = quick(vec![
            DecoderSpec::MaxLogMap { iterations: 3 },
            DecoderSpec::MaxLogMap { iterations: 3 },
        ]);
        let a = ber_simulate(&exp, None).unwrap();
        let b = ber_simulate(&exp, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.decoders(), vec!["max-log-map-3", "max-log-map-3#2"]);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with(
            "snr_db,decoder,frames,bits,bit_errors,frame_errors,ber,fer,seed,fingerprint\n"
        ));
        assert_eq!(BerReport::read_csv(buf.as_slice()).unwrap(), a);
    }

    #[test]
    fn fingerprint_tracks_config_and_weights() {
        let exp = quick(vec![DecoderSpec::Turbonet]);
        let w = WeightSet::ones(40, 3);
        let mut w2 = w.clone();
        w2.values_mut()[0] = 1.5;
        assert_eq!(exp.fingerprint(Some(&w)), exp.fingerprint(Some(&w)));
        assert_ne!(exp.fingerprint(Some(&w)), exp.fingerprint(Some(&w2)));
        let other = ExperimentConfig {
            seed: 4,
            ..exp.clone()
        };
        assert_ne!(exp.fingerprint(None), other.fingerprint(None));
    }

    #[test]
    fn invalid_configs_rejected() {
        let base = quick(vec![DecoderSpec::MaxLogMap { iterations: 3 }]);
        for exp in [
            ExperimentConfig {
                snr_db: vec![],
                ..base.clone()
            },
            ExperimentConfig {
                min_bit_errors: 0,
                ..base.clone()
            },
            ExperimentConfig {
                max_frames: 0,
                ..base.clone()
            },
            ExperimentConfig {
                decoders: vec![],
                ..base.clone()
            },
            ExperimentConfig {
                decoders: vec![DecoderSpec::LogMap { iterations: 0 }],
                ..base.clone()
            },
        ] {
            assert!(matches!(exp.validate(), Err(Error::InvalidConfig(_))));
        }
    }
}
