//! Command-line interface of the `turbonet` binary.
//!
//! Results go to `--out` or stdout. Failures print one JSON object
//! `{"error":{"kind":..,"message":..}}` on stderr and exit nonzero.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::channel::SnrKind;
use crate::codec::{default_qpp, depuncture, encode_flat, CodeSpec, TurboCodeConfig};
use crate::decoder::{turbo_decode, Algorithm};
use crate::harness::io::{self, DatasetFile, TrainingMetadata, WeightFile};
use crate::harness::{ber_simulate, compare_decoders, oracle_check, DecoderSpec, ExperimentConfig};
use crate::net::{
    generate_training_set, parameter_count_formula, train_with_observer, turbonet_forward,
    TrainingConfig, WeightSet,
};
use crate::rng::DOMAIN_DATASET;
use crate::Error;

/// Environment variable naming the default `--config` file.
pub const CONFIG_ENV: &str = "TURBONET_CONFIG";
/// Parameter count of the neural BCJR baseline.
pub const NEURAL_BCJR_PARAMETERS: usize = 3_850_000;

#[derive(Debug, Parser)]
#[command(
    name = "turbonet",
    version,
    about = "Turbo codes, classic decoders and TurboNet"
)]
pub struct Cli {
    /// Master seed; overrides the configuration file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON configuration file with optional `code`, `training` and `experiment` sections.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode information bits into a (punctured) codeword.
    Encode(EncodeArgs),
    /// Decode one or more frames of channel LLRs.
    Decode(DecodeArgs),
    /// Generate a labelled training set.
    GenData(GenDataArgs),
    /// Train TurboNet weights.
    Train(TrainArgs),
    /// Monte Carlo BER sweep.
    Ber(BerArgs),
    /// Compare log-MAP with the exhaustive MAP oracle on small blocks.
    OracleCheck(OracleArgs),
    /// Count TurboNet parameters.
    Params(ParamsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Use the punctured rate-1/2 code.
    #[arg(long)]
    pub punctured: bool,
    /// Information block length.
    #[arg(long)]
    pub k: Option<usize>,
    /// QPP coefficient f1 (needs --f2).
    #[arg(long, requires = "f2")]
    pub f1: Option<usize>,
    /// QPP coefficient f2 (needs --f1).
    #[arg(long, requires = "f1")]
    pub f2: Option<usize>,
}

impl CodeArgs {
    fn given(&self) -> bool {
        self.punctured || self.k.is_some() || self.f1.is_some()
    }

    fn resolve(&self, base: CodeSpec) -> crate::Result<CodeSpec> {
        if !self.given() {
            return Ok(base);
        }
        let k = self.k.unwrap_or(base.k);
        let (f1, f2) = match (self.f1, self.f2) {
            (Some(a), Some(b)) => (a, b),
            _ if k == base.k => (base.f1, base.f2),
            _ => default_qpp(k)?,
        };
        Ok(CodeSpec {
            k,
            f1,
            f2,
            punctured: self.punctured || base.punctured,
        })
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Bits such as `0110...`; read from --input or stdin when omitted.
    pub bits: Option<String>,
    /// File holding the bits (`-` for stdin).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    LogMap,
    MaxLogMap,
    Turbonet,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum, default_value = "max-log-map")]
    pub algo: AlgoArg,
    /// Turbo iterations of the classic decoders.
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
    /// TurboNet weight file.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// LLR file (`-` for stdin): N values, or one frame of N values per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Print the final LLRs (one per line) instead of bits.
    #[arg(long)]
    pub soft: bool,
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Eb/N0 in dB.
    #[arg(long)]
    pub snr: Option<f64>,
    /// Log-MAP iterations for the targets.
    #[arg(long)]
    pub target_iters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long)]
    pub units: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub samples_per_epoch: Option<usize>,
    #[arg(long)]
    pub validation_samples: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Training Eb/N0 in dB.
    #[arg(long)]
    pub snr: Option<f64>,
    #[arg(long)]
    pub target_iters: Option<usize>,
    /// Share one unit's weights across all units.
    #[arg(long)]
    pub shared: bool,
    /// Loss history CSV; defaults to the weight file with extension `loss.csv`.
    #[arg(long)]
    pub loss_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BerArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// `start:step:stop` or a comma-separated list, in dB.
    #[arg(long)]
    pub snr: Option<String>,
    /// Decoders to compare; repeat or separate with commas.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub algo: Vec<AlgoArg>,
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long)]
    pub min_errors: Option<u64>,
    #[arg(long)]
    pub max_frames: Option<u64>,
    /// Interpret the SNR as Es/N0 instead of Eb/N0.
    #[arg(long)]
    pub es_n0: bool,
    /// Print pairwise BER ratios to stderr.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// LLRs are drawn uniformly from [-scale, scale].
    #[arg(long, default_value_t = 4.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long, default_value_t = 40)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub units: usize,
    #[arg(long)]
    pub shared: bool,
    /// Count the parameters stored in a weight file instead.
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub code: Option<CodeSpec>,
    pub training: Option<TrainingConfig>,
    pub experiment: Option<ExperimentConfig>,
}

/// Failure of a CLI invocation.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Check(_) => "check-failed",
            CliError::Lib(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// The one-line JSON diagnostic.
    pub fn json_line(&self) -> String {
        let message = match self {
            CliError::Usage(m) | CliError::Check(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        };
        serde_json::json!({ "error": { "kind": self.kind(), "message": message } }).to_string()
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let err = CliError::Usage(
                e.kind().to_string() + ": " + e.to_string().lines().next().unwrap_or(""),
            );
            eprintln!("{}", err.json_line());
            return err.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", err.json_line());
            err.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => {
            let text = read_text(path)?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Error::Malformed(format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let base_code = file.code.unwrap_or(CodeSpec::lte40(false));
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Encode(a) => encode(a, base_code, out),
        Command::Decode(a) => decode(a, base_code, out),
        Command::GenData(a) => gen_data(a, &file, base_code, cli.seed, out),
        Command::Train(a) => train(a, &file, base_code, cli.seed, out),
        Command::Ber(a) => ber(a, &file, base_code, cli.seed, out),
        Command::OracleCheck(a) => oracle(a, cli.seed, out),
        Command::Params(a) => params(a, out),
    }
}

fn read_text(path: &Path) -> crate::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::io(path, e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::io(path, e))
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Error::io(path, e).into()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e).into())
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(Error::from)?;
    buf.push(b'\n');
    Ok(buf)
}

fn encode(a: &EncodeArgs, base: CodeSpec, out: Option<&Path>) -> CliResult<()> {
    let code = TurboCodeConfig::new(a.code.resolve(base)?)?;
    let text = match (&a.bits, &a.input) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give bits either inline or via --input".into(),
            ))
        }
        (Some(bits), None) => bits.clone(),
        (None, Some(path)) => read_text(path)?,
        (None, None) => read_text(Path::new("-"))?,
    };
    let bits = io::parse_bits(&text)?;
    let cw = encode_flat(&code, &bits)?;
    emit(out, (io::format_bits(&cw) + "\n").as_bytes())
}

fn load_weights(path: &Path) -> CliResult<(WeightFile, WeightSet)> {
    let file = WeightFile::load(path)?;
    let w = file.weight_set()?;
    Ok((file, w))
}

/// Splits decoder input into frames of `n` LLRs.
fn frames_of(text: &str, n: usize) -> crate::Result<Vec<Vec<f64>>> {
    let all = io::parse_llrs(text)?;
    if all.len() == n {
        return Ok(vec![all]);
    }
    let lines: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(io::parse_llrs)
        .collect::<crate::Result<_>>()?;
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    for l in &lines {
        if l.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: l.len(),
            });
        }
    }
    Ok(lines)
}

fn decode(a: &DecodeArgs, base: CodeSpec, out: Option<&Path>) -> CliResult<()> {
    let weights = match (&a.weights, a.algo) {
        (Some(p), AlgoArg::Turbonet) => Some(load_weights(p)?),
        (None, AlgoArg::Turbonet) => return Err(Error::MissingWeights.into()),
        _ => None,
    };
    let base = match (&weights, a.code.given()) {
        (Some((f, _)), false) => f.code,
        _ => base,
    };
    let code = TurboCodeConfig::new(a.code.resolve(base)?)?;
    let text = read_text(a.input.as_deref().unwrap_or(Path::new("-")))?;
    let mut buf = String::new();
    for llrs in frames_of(&text, code.n())? {
        let frame = depuncture(&code, &llrs)?;
        let (soft, bits) = match (a.algo, &weights) {
            (AlgoArg::Turbonet, Some((_, w))) => {
                let o = turbonet_forward(&frame, &code, w)?;
                (o.llrs, o.bits)
            }
            (AlgoArg::LogMap, _) => {
                let o = turbo_decode(&frame, &code, a.iters, Algorithm::LogMap)?;
                (o.llrs, o.bits)
            }
            _ => {
                let o = turbo_decode(&frame, &code, a.iters, Algorithm::MaxLogMap)?;
                (o.llrs, o.bits)
            }
        };
        if a.soft {
            buf.push_str(&io::format_llrs(&soft));
        } else {
            buf.push_str(&io::format_bits(&bits));
            buf.push('\n');
        }
    }
    emit(out, buf.as_bytes())
}

fn training_config(file: &FileConfig, base: CodeSpec, seed: Option<u64>) -> TrainingConfig {
    let mut cfg = file.training.clone().unwrap_or_default();
    if file.training.is_none() || file.code.is_some() {
        cfg.code = base;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg
}

fn gen_data(
    a: &GenDataArgs,
    file: &FileConfig,
    base: CodeSpec,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut cfg = training_config(file, base, seed);
    cfg.code = a.code.resolve(cfg.code)?;
    if let Some(s) = a.snr {
        cfg.train_snr_db = s;
    }
    if let Some(t) = a.target_iters {
        cfg.target_iterations = t;
    }
    cfg.validate()?;
    let samples = generate_training_set(&cfg, DOMAIN_DATASET, 0, a.samples)?;
    let mut buf = Vec::new();
    DatasetFile::new(cfg, samples).to_writer(&mut buf)?;
    buf.push(b'\n');
    emit(out, &buf)
}

fn train(
    a: &TrainArgs,
    file: &FileConfig,
    base: CodeSpec,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut cfg = training_config(file, base, seed);
    cfg.code = a.code.resolve(cfg.code)?;
    macro_rules! set {
        ($($field:ident <- $arg:expr),*) => { $(if let Some(v) = $arg { cfg.$field = v; })* };
    }
    set!(units <- a.units, epochs <- a.epochs, samples_per_epoch <- a.samples_per_epoch,
         validation_samples <- a.validation_samples, batch_size <- a.batch_size,
         learning_rate <- a.lr, train_snr_db <- a.snr, target_iterations <- a.target_iters);
    cfg.shared_weights |= a.shared;
    let outcome = train_with_observer(&cfg, |r| {
        eprintln!(
            "epoch {} train_loss {} validation_loss {}",
            r.epoch, r.train_loss, r.validation_loss
        );
    })?;
    let meta = TrainingMetadata::from_outcome(&cfg, &outcome);
    let mut buf = Vec::new();
    WeightFile::new(cfg.code, &outcome.weights, Some(meta)).to_writer(&mut buf)?;
    buf.push(b'\n');
    emit(out, &buf)?;
    let loss_path = a
        .loss_csv
        .clone()
        .or_else(|| out.map(|p| p.with_extension("loss.csv")));
    if let Some(path) = loss_path {
        let mut csv = Vec::new();
        io::write_loss_history(&outcome.history, &mut csv)?;
        fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn ber(
    a: &BerArgs,
    file: &FileConfig,
    base: CodeSpec,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CliResult<()> {
    let weights = a.weights.as_deref().map(load_weights).transpose()?;
    let mut exp = file.experiment.clone().unwrap_or_default();
    if file.experiment.is_none() || file.code.is_some() {
        exp.code = base;
    }
    if let (Some((f, _)), false, None) = (&weights, a.code.given(), &file.code) {
        exp.code = f.code;
    }
    exp.code = a.code.resolve(exp.code)?;
    if let Some(s) = &a.snr {
        exp.snr_db = crate::harness::parse_snr_list(s)?;
    }
    if !a.algo.is_empty() {
        exp.decoders = a
            .algo
            .iter()
            .map(|algo| match algo {
                AlgoArg::LogMap => DecoderSpec::LogMap {
                    iterations: a.iters,
                },
                AlgoArg::MaxLogMap => DecoderSpec::MaxLogMap {
                    iterations: a.iters,
                },
                AlgoArg::Turbonet => DecoderSpec::Turbonet,
            })
            .collect();
    }
    if let Some(m) = a.min_errors {
        exp.min_bit_errors = m;
    }
    if let Some(m) = a.max_frames {
        exp.max_frames = m;
    }
    if a.es_n0 {
        exp.snr_kind = SnrKind::EsN0;
    }
    if let Some(s) = seed {
        exp.seed = s;
    }
    let report = ber_simulate(&exp, weights.as_ref().map(|(_, w)| w))?;
    if a.summary && report.decoders().len() > 1 {
        for c in compare_decoders(&report)? {
            eprintln!(
                "snr {} {} / {} = {} (95% CI {} .. {})",
                c.snr_db, c.decoder, c.baseline, c.ratio, c.ratio_ci.0, c.ratio_ci.1
            );
        }
    }
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    emit(out, &buf)
}

fn oracle(a: &OracleArgs, seed: Option<u64>, out: Option<&Path>) -> CliResult<()> {
    let report = oracle_check(a.k, a.trials, seed.unwrap_or(0), a.scale)?;
    let pass = report.max_deviation < a.tolerance && report.max_extrinsic_deviation < a.tolerance;
    let mut value = serde_json::to_value(&report).map_err(Error::from)?;
    value["tolerance"] = a.tolerance.into();
    value["pass"] = pass.into();
    emit(out, &json_bytes(&value)?)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "max deviation {} exceeds tolerance {}",
            report.max_deviation.max(report.max_extrinsic_deviation),
            a.tolerance
        )))
    }
}

fn params(a: &ParamsArgs, out: Option<&Path>) -> CliResult<()> {
    let w = match &a.weights {
        Some(p) => load_weights(p)?.1,
        None if a.shared => WeightSet::ones_shared(a.k, a.units),
        None => WeightSet::ones(a.k, a.units),
    };
    w.validate()?;
    let count = w.count_parameters();
    let value = serde_json::json!({
        "k": w.k(),
        "units": w.units(),
        "shared": w.shared(),
        "parameters": count,
        "formula": parameter_count_formula(w.k(), w.units()),
        "neural_bcjr_baseline": NEURAL_BCJR_PARAMETERS,
        "fraction_of_baseline": count as f64 / NEURAL_BCJR_PARAMETERS as f64,
    });
    emit(out, &json_bytes(&value)?)
}
