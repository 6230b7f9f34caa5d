use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polarsp::codec::{sc_decode_with, sc_encode, DecodeOptions};
use polarsp::harness::{self, ExperimentConfig, MuSetting};
use polarsp::{CodeSpec, Error};

#[derive(Parser)]
#[command(name = "polarsp", version, about = "Shortened and punctured polar codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its CodeSpec file.
    Construct(ConfigArgs),
    /// Fraction of polarized indices per code length (CSV).
    Polarize(ConfigArgs),
    /// Monte Carlo frame error rate of SC decoding (CSV).
    Simulate(ConfigArgs),
    /// Run the randomized relation and oracle suites.
    #[command(alias = "verify-relations")]
    Verify(ConfigArgs),
    /// Encode data bits with a CodeSpec file.
    Encode(EncodeArgs),
    /// SC-decode channel outputs with a CodeSpec file.
    Decode(DecodeArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// bsc:P, bec:E, none or table:W(0|0),W(1|0),../W(0|1),W(1|1),..
    #[arg(long)]
    channel: Option<String>,
    /// P(X = 0).
    #[arg(long)]
    p0: Option<f64>,
    /// Code lengths, comma separated or repeated.
    #[arg(long = "M", value_delimiter = ',', num_args = 1..)]
    m: Option<Vec<usize>>,
    /// shortened or punctured.
    #[arg(long)]
    mode: Option<String>,
    /// Output alphabet budget per distribution, or "inf".
    #[arg(long)]
    mu: Option<MuSetting>,
    #[arg(long)]
    beta: Option<f64>,
    /// Absolute threshold replacing 2^(-M^beta).
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    /// Information set size; overrides --rate.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<u32>,
    /// Period exponent t for the periodic fast path.
    #[arg(long)]
    period: Option<u32>,
    /// Verification suites, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    suite: Option<Vec<String>>,
    /// Corrupt one table cell, e.g. minus:S:B.
    #[arg(long)]
    fault: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(self) -> Result<ExperimentConfig, Error> {
        let base = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        Ok(base.merge(ExperimentConfig {
            channel: self.channel,
            p0: self.p0,
            m: self.m,
            mode: self.mode,
            mu: self.mu,
            beta: self.beta,
            threshold: self.threshold,
            rate: self.rate,
            count: self.count,
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
            period: self.period,
            suite: self.suite,
            fault: self.fault,
            output: self.output,
        }))
    }
}

#[derive(Args)]
struct EncodeArgs {
    /// CodeSpec file written by `construct`.
    #[arg(long)]
    code: PathBuf,
    /// Data bits, e.g. 0110.
    #[arg(long)]
    data: String,
    /// Frozen bit values; all zero when omitted.
    #[arg(long)]
    frozen: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Channel outputs: 0/1 (and ? for erasures), or indices for table channels.
    #[arg(long)]
    received: String,
    #[arg(long)]
    frozen: Option<String>,
    /// Min-sum approximation of the check-node update.
    #[arg(long)]
    min_sum: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_bits(s: &str) -> Result<Vec<u8>, Error> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("not a bit: {c:?}"))),
        })
        .collect()
}

fn show_bits(b: &[u8]) -> String {
    b.iter().map(|&x| char::from(b'0' + x)).collect()
}

fn load_code(path: &Path) -> Result<CodeSpec, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        .parse()
}

fn frozen_values(code: &CodeSpec, given: Option<&str>) -> Result<Vec<u8>, Error> {
    match given {
        Some(s) => parse_bits(s),
        None => Ok(vec![0; code.frozen.len()]),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Construct(a) => {
            let cfg = a.resolve()?;
            emit(cfg.output.as_deref(), &harness::cmd_construct(&cfg)?.to_text())?;
        }
        Command::Polarize(a) => {
            let cfg = a.resolve()?;
            emit(cfg.output.as_deref(), &harness::cmd_polarize(&cfg)?)?;
        }
        Command::Simulate(a) => {
            let cfg = a.resolve()?;
            emit(cfg.output.as_deref(), &harness::cmd_simulate(&cfg)?)?;
        }
        Command::Verify(a) => {
            let cfg = a.resolve()?;
            let report = harness::cmd_verify(&cfg)?;
            emit(cfg.output.as_deref(), &format!("{report}\n"))?;
            return Ok(report.passed());
        }
        Command::Encode(a) => {
            let code = load_code(&a.code)?;
            let frozen = frozen_values(&code, a.frozen.as_deref())?;
            let x = sc_encode(&parse_bits(&a.data)?, &code, &frozen)?;
            emit(a.output.as_deref(), &format!("{}\n", show_bits(&x)))?;
        }
        Command::Decode(a) => {
            let code = load_code(&a.code)?;
            let frozen = frozen_values(&code, a.frozen.as_deref())?;
            let y = code.channel.parse_outputs(&a.received)?;
            let opts = DecodeOptions { min_sum: a.min_sum };
            let d = sc_decode_with(&y, &code, &frozen, opts)?;
            let text = format!("data {}\nu {}\n", show_bits(&d.data), show_bits(&d.u_hat));
            emit(a.output.as_deref(), &text)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
