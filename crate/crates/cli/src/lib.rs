//! Command-line front end: parses substitution and sequence files, runs one
//! analysis per invocation and renders the result as text and JSON.

pub mod commands;
pub mod input;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sadic::Error),
}

impl CliError {
    /// 2 for usage and input errors, 3 when a resource cap is hit, 1 for
    /// any other failure of the analysis itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Core(sadic::Error::CapExceeded { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sadic", version, about = "Analyse substitutions, S-adic sequences, codes and finite semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the JSON report here; a `.stamp` sidecar records the time.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the text rendering.
    #[arg(long, global = true)]
    pub json: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
    if sadic::matrices::is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    StrongSync,
    MosseCut,
}

impl From<ModeArg> for sadic::recognizability::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::StrongSync => sadic::recognizability::Mode::StrongSync,
            ModeArg::MosseCut => sadic::recognizability::Mode::MosseCut,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify recognizability and saturation of a sequence.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value = "16", value_parser = positive)]
        classify_horizon: usize,
        #[arg(long, default_value = "20", value_parser = positive)]
        periodicity_cap: usize,
        #[arg(long, default_value = "10", value_parser = positive)]
        ell_cap: usize,
    },
    /// Exact factor language of one level.
    Language {
        input: PathBuf,
        #[arg(long, default_value = "6", value_parser = positive)]
        length: usize,
        #[arg(long, default_value = "0")]
        level: usize,
    },
    /// Frequency matrices F1, F2, T2 and I2 of an endomorphism.
    Matrices {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5", value_parser = prime)]
        primes: Vec<u64>,
    },
    /// Code, circularity and purity tests for a set of words.
    Code {
        /// Code words; letters are single characters unless `--alphabet` names them.
        words: Vec<String>,
        /// Space-separated letter names.
        #[arg(long)]
        alphabet: Option<String>,
        /// Use the images of this substitution as the words.
        #[arg(long, conflicts_with = "words")]
        sub: Option<PathBuf>,
    },
    /// Syntactic semigroup of C+ for the images C of a substitution.
    Semigroup {
        input: PathBuf,
        #[arg(long, default_value = "200000", value_parser = positive)]
        cap: usize,
        /// Export the Cayley table as TSV.
        #[arg(long)]
        cayley: Option<PathBuf>,
    },
    /// The finite Rees-matrix quotient on n generators over Z/p.
    Rees {
        #[arg(long, value_parser = positive)]
        n: usize,
        #[arg(long, value_parser = prime)]
        p: u64,
        #[arg(long, default_value = "200000", value_parser = positive)]
        cap: usize,
        /// Check the cardinality and subgroup orders against the formulas.
        #[arg(long)]
        verify: bool,
        /// Endomorphism whose induced map on the quotient is examined.
        #[arg(long)]
        endo: Option<PathBuf>,
    },
    /// Window test for recognizability at every level.
    Recognize {
        input: PathBuf,
        #[arg(long, default_value = "10", value_parser = positive)]
        ell_cap: usize,
        #[arg(long, value_enum, default_value = "strong-sync")]
        mode: ModeArg,
    },
    /// Return words to a factor of level 0.
    Returns {
        input: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "12", value_parser = positive)]
        horizon: usize,
    },
}

/// The JSON envelope shared by every command.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub horizons: BTreeMap<&'static str, usize>,
    pub result: serde_json::Value,
}

/// A finished analysis: the report and its text rendering.
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

impl Outcome {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize") + "\n"
    }
}

/// Run a parsed invocation, write the report if asked, and return what to
/// print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let outcome = commands::execute(&cli.command)?;
    if let Some(path) = &cli.output.report {
        write_report(path, &outcome)?;
    }
    Ok(if cli.output.json { outcome.json() } else { outcome.text })
}

fn write_report(path: &Path, outcome: &Outcome) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    fs::write(path, outcome.json()).map_err(io)?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".stamp");
    fs::write(PathBuf::from(sidecar), format!("{{\"generated_at_unix\": {stamp}}}\n")).map_err(io)
}
