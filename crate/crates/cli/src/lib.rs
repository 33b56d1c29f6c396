//! `cso`: certification, perturbation and batch experiments over complex
//! symmetric matrices, reporting JSON.
//!
//! Exit codes: 0 success, 1 input error, 2 numerical ambiguity or a
//! violated contract. Reports are deterministic for a given input and
//! configuration.

mod certify;
mod error;
mod experiment;
mod perturb;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cso_core::{CMatrix, Conjugation, C64};
use serde::Serialize;

pub use error::CliError;
pub use experiment::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "cso", version, about = "Complex symmetric matrix toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a conjugation, compute g-normality defects, the commutant
    /// and the spectrum of a matrix.
    Certify {
        file: PathBuf,
        /// Relative threshold for the commutant's numerical dimension.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Structure-preserving perturbations.
    Perturb {
        #[command(subcommand)]
        action: PerturbAction,
    },
    /// Seeded batch experiments.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum PerturbAction {
    /// Perturb to an irreducible complex symmetric matrix.
    Irreducible {
        file: PathBuf,
        /// Conjugation matrix `S` (same JSON schema as matrices).
        #[arg(long)]
        conj: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Remove one or more points from the spectrum.
    Remove {
        file: PathBuf,
        #[arg(long)]
        conj: PathBuf,
        /// `RE,IM`; repeat the flag to remove several points.
        #[arg(long = "lambda", required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        lambdas: Vec<C64>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExperimentKind {
    /// Irreducible perturbations of random and reducible samples.
    Density(ExperimentArgs),
    /// g-normality and trace defects of certified samples.
    Gnormal(ExperimentArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Perturbation sizes; comma-separated or repeated.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1e-1, 1e-3])]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Include wall-clock time (makes the report non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

/// A rendered report and the process exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub code: u8,
}

impl Outcome {
    fn new(report: &impl Serialize, contract_ok: bool) -> Result<Self, CliError> {
        let mut json = serde_json::to_string(report).map_err(|e| CliError::Input(e.to_string()))?;
        json.push('\n');
        Ok(Self {
            json,
            code: if contract_ok { 0 } else { 2 },
        })
    }
}

pub fn parse_complex(text: &str) -> Result<C64, String> {
    let (re, im) = match text.split_once(',') {
        Some((re, im)) => (re, im),
        None => (text, "0"),
    };
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("'{s}': {e}"));
    let z = C64::new(parse(re)?, parse(im)?);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("'{text}' is not finite"))
    }
}

pub(crate) fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn read_conjugation(path: &Path) -> Result<Conjugation, CliError> {
    let s = read_matrix(path)?;
    Conjugation::new(s).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Executes a parsed command line and renders its report.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Certify { file, tol } => certify::run(file, *tol),
        Command::Perturb { action } => perturb::run(action),
        Command::Experiment { kind } => match kind {
            ExperimentKind::Density(args) => experiment::density(&ExperimentConfig::from_args(args)?),
            ExperimentKind::Gnormal(args) => experiment::gnormal(&ExperimentConfig::from_args(args)?),
        },
    }
}

/// Writes the report to `--out` or stdout.
pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, &outcome.json).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{}", outcome.json);
            Ok(())
        }
    }
}
