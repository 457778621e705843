//! `rego`: run REGO experiments from the command line and write CSV or JSON.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rego::harness::{Format, HarnessError};
use rego::solvers::Solver;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rego",
    version,
    about = "Random embeddings for global optimization"
)]
struct Cli {
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Success tolerance: a run converges when f <= f* + epsilon.
    #[arg(long, global = true, default_value_t = rego::embedding::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Flat `key = value` file of flag defaults; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the test-problem catalogue.
    ListProblems,
    /// Check sampled minimal-norm solutions against their predicted law.
    Verify {
        #[arg(long)]
        de: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Monte Carlo success probability against the analytic lower bound.
    Curves {
        #[arg(long)]
        de: usize,
        /// Values of d - de, one curve each.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        d_offsets: Vec<usize>,
        #[arg(long, default_value_t = 0.02)]
        grid_min: f64,
        #[arg(long, default_value_t = 50.0)]
        grid_max: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also report the two earlier bounds from the literature.
        #[arg(long)]
        baselines: bool,
    },
    /// Percentage of embeddings whose box contains a global minimizer.
    SuccessTable {
        /// Comma-separated problem names, or `all`.
        #[arg(long, default_value = "all")]
        problems: String,
        #[arg(long = "D", value_delimiter = ',', default_value = "10,100,1000")]
        dims: Vec<usize>,
        /// Comma-separated `OFFSET:COEF[:de|D]` pairs; overrides --sweep.
        #[arg(long)]
        pairs: Option<String>,
        /// Preset pairs: main, a, b or c.
        #[arg(long, default_value = "main")]
        sweep: String,
        #[arg(long, default_value_t = 100)]
        embeddings: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Emit one row per problem instead of averages.
        #[arg(long)]
        cells: bool,
    },
    /// REGO against optimizing in the full space.
    Compare {
        #[arg(long)]
        problem: String,
        #[arg(long = "D", value_delimiter = ',', default_value = "10,100")]
        dims: Vec<usize>,
        #[arg(long, default_value = "direct")]
        solver: Solver,
        #[arg(long, default_value = "1:2.2:de")]
        pair: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Evaluation budget per run (default 10000·de).
        #[arg(long)]
        max_evals: Option<u64>,
        /// Local-search starts for multistart (default 20·de).
        #[arg(long)]
        starts: Option<usize>,
        /// Emit one summary row per D instead of every trial.
        #[arg(long)]
        summary: bool,
    },
}

fn parse_args() -> Result<Cli, CliError> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config::config_path(&args) {
        args = config::merge(&Cli::command(), args, path.as_ref())?;
    }
    Ok(Cli::parse_from(args))
}

fn main() -> ExitCode {
    let result = parse_args().and_then(commands::run);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
