//! Experiment drivers: single REGO and no-embedding trials, Monte Carlo
//! success curves, success tables, and distribution checks.
//!
//! Every trial draws from its own RNG sub-stream keyed by the experiment
//! seed and the trial's coordinates, so results do not depend on how many
//! worker threads run them. The worker count is capped by `REGO_THREADS`.

mod curves;
mod output;
mod table;
mod trial;
mod verify;

use thiserror::Error;

use crate::embedding::EmbeddingError;
use crate::feasibility::FeasibilityError;
use crate::linalg::LinalgError;
use crate::problems::ProblemError;
use crate::rng::RngStream;
use crate::solvers::SolverError;
use crate::theory::TheoryError;

pub use curves::{estimate_l_star, estimate_l_star_with_target, log_grid, CurveRow, SuccessCurve};
pub use output::{read_csv, write_rows, write_rows_to, CsvRow, Format};
pub use table::{
    run_success_table, DeltaBase, DeltaFormula, PairSpec, SuccessTable, Sweep, TableCell,
    TableConfig, TableRow,
};
pub use trial::{
    compare, no_embedding_half_width, run_no_embedding, run_rego, ComparisonSummary, TrialRecord,
    NO_EMBEDDING_FACTOR,
};
pub use verify::{verify_distribution, DistributionReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Stream ids separating the independent random inputs of an experiment.
pub(crate) mod streams {
    pub const PROBLEM: u64 = 1;
    pub const EMBEDDING: u64 = 2;
    pub const SOLVER: u64 = 3;
}

/// A sub-stream of `(seed, purpose)` keyed by `keys`, independent of any
/// draws already taken from other streams.
pub(crate) fn keyed_stream(seed: u64, purpose: u64, keys: &[u64]) -> RngStream {
    keys.iter()
        .fold(RngStream::new(seed, purpose), |s, &k| s.substream(k))
}

/// Worker threads: `REGO_THREADS` if set to a positive integer, else all cores.
pub fn worker_count() -> usize {
    std::env::var("REGO_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `op` on a pool sized by [`worker_count`].
pub fn with_workers<T: Send>(op: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
    {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}
