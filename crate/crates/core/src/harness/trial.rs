use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::PairSpec;
use super::{keyed_stream, streams, with_workers, HarnessError, Result};
use crate::embedding::{geometric_success, is_successful, make_reduced, EmbeddingSpec};
use crate::linalg::norm_inf;
use crate::problems::{generate, BaseProblem, GeneratedProblem};
use crate::solvers::{Budget, Solver};

/// Half-width of the full-space box, in units of `sqrt(de)`, for runs
/// without an embedding.
pub const NO_EMBEDDING_FACTOR: f64 = 1.5;

/// Full-space box half-width `1.5·sqrt(de)`: every rotated minimizer has
/// norm at most `sqrt(de)` and so lies strictly inside.
pub fn no_embedding_half_width(de: usize) -> f64 {
    NO_EMBEDDING_FACTOR * (de as f64).sqrt()
}

/// One REGO or no-embedding run. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub problem: String,
    #[serde(rename = "D")]
    pub ambient_dim: usize,
    pub de: usize,
    pub d: usize,
    pub delta: f64,
    pub solver: String,
    pub seed: u64,
    pub best_value: f64,
    pub f_star: f64,
    pub evals: u64,
    pub elapsed_s: f64,
    pub converged: bool,
    pub geometric_success: bool,
}

fn with_defaults(budget: &Budget, de: usize, f_star: f64) -> Budget {
    let defaults = Budget::for_effective_dim(de);
    Budget {
        max_evals: budget.max_evals.or(defaults.max_evals),
        max_starts: budget.max_starts.or(defaults.max_starts),
        target: Some(f_star),
        epsilon: budget.epsilon,
        max_time: budget.max_time,
    }
}

/// REGO: sample a `D x d` Gaussian `A`, minimize `f(A y + p)` over
/// `[-δ, δ]^d`, and record both the solver verdict and the LP verdict.
///
/// `converged` requires the reported point to lie in the box and reach
/// `f* + ε`. Missing budget fields default to `10000·de` evaluations and
/// `20·de` starts.
pub fn run_rego(
    problem: &GeneratedProblem,
    solver: Solver,
    d: usize,
    delta: f64,
    seed: u64,
    offset: Option<Vec<f64>>,
    budget: &Budget,
) -> Result<TrialRecord> {
    if d == 0 {
        return Err(HarnessError::Invalid(
            "embedding dimension must be positive".into(),
        ));
    }
    let de = problem.effective_dim();
    let budget = with_defaults(budget, de, problem.f_star());
    let mut rng = keyed_stream(seed, streams::EMBEDDING, &[]);
    let mut spec = EmbeddingSpec::gaussian(problem.ambient_dim(), d, delta, &mut rng)?;
    if let Some(p) = offset {
        spec = spec.with_offset(p)?;
    }
    let geometric = geometric_success(problem, &spec)?;
    let mut objective = make_reduced(problem, &spec)?;
    let mut solver_rng = keyed_stream(seed, streams::SOLVER, &[]);
    let result = solver.minimize(
        |y| objective.evaluate(y),
        &spec.lower(),
        &spec.upper(),
        &budget,
        &mut solver_rng,
    )?;
    let converged = is_successful(
        problem.f_star(),
        delta,
        &result.best_point,
        result.best_value,
        budget.epsilon,
    );
    Ok(TrialRecord {
        problem: problem.name().to_string(),
        ambient_dim: problem.ambient_dim(),
        de,
        d,
        delta,
        solver: solver.name().to_string(),
        seed,
        best_value: result.best_value,
        f_star: problem.f_star(),
        evals: result.evals,
        elapsed_s: result.elapsed,
        converged,
        geometric_success: geometric,
    })
}

/// Solves the `D`-dimensional problem directly over
/// `[-1.5·sqrt(de), 1.5·sqrt(de)]^D`.
pub fn run_no_embedding(
    problem: &GeneratedProblem,
    solver: Solver,
    seed: u64,
    budget: &Budget,
) -> Result<TrialRecord> {
    let de = problem.effective_dim();
    let big_d = problem.ambient_dim();
    let budget = with_defaults(budget, de, problem.f_star());
    let half = no_embedding_half_width(de);
    let lower = vec![-half; big_d];
    let upper = vec![half; big_d];
    let mut solver_rng = keyed_stream(seed, streams::SOLVER, &[]);
    let result = solver.minimize(
        |x| problem.evaluate(x),
        &lower,
        &upper,
        &budget,
        &mut solver_rng,
    )?;
    let geometric = problem
        .minimizer_coordinates()
        .iter()
        .any(|z| norm_inf(&problem.lift(z)) <= half);
    let converged = is_successful(
        problem.f_star(),
        half,
        &result.best_point,
        result.best_value,
        budget.epsilon,
    );
    Ok(TrialRecord {
        problem: problem.name().to_string(),
        ambient_dim: big_d,
        de,
        d: big_d,
        delta: half,
        solver: format!("{}-no-embedding", solver.name()),
        seed,
        best_value: result.best_value,
        f_star: problem.f_star(),
        evals: result.evals,
        elapsed_s: result.elapsed,
        converged,
        geometric_success: geometric,
    })
}

/// Convergence frequencies of REGO and the no-embedding baseline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub problem: String,
    #[serde(rename = "D")]
    pub ambient_dim: usize,
    pub solver: String,
    pub trials: usize,
    pub rego_converged: f64,
    pub rego_geometric: f64,
    pub rego_mean_evals: f64,
    pub rego_mean_time_s: f64,
    pub baseline_converged: f64,
    pub baseline_mean_evals: f64,
    pub baseline_mean_time_s: f64,
    /// Fraction of baseline runs that used the whole evaluation budget.
    pub baseline_budget_exhausted: f64,
}

/// Runs `trials` REGO and no-embedding trials of one problem at dimension
/// `ambient_dim`. Each trial rotates the problem independently; REGO and
/// the baseline share the rotation.
pub fn compare(
    base: &BaseProblem,
    ambient_dim: usize,
    solver: Solver,
    pair: &PairSpec,
    trials: usize,
    seed: u64,
    budget: &Budget,
) -> Result<(Vec<TrialRecord>, ComparisonSummary)> {
    if trials == 0 {
        return Err(HarnessError::Invalid("need at least one trial".into()));
    }
    let base = base.scale_to_unit_box();
    let de = base.dim();
    let d = pair.d(de);
    let delta = pair.delta(de, ambient_dim);
    let max_evals = with_defaults(budget, de, base.f_star())
        .max_evals
        .unwrap_or(u64::MAX);
    let pairs: Vec<(TrialRecord, TrialRecord)> = with_workers(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let key = [ambient_dim as u64, t as u64];
                let mut rng = keyed_stream(seed, streams::PROBLEM, &key);
                let problem = generate(&base, ambient_dim, &mut rng)?;
                let trial_seed = keyed_stream(seed, streams::EMBEDDING, &key).next_u64();
                let rego = run_rego(&problem, solver, d, delta, trial_seed, None, budget)?;
                let plain = run_no_embedding(&problem, solver, trial_seed, budget)?;
                Ok((rego, plain))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let n = trials as f64;
    let frac = |it: &mut dyn Iterator<Item = bool>| it.filter(|&b| b).count() as f64 / n;
    let summary = ComparisonSummary {
        problem: base.id().to_string(),
        ambient_dim,
        solver: solver.name().to_string(),
        trials,
        rego_converged: frac(&mut pairs.iter().map(|p| p.0.converged)),
        rego_geometric: frac(&mut pairs.iter().map(|p| p.0.geometric_success)),
        rego_mean_evals: pairs.iter().map(|p| p.0.evals as f64).sum::<f64>() / n,
        rego_mean_time_s: pairs.iter().map(|p| p.0.elapsed_s).sum::<f64>() / n,
        baseline_converged: frac(&mut pairs.iter().map(|p| p.1.converged)),
        baseline_mean_evals: pairs.iter().map(|p| p.1.evals as f64).sum::<f64>() / n,
        baseline_mean_time_s: pairs.iter().map(|p| p.1.elapsed_s).sum::<f64>() / n,
        baseline_budget_exhausted: frac(&mut pairs.iter().map(|p| p.1.evals >= max_evals)),
    };
    let records = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
    Ok((records, summary))
}
