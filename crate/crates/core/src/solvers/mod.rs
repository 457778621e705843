//! Box-constrained global optimizers for the reduced problem.
//!
//! All solvers share a [`Budget`] and report a [`SolverResult`]. They stop
//! when the evaluation budget (or optional wall-clock limit) is spent, or as
//! soon as a value within `epsilon` of a known target is found.

mod direct;
mod nelder_mead;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::RngStream;

pub use direct::{direct_minimize, Direct, DirectOutcome, BALANCE_EPSILON};
pub use nelder_mead::{multistart_local, nelder_mead, SIMPLEX_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("unknown solver `{0}` (expected direct, multistart or random)")]
    UnknownSolver(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_evals: Option<u64>,
    pub max_starts: Option<usize>,
    pub target: Option<f64>,
    pub epsilon: f64,
    pub max_time: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_evals: None,
            max_starts: None,
            target: None,
            epsilon: crate::embedding::DEFAULT_EPSILON,
            max_time: None,
        }
    }
}

impl Budget {
    /// `10000·de` evaluations and `20·de` starts.
    pub fn for_effective_dim(de: usize) -> Self {
        Self {
            max_evals: Some(10_000 * de as u64),
            max_starts: Some(20 * de),
            ..Self::default()
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_max_evals(mut self, max_evals: u64) -> Self {
        self.max_evals = Some(max_evals);
        self
    }

    pub fn with_max_starts(mut self, max_starts: usize) -> Self {
        self.max_starts = Some(max_starts);
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.max_evals == Some(0) {
            return Err(SolverError::InvalidBudget(
                "max_evals must be positive".into(),
            ));
        }
        if self.max_starts == Some(0) {
            return Err(SolverError::InvalidBudget(
                "max_starts must be positive".into(),
            ));
        }
        if !(self.epsilon > 0.0) {
            return Err(SolverError::InvalidBudget(
                "epsilon must be positive".into(),
            ));
        }
        if let Some(t) = self.max_time {
            if !(t > 0.0) {
                return Err(SolverError::InvalidBudget(
                    "max_time must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    fn evals_or_default(&self, dim: usize) -> u64 {
        self.max_evals.unwrap_or(10_000 * dim as u64)
    }

    fn starts_or_default(&self, dim: usize) -> usize {
        self.max_starts.unwrap_or(20 * dim)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub evals: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
    /// `best_value <= target + epsilon`; false when no target was given.
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Direct,
    Multistart,
    Random,
}

impl Solver {
    pub const ALL: [Solver; 3] = [Solver::Direct, Solver::Multistart, Solver::Random];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Direct => "direct",
            Solver::Multistart => "multistart",
            Solver::Random => "random",
        }
    }

    /// Runs the solver; `rng` is ignored by DIRECT.
    pub fn minimize(
        self,
        f: impl FnMut(&[f64]) -> f64,
        lower: &[f64],
        upper: &[f64],
        budget: &Budget,
        rng: &mut RngStream,
    ) -> Result<SolverResult, SolverError> {
        match self {
            Solver::Direct => direct_minimize(f, lower, upper, budget),
            Solver::Multistart => multistart_local(f, lower, upper, budget, rng),
            Solver::Random => random_search(f, lower, upper, budget, rng),
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Solver::Direct),
            "multistart" | "multi-start" | "nelder-mead" => Ok(Solver::Multistart),
            "random" | "random-search" => Ok(Solver::Random),
            _ => Err(SolverError::UnknownSolver(s.to_string())),
        }
    }
}

fn check_box(lower: &[f64], upper: &[f64]) -> Result<(), SolverError> {
    if lower.is_empty() || lower.len() != upper.len() {
        return Err(SolverError::InvalidBox(format!(
            "bounds of lengths {} and {}",
            lower.len(),
            upper.len()
        )));
    }
    for (i, (lo, hi)) in lower.iter().zip(upper).enumerate() {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(SolverError::InvalidBox(format!(
                "coordinate {i}: [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Wraps the objective: counts evaluations, keeps the incumbent, and knows
/// when to stop.
struct Tracker<F> {
    f: F,
    evals: u64,
    max_evals: u64,
    threshold: Option<f64>,
    deadline: Option<Instant>,
    start: Instant,
    best_value: f64,
    best_point: Vec<f64>,
    target: Option<f64>,
    epsilon: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn new(f: F, budget: &Budget, max_evals: u64) -> Self {
        let start = Instant::now();
        Self {
            f,
            evals: 0,
            max_evals,
            threshold: budget.target.map(|t| t + budget.epsilon),
            deadline: budget.max_time.map(|s| start + Duration::from_secs_f64(s)),
            start,
            best_value: f64::INFINITY,
            best_point: Vec::new(),
            target: budget.target,
            epsilon: budget.epsilon,
        }
    }

    fn target_hit(&self) -> bool {
        self.threshold.is_some_and(|t| self.best_value <= t)
    }

    fn done(&self) -> bool {
        self.evals >= self.max_evals
            || self.target_hit()
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// `None` once the budget is spent or the target reached.
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.done() {
            return None;
        }
        self.evals += 1;
        let v = (self.f)(x);
        // NaN never becomes the incumbent
        if v < self.best_value || self.best_point.is_empty() {
            self.best_value = v;
            self.best_point = x.to_vec();
        }
        Some(v)
    }

    fn finish(self) -> SolverResult {
        let converged = self
            .target
            .is_some_and(|t| self.best_value <= t + self.epsilon);
        SolverResult {
            best_value: self.best_value,
            best_point: self.best_point,
            evals: self.evals,
            elapsed: self.start.elapsed().as_secs_f64(),
            converged,
        }
    }
}

/// Best of `max_evals` uniform draws from the box.
pub fn random_search(
    f: impl FnMut(&[f64]) -> f64,
    lower: &[f64],
    upper: &[f64],
    budget: &Budget,
    rng: &mut RngStream,
) -> Result<SolverResult, SolverError> {
    check_box(lower, upper)?;
    budget.validate()?;
    let n = lower.len();
    let mut tracker = Tracker::new(f, budget, budget.evals_or_default(n));
    let mut x = vec![0.0; n];
    while !tracker.done() {
        for i in 0..n {
            x[i] = rng.uniform(lower[i], upper[i]);
        }
        tracker.eval(&x);
    }
    Ok(tracker.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.name().parse::<Solver>().unwrap(), s);
        }
        assert!("baron".parse::<Solver>().is_err());
    }

    #[test]
    fn budget_defaults_scale_with_de() {
        let b = Budget::for_effective_dim(3);
        assert_eq!(b.max_evals, Some(30_000));
        assert_eq!(b.max_starts, Some(60));
        assert_eq!(b.epsilon, 1e-3);
        assert!(Budget::default().with_max_evals(0).validate().is_err());
        assert!(Budget::default().with_epsilon(0.0).validate().is_err());
    }

    #[test]
    fn random_search_constant() {
        let budget = Budget::default().with_max_evals(50);
        let mut rng = RngStream::new(1, 0);
        let r = random_search(|_| 4.5, &[-1.0, -1.0], &[1.0, 1.0], &budget, &mut rng).unwrap();
        assert_eq!(r.best_value, 4.5);
        assert_eq!(r.evals, 50);
        assert!(!r.converged);
    }

    #[test]
    fn random_search_is_reproducible() {
        let budget = Budget::default().with_max_evals(200);
        let sphere = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>();
        let a = random_search(
            sphere,
            &[-1.0; 3],
            &[1.0; 3],
            &budget,
            &mut RngStream::new(9, 2),
        )
        .unwrap();
        let b = random_search(
            sphere,
            &[-1.0; 3],
            &[1.0; 3],
            &budget,
            &mut RngStream::new(9, 2),
        )
        .unwrap();
        assert_eq!(a.best_point, b.best_point);
        assert_eq!(a.best_value, sphere(&a.best_point));
    }

    #[test]
    fn random_search_improves_with_budget() {
        let sphere = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>();
        let median = |evals: u64| {
            let mut v: Vec<f64> = (0..50)
                .map(|s| {
                    let budget = Budget::default().with_max_evals(evals);
                    random_search(
                        sphere,
                        &[-1.0; 2],
                        &[1.0; 2],
                        &budget,
                        &mut RngStream::new(s, 0),
                    )
                    .unwrap()
                    .best_value
                })
                .collect();
            v.sort_by(f64::total_cmp);
            v[25]
        };
        let (m10, m100, m1000) = (median(10), median(100), median(1000));
        assert!(m10 > m100 && m100 > m1000, "{m10} {m100} {m1000}");
    }

    #[test]
    fn target_stops_early() {
        let budget = Budget::default()
            .with_max_evals(10_000)
            .with_target(0.0)
            .with_epsilon(0.5);
        let mut rng = RngStream::new(3, 0);
        let r = random_search(|y| y[0].abs(), &[-1.0], &[1.0], &budget, &mut rng).unwrap();
        assert!(r.converged);
        assert!(r.evals < 100);
    }

    #[test]
    fn rejects_bad_boxes() {
        let b = Budget::default();
        let mut rng = RngStream::new(0, 0);
        assert!(random_search(|_| 0.0, &[1.0], &[0.0], &b, &mut rng).is_err());
        assert!(random_search(|_| 0.0, &[], &[], &b, &mut rng).is_err());
        assert!(random_search(|_| 0.0, &[0.0], &[f64::INFINITY], &b, &mut rng).is_err());
    }
}
