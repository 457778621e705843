//! Multi-start Nelder–Mead with trial points clipped to the box.

use super::{check_box, Budget, SolverError, SolverResult, Tracker};
use crate::rng::RngStream;

/// A start stops once every vertex lies within this distance of the best one.
pub const SIMPLEX_TOLERANCE: f64 = 1e-8;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const INITIAL_STEP: f64 = 0.1;

fn clip(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(*lo, *hi);
    }
}

/// `a + t (b - a)`, clipped.
fn along(a: &[f64], b: &[f64], t: f64, lower: &[f64], upper: &[f64]) -> Vec<f64> {
    let mut x: Vec<f64> = a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect();
    clip(&mut x, lower, upper);
    x
}

/// One bounded Nelder–Mead run from `x0` using at most `cap` evaluations.
/// Returns `None` if the shared budget ran out.
fn run_start<F: FnMut(&[f64]) -> f64>(
    tracker: &mut Tracker<F>,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    cap: u64,
) -> Option<()> {
    let n = x0.len();
    let stop_at = tracker.evals.saturating_add(cap);
    let eval = |tracker: &mut Tracker<F>, x: &[f64]| -> Option<f64> {
        if tracker.evals >= stop_at {
            return None;
        }
        tracker.eval(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(tracker, x0)?));
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = INITIAL_STEP * (upper[i] - lower[i]);
        v[i] = if v[i] + step <= upper[i] {
            v[i] + step
        } else {
            v[i] - step
        };
        let fv = eval(tracker, &v)?;
        simplex.push((v, fv));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_TOLERANCE {
            return Some(());
        }

        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi / n as f64;
            }
        }
        let (worst, f_worst) = simplex[n].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[n - 1].1;

        let xr = along(&centroid, &worst, -REFLECT, lower, upper);
        let fr = eval(tracker, &xr)?;
        if fr < f_best {
            let xe = along(&centroid, &worst, -EXPAND, lower, upper);
            let fe = eval(tracker, &xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc = along(&centroid, &xr, CONTRACT, lower, upper);
            let fc = eval(tracker, &xc)?;
            (xc, fc)
        } else {
            let xc = along(&centroid, &worst, CONTRACT, lower, upper);
            let fc = eval(tracker, &xc)?;
            (xc, fc)
        };
        if fc < fr.min(f_worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = along(&best, &vertex.0, SHRINK, lower, upper);
            let fx = eval(tracker, &x)?;
            *vertex = (x, fx);
        }
    }
}

/// A single bounded Nelder–Mead run from `x0`.
pub fn nelder_mead(
    f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    budget: &Budget,
) -> Result<SolverResult, SolverError> {
    check_box(lower, upper)?;
    budget.validate()?;
    let n = lower.len();
    if x0.len() != n {
        return Err(SolverError::InvalidBox(format!(
            "start has {} coordinates",
            x0.len()
        )));
    }
    let mut start = x0.to_vec();
    clip(&mut start, lower, upper);
    let max_evals = budget.max_evals.unwrap_or(1000 * n as u64);
    let mut tracker = Tracker::new(f, budget, max_evals);
    run_start(&mut tracker, &start, lower, upper, max_evals);
    Ok(tracker.finish())
}

/// Local searches from `max_starts` uniform random points; returns the best.
///
/// Each start may use `max_evals / max_starts` evaluations.
pub fn multistart_local(
    f: impl FnMut(&[f64]) -> f64,
    lower: &[f64],
    upper: &[f64],
    budget: &Budget,
    rng: &mut RngStream,
) -> Result<SolverResult, SolverError> {
    check_box(lower, upper)?;
    budget.validate()?;
    let n = lower.len();
    let starts = budget.starts_or_default(n);
    let (total, cap) = match budget.max_evals {
        Some(m) => (m, (m / starts as u64).max(1)),
        None => (1000 * n as u64 * starts as u64, 1000 * n as u64),
    };
    let mut tracker = Tracker::new(f, budget, total);
    for _ in 0..starts {
        if tracker.done() {
            break;
        }
        let x0: Vec<f64> = lower
            .iter()
            .zip(upper)
            .map(|(lo, hi)| rng.uniform(*lo, *hi))
            .collect();
        run_start(&mut tracker, &x0, lower, upper, cap);
    }
    Ok(tracker.finish())
}
