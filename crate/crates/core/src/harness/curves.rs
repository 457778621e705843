use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{with_workers, HarnessError, Result};
use crate::feasibility::{min_inf_norm_solution, LpStatus, FEASIBILITY_SLACK};
use crate::linalg::sample_gaussian;
use crate::rng::RngStream;
use crate::theory::{success_lower_bound, TheoryParams};

/// Monte Carlo estimate `L̂*` of the success probability next to the bound
/// `R*`, on a grid of normalized half-widths `δ̄ = δ / μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessCurve {
    pub de: usize,
    pub d: usize,
    pub delta_bar: Vec<f64>,
    pub l_hat: Vec<f64>,
    pub r_star: Vec<f64>,
    pub trials: usize,
}

/// One grid point of a curve. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub de: usize,
    pub d: usize,
    pub delta_bar: f64,
    #[serde(rename = "L_hat")]
    pub l_hat: f64,
    #[serde(rename = "R_star")]
    pub r_star: f64,
    pub trials: usize,
}

impl SuccessCurve {
    pub fn rows(&self) -> Vec<CurveRow> {
        (0..self.delta_bar.len())
            .map(|i| CurveRow {
                de: self.de,
                d: self.d,
                delta_bar: self.delta_bar[i],
                l_hat: self.l_hat[i],
                r_star: self.r_star[i],
                trials: self.trials,
            })
            .collect()
    }
}

/// `points` logarithmically spaced values from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0) || !(max >= min) || points == 0 {
        return Err(HarnessError::Invalid(format!(
            "grid needs 0 < min <= max and points >= 1 (got {min}, {max}, {points})"
        )));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (a, b) = (min.ln(), max.ln());
    Ok((0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect())
}

/// Estimates `P[∃ y ∈ [-δ̄, δ̄]^d : B y = z̄]` for a fixed unit `z̄` drawn
/// from `rng`.
///
/// The same `trials` matrices are reused at every grid point: the minimal
/// infinity norm `t` of each system is computed once and `L̂*(δ̄)` is the
/// fraction with `t <= δ̄`, which makes the curve nondecreasing in `δ̄`.
pub fn estimate_l_star(
    de: usize,
    d: usize,
    grid: &[f64],
    trials: usize,
    rng: &mut RngStream,
) -> Result<SuccessCurve> {
    if de == 0 {
        return Err(HarnessError::Invalid("de must be positive".into()));
    }
    let z_bar = rng.unit_vector(de);
    estimate_l_star_with_target(de, d, grid, trials, &z_bar, rng)
}

/// As [`estimate_l_star`] with a caller-chosen `z̄` (normalized here). Matrix
/// `t` is drawn from `rng.substream(t)`.
pub fn estimate_l_star_with_target(
    de: usize,
    d: usize,
    grid: &[f64],
    trials: usize,
    z_bar: &[f64],
    rng: &RngStream,
) -> Result<SuccessCurve> {
    if de == 0 || d < de {
        return Err(HarnessError::Invalid(format!(
            "need d >= de >= 1 (d={d}, de={de})"
        )));
    }
    if trials == 0 || grid.is_empty() {
        return Err(HarnessError::Invalid(
            "need trials >= 1 and a nonempty grid".into(),
        ));
    }
    if z_bar.len() != de {
        return Err(HarnessError::Invalid(format!("z̄ must have {de} entries")));
    }
    let norm = z_bar.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(HarnessError::Invalid("z̄ must be nonzero".into()));
    }
    let z: Vec<f64> = z_bar.iter().map(|v| v / norm).collect();

    let t_values: Vec<f64> = with_workers(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut sub = rng.substream(t as u64);
                let b = sample_gaussian(de, d, &mut sub);
                let res = min_inf_norm_solution(&b, &z)?;
                Ok(match res.status {
                    LpStatus::Infeasible => f64::INFINITY,
                    _ => res.t,
                })
            })
            .collect::<Result<_>>()
    })?;

    let mut l_hat = Vec::with_capacity(grid.len());
    let mut r_star = Vec::with_capacity(grid.len());
    for &delta_bar in grid {
        let hits = t_values
            .iter()
            .filter(|&&t| t <= delta_bar + FEASIBILITY_SLACK)
            .count();
        l_hat.push(hits as f64 / trials as f64);
        r_star.push(success_lower_bound(&TheoryParams::normalized(
            d, de, delta_bar,
        )?));
    }
    Ok(SuccessCurve {
        de,
        d,
        delta_bar: grid.to_vec(),
        l_hat,
        r_star,
        trials,
    })
}
