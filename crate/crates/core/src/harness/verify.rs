use serde::{Deserialize, Serialize};

use super::{HarnessError, Result};
use crate::linalg::{min_two_norm_solution, sample_gaussian};
use crate::rng::RngStream;
use crate::stats::{binned_total_variation, ks_statistic, mean, quantile};
use crate::theory::{chi2_cdf, expected_sq_norm_y2, radial_cdf};

const RADIAL_BINS: usize = 20;

/// Sampled `y₂*` against its predicted law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub de: usize,
    pub d: usize,
    pub samples: usize,
    /// `d - de + 1`
    pub dof: u32,
    /// KS distance between `‖z‖² / ‖y₂*‖²` and `χ²_dof`.
    pub ks_statistic: f64,
    pub mean_sq_norm: f64,
    /// `None` when the expectation is infinite (`d - de <= 1`).
    pub expected_sq_norm: Option<f64>,
    pub mean_relative_error: Option<f64>,
    /// Total variation between binned `‖y₂*‖` and its predicted law, on
    /// bins of equal predicted mass.
    pub radial_tv: f64,
    /// Largest absolute per-coordinate mean of `y₂* / ‖y₂*‖`.
    pub direction_mean_max: f64,
}

/// Samples `y₂* = Bᵀ(BBᵀ)⁻¹z` for fresh Gaussian `B` and a fixed unit `z`
/// drawn from `rng`, and compares with the predicted distribution.
pub fn verify_distribution(
    de: usize,
    d: usize,
    samples: usize,
    rng: &mut RngStream,
) -> Result<DistributionReport> {
    if de == 0 || d < de {
        return Err(HarnessError::Invalid(format!(
            "need d >= de >= 1 (d={d}, de={de})"
        )));
    }
    if samples < 1000 {
        return Err(HarnessError::Invalid("need at least 1000 samples".into()));
    }
    let z = rng.unit_vector(de);
    let n = (d - de + 1) as u32;

    let mut ratios = Vec::with_capacity(samples);
    let mut norms = Vec::with_capacity(samples);
    let mut sq_norms = Vec::with_capacity(samples);
    let mut direction_sum = vec![0.0; d];
    for _ in 0..samples {
        let b = sample_gaussian(de, d, rng);
        let y = min_two_norm_solution(&b, &z)?;
        let sq: f64 = y.iter().map(|v| v * v).sum();
        let norm = sq.sqrt();
        for (acc, v) in direction_sum.iter_mut().zip(&y) {
            *acc += v / norm;
        }
        ratios.push(1.0 / sq);
        norms.push(norm);
        sq_norms.push(sq);
    }

    let ks = ks_statistic(&ratios, |x| chi2_cdf(n, x).unwrap_or(0.0));
    let mean_sq_norm = mean(&sq_norms);
    let expected = expected_sq_norm_y2(d, de, 1.0).ok();
    let mean_relative_error = expected.map(|e| (mean_sq_norm - e).abs() / e);

    let cdf = |r: f64| radial_cdf(r, d, de, 1.0);
    let hi = norms.iter().cloned().fold(1.0, f64::max) * 2.0;
    let edges: Vec<f64> = (1..RADIAL_BINS)
        .map(|k| quantile(cdf, k as f64 / RADIAL_BINS as f64, 0.0, hi.max(1e3)))
        .collect();
    let radial_tv = binned_total_variation(&norms, cdf, &edges);
    let direction_mean_max = direction_sum
        .iter()
        .map(|s| (s / samples as f64).abs())
        .fold(0.0, f64::max);

    Ok(DistributionReport {
        de,
        d,
        samples,
        dof: n,
        ks_statistic: ks,
        mean_sq_norm,
        expected_sq_norm: expected,
        mean_relative_error,
        radial_tv,
        direction_mean_max,
    })
}
