//! Closed-form probabilities for random embeddings.
//!
//! For a `de x d` Gaussian `B` and a fixed `z`, the minimum-norm solution
//! `y₂*` of `B y = z` satisfies `‖z‖² / ‖y₂*‖² ~ χ²_n` with `n = d - de + 1`.
//! Everything here follows from that law: the probability that `y₂*` lands in
//! a ball of radius `δ`, an explicit lower bound on the probability that the
//! reduced problem contains a global minimizer, the mean of `‖y₂*‖²`, and the
//! density of `y₂*`.
//!
//! Affine embeddings `x = A y + p` use the same formulas with `mu` replaced by
//! the distance from `p` to the minimizer set and `‖x⊤*‖` by `‖x⊤* - p⊤‖`;
//! callers pass the adjusted quantities.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("quantity is undefined: {0}")]
    Undefined(String),
}

const MAX_ITERATIONS: usize = 100_000;

/// `Γ(n / 2)` for a positive integer `n`, by exact recursion from `Γ(1/2)` or `Γ(1)`.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n >= 1, "gamma_half needs n >= 1");
    let mut g = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut k = if n % 2 == 0 { 2 } else { 1 };
    while k < n {
        g *= k as f64 / 2.0;
        k += 2;
    }
    g
}

/// `ln Γ(n / 2)`, summed in log space so large `n` does not overflow.
pub fn ln_gamma_half(n: u32) -> f64 {
    assert!(n >= 1, "ln_gamma_half needs n >= 1");
    let mut g = if n % 2 == 0 { 0.0 } else { 0.5 * PI.ln() };
    let mut k = if n % 2 == 0 { 2 } else { 1 };
    while k < n {
        g += (k as f64 / 2.0).ln();
        k += 2;
    }
    g
}

/// Regularized incomplete gamma pair `(P(a, x), Q(a, x))` for `a = n / 2`.
///
/// Series below `x < a + 1`, Lentz continued fraction above; the complement
/// is formed from whichever side converges, so both tails keep full relative
/// precision.
fn incomplete_gamma_half(n: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 1.0);
    }
    if x.is_infinite() {
        return (1.0, 0.0);
    }
    let a = n as f64 / 2.0;
    let ln_gamma_a = ln_gamma_half(n);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..MAX_ITERATIONS {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = (sum.ln() + a * x.ln() - x - ln_gamma_a).exp();
        let p = p.min(1.0);
        (p, 1.0 - p)
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITERATIONS {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (a * x.ln() - x - ln_gamma_a).exp() * h;
        let q = q.clamp(0.0, 1.0);
        (1.0 - q, q)
    }
}

fn check_chi2_args(n: u32, x: f64) -> Result<(), TheoryError> {
    if n == 0 {
        return Err(TheoryError::DomainError(
            "degrees of freedom must be >= 1".into(),
        ));
    }
    if x.is_nan() || x < 0.0 {
        return Err(TheoryError::DomainError(format!(
            "chi-squared argument {x} < 0"
        )));
    }
    Ok(())
}

/// `P[χ²_n ≤ x]`.
pub fn chi2_cdf(n: u32, x: f64) -> Result<f64, TheoryError> {
    check_chi2_args(n, x)?;
    Ok(incomplete_gamma_half(n, x / 2.0).0)
}

/// `P[χ²_n ≥ x]`, computed directly rather than as `1 - cdf`.
pub fn chi2_sf(n: u32, x: f64) -> Result<f64, TheoryError> {
    check_chi2_args(n, x)?;
    Ok(incomplete_gamma_half(n, x / 2.0).1)
}

/// `C(n) = 4 / (n (n + 2) Γ(n/2))`.
pub fn tail_bound_constant(n: u32) -> f64 {
    let nf = n as f64;
    4.0 / (nf * (nf + 2.0) * gamma_half(n))
}

/// Lower bound on `P[χ²_n ≥ x]` from an upper bound on the lower incomplete
/// gamma function: `1 - C(n) (1 + n/2 e^{-x/2}) (x/2)^{n/2}`.
///
/// Can be negative (vacuous) for large `x`; it decreases without bound.
pub fn chi2_tail_lower_bound(n: u32, x: f64) -> f64 {
    debug_assert!(n >= 1 && x >= 0.0);
    let nf = n as f64;
    1.0 - tail_bound_constant(n) * (1.0 + 0.5 * nf * (-0.5 * x).exp()) * (0.5 * x).powf(0.5 * nf)
}

/// Parameters of one embedding configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoryParams {
    /// Embedding dimension `d`.
    pub d: usize,
    /// Effective dimension `de`.
    pub de: usize,
    /// Distance from the origin (or the affine point) to the minimizer set.
    pub mu: f64,
    /// Half-width of the reduced box.
    pub delta: f64,
}

impl TheoryParams {
    pub fn new(d: usize, de: usize, mu: f64, delta: f64) -> Result<Self, TheoryError> {
        if de == 0 || d < de {
            return Err(TheoryError::DomainError(format!(
                "need d >= de >= 1, got d={d}, de={de}"
            )));
        }
        if !(mu >= 0.0) || !(delta > 0.0) {
            return Err(TheoryError::DomainError(format!(
                "need mu >= 0 and delta > 0, got mu={mu}, delta={delta}"
            )));
        }
        Ok(Self { d, de, mu, delta })
    }

    /// Parameters for a normalized box half-width `delta_bar = delta / mu` with `mu = 1`.
    pub fn normalized(d: usize, de: usize, delta_bar: f64) -> Result<Self, TheoryError> {
        Self::new(d, de, 1.0, delta_bar)
    }

    /// Degrees of freedom `n = d - de + 1`.
    pub fn dof(&self) -> u32 {
        (self.d - self.de + 1) as u32
    }

    /// `delta / mu`.
    pub fn delta_bar(&self) -> f64 {
        self.delta / self.mu
    }

    fn ratio_sq(&self) -> f64 {
        let r = self.mu / self.delta;
        r * r
    }
}

/// The explicit lower bound `R*` on the probability that the reduced problem
/// contains a global minimizer. Depends only on `n` and `mu / delta`.
pub fn success_lower_bound(params: &TheoryParams) -> f64 {
    chi2_tail_lower_bound(params.dof(), params.ratio_sq())
}

/// `P[χ²_n ≥ mu² / delta²]`, itself a lower bound on the success probability
/// and equal to `P[‖y₂*‖ ≤ delta]` when `mu = ‖x⊤*‖`.
pub fn exact_success_tail(params: &TheoryParams) -> f64 {
    incomplete_gamma_half(params.dof(), params.ratio_sq() / 2.0).1
}

/// `E[‖y₂*‖²] = ‖x⊤*‖² / (d - de - 1)`, finite only when `d - de > 1`.
pub fn expected_sq_norm_y2(d: usize, de: usize, norm_x_top: f64) -> Result<f64, TheoryError> {
    if d < de + 2 {
        return Err(TheoryError::Undefined(format!(
            "E‖y₂*‖² needs d - de > 1 (d={d}, de={de})"
        )));
    }
    Ok(norm_x_top * norm_x_top / (d - de - 1) as f64)
}

/// Density of `y₂*` at `y` (`d = y.len()`), which depends on `y` only via `‖y‖`.
pub fn pdf_y2(y: &[f64], de: usize, norm_x_top: f64) -> Result<f64, TheoryError> {
    let d = y.len();
    if de == 0 || d < de {
        return Err(TheoryError::DomainError(format!(
            "need d >= de >= 1 (d={d}, de={de})"
        )));
    }
    if !(norm_x_top > 0.0) {
        return Err(TheoryError::DomainError("‖x⊤*‖ must be positive".into()));
    }
    let yty: f64 = y.iter().map(|v| v * v).sum();
    if yty == 0.0 {
        return Err(TheoryError::DomainError(
            "density undefined at y = 0".into(),
        ));
    }
    let n = (d - de + 1) as u32;
    let (nf, df) = (n as f64, d as f64);
    let ln = -0.5 * df * PI.ln() + ln_gamma_half(d as u32) - ln_gamma_half(n)
        + nf * (norm_x_top / 2f64.sqrt()).ln()
        - 0.5 * (nf + df) * yty.ln()
        - norm_x_top * norm_x_top / (2.0 * yty);
    Ok(ln.exp())
}

/// Density of `‖y₂*‖` at `r > 0`: a scaled square-root inverse-χ²_n law.
pub fn radial_pdf(r: f64, d: usize, de: usize, norm_x_top: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let n = (d - de + 1) as u32;
    let nf = n as f64;
    let s = r / norm_x_top;
    let ln =
        (1.0 - 0.5 * nf) * 2f64.ln() - ln_gamma_half(n) - (nf + 1.0) * s.ln() - 1.0 / (2.0 * s * s);
    ln.exp() / norm_x_top
}

/// `P[‖y₂*‖ ≤ r]`.
pub fn radial_cdf(r: f64, d: usize, de: usize, norm_x_top: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let n = (d - de + 1) as u32;
    incomplete_gamma_half(n, norm_x_top * norm_x_top / (2.0 * r * r)).1
}

/// Earlier bound `1 - mu sqrt(de) / delta`, derived for `d = de` only.
pub fn wang_bound(de: usize, mu: f64, delta: f64) -> f64 {
    1.0 - mu * (de as f64).sqrt() / delta
}

/// Earlier bound `1 - exp(-(sqrt(d) - sqrt(de) - mu/delta)² / 2)`.
///
/// Valid only when `delta > mu / (sqrt(d) - sqrt(de))`; `None` otherwise.
pub fn sanyang_kaban_bound(d: usize, de: usize, mu: f64, delta: f64) -> Option<f64> {
    let gap = (d as f64).sqrt() - (de as f64).sqrt();
    if gap <= 0.0 || delta <= mu / gap {
        return None;
    }
    let t = gap - mu / delta;
    Some(1.0 - (-0.5 * t * t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{min_two_norm_solution, sample_gaussian};
    use crate::rng::RngStream;

    /// Composite Simpson on [a, b] with `m` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
        let h = (b - a) / m as f64;
        let mut s = f(a) + f(b);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn gamma_half_values() {
        assert_eq!(gamma_half(2), 1.0);
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(gamma_half(10), 24.0);
        assert!((ln_gamma_half(11) - gamma_half(11).ln()).abs() < 1e-13);
    }

    #[test]
    fn cdf_closed_form_two_dof() {
        assert!((chi2_cdf(2, 2.0 * 2f64.ln()).unwrap() - 0.5).abs() < 1e-14);
        for &x in &[1e-6, 0.01, 0.5, 1.0, 2.9, 3.1, 7.0, 25.0, 80.0] {
            let exact = 1.0 - (-x / 2.0f64).exp();
            assert!((chi2_cdf(2, x).unwrap() - exact).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn cdf_closed_form_four_and_six_dof() {
        for &x in &[0.001, 0.3, 2.0, 4.0, 5.9, 6.1, 12.0, 40.0] {
            let h: f64 = x / 2.0;
            let four = 1.0 - (-h).exp() * (1.0 + h);
            let six = 1.0 - (-h).exp() * (1.0 + h + h * h / 2.0);
            assert!((chi2_cdf(4, x).unwrap() - four).abs() < 1e-12, "x={x}");
            assert!((chi2_cdf(6, x).unwrap() - six).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn cdf_odd_dof_matches_quadrature() {
        for n in [1u32, 3, 5] {
            for &x in &[0.5, 1.0, 3.0, 9.0] {
                // substitute x = t² to remove the t^{-1/2} singularity for n = 1
                let k = n as f64 / 2.0;
                let norm = 2f64.powf(k) * gamma_half(n);
                let q = simpson(
                    |t| 2.0 * t.powi(n as i32 - 1) * (-t * t / 2.0).exp() / norm,
                    0.0,
                    f64::sqrt(x),
                    20_000,
                );
                assert!((chi2_cdf(n, x).unwrap() - q).abs() < 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn cdf_limits_and_errors() {
        assert!((chi2_cdf(1, 1e4).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(chi2_cdf(1, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(chi2_cdf(3, 0.0).unwrap(), 0.0);
        assert!(chi2_cdf(3, -1.0).is_err());
        assert!(chi2_cdf(0, 1.0).is_err());
        let sf = chi2_sf(3, 200.0).unwrap();
        assert!(sf > 0.0 && sf < 1e-40);
    }

    #[test]
    fn cdf_matches_monte_carlo_four_dof() {
        let mut rng = RngStream::new(4, 4);
        let trials = 1_000_000;
        let hits = (0..trials)
            .filter(|_| (0..4).map(|_| rng.standard_normal().powi(2)).sum::<f64>() <= 4.0)
            .count();
        let mc = hits as f64 / trials as f64;
        assert!((chi2_cdf(4, 4.0).unwrap() - mc).abs() < 2e-3);
    }

    #[test]
    fn tail_bound_properties() {
        for n in 1..=8 {
            assert_eq!(chi2_tail_lower_bound(n, 0.0), 1.0);
            for i in 0..200 {
                let x = 0.05 * i as f64;
                let tail = chi2_sf(n, x).unwrap();
                assert!(chi2_tail_lower_bound(n, x) <= tail + 1e-12, "n={n} x={x}");
            }
        }
        let mut prev = 1.0;
        for i in 1..200 {
            let v = chi2_tail_lower_bound(1, i as f64 * 0.5);
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < -4.0);
    }

    #[test]
    fn calibration_point_of_lower_bound() {
        let r = success_lower_bound(&TheoryParams::normalized(2, 2, 8.0).unwrap());
        assert!((r - 0.90).abs() < 0.01, "{r}");
    }

    #[test]
    fn lower_bound_limits_and_scaling() {
        let tiny = TheoryParams::new(3, 2, 1e-9, 1.0).unwrap();
        assert!((success_lower_bound(&tiny) - 1.0).abs() < 1e-12);
        let p = TheoryParams::new(5, 3, 0.7, 1.9).unwrap();
        let q = TheoryParams::new(5, 3, 0.7 * 3.7, 1.9 * 3.7).unwrap();
        assert!((success_lower_bound(&p) - success_lower_bound(&q)).abs() < 1e-14);
    }

    #[test]
    fn exact_tail_examples() {
        let wide = TheoryParams::new(4, 2, 1.0, 1e9).unwrap();
        assert!((exact_success_tail(&wide) - 1.0).abs() < 1e-12);
        let half = TheoryParams::new(3, 2, (2.0 * 2f64.ln()).sqrt(), 1.0).unwrap();
        assert!((exact_success_tail(&half) - 0.5).abs() < 1e-13);
    }

    #[test]
    fn bound_chain_on_grid() {
        for n in 1..=6usize {
            for i in 0..50 {
                let ratio = 10f64.powf(-2.0 + 3.0 * i as f64 / 49.0);
                let p = TheoryParams::new(n + 1, 2, ratio, 1.0).unwrap();
                let r = success_lower_bound(&p);
                let t = exact_success_tail(&p);
                assert!(r <= t + 1e-12 && t <= 1.0, "n={n} ratio={ratio}");
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(TheoryParams::new(1, 2, 1.0, 1.0).is_err());
        assert!(TheoryParams::new(3, 2, 1.0, 0.0).is_err());
        assert!(TheoryParams::new(3, 2, -1.0, 1.0).is_err());
        let p = TheoryParams::new(5, 3, 2.0, 3.0).unwrap();
        assert_eq!(p.dof(), 3);
        assert!((p.delta_bar() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expected_sq_norm_y2(4, 2, 1.0).unwrap(), 1.0);
        assert!((expected_sq_norm_y2(7, 1, 2.0).unwrap() - 0.8).abs() < 1e-15);
        assert!(matches!(
            expected_sq_norm_y2(3, 2, 1.0),
            Err(TheoryError::Undefined(_))
        ));
    }

    #[test]
    fn expectation_matches_sampling() {
        let (de, d) = (2, 7);
        let mut rng = RngStream::new(12, 0);
        let z = [1.0, 0.0];
        let samples = 100_000;
        let mut sum = 0.0;
        for _ in 0..samples {
            let b = sample_gaussian(de, d, &mut rng);
            let y = min_two_norm_solution(&b, &z).unwrap();
            sum += y.iter().map(|v| v * v).sum::<f64>();
        }
        let mean = sum / samples as f64;
        assert!((mean - 0.25).abs() <= 0.025, "{mean}");
    }

    #[test]
    fn pdf_is_radially_symmetric() {
        let a = pdf_y2(&[0.6, 0.8, 0.0], 2, 1.3).unwrap();
        let b = pdf_y2(&[0.0, 0.0, 1.0], 2, 1.3).unwrap();
        assert!((a - b).abs() <= 1e-14 * a.max(1.0));
        assert!(pdf_y2(&[0.0, 0.0], 2, 1.0).is_err());
        assert!(pdf_y2(&[1.0, 0.0], 2, 0.0).is_err());
    }

    #[test]
    fn pdf_integrates_to_one() {
        // d = de = 2, ‖x⊤*‖ = √2; integrate in polar coordinates with r = 1/u
        // to map the heavy tail onto a finite interval.
        let s = 2f64.sqrt();
        let integrand = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let r = 1.0 / u;
            2.0 * PI * r * pdf_y2(&[r, 0.0], 2, s).unwrap() / (u * u)
        };
        let total = simpson(integrand, 0.0, 200.0, 200_000);
        assert!((total - 1.0).abs() < 1e-3, "{total}");
    }

    #[test]
    fn pdf_vanishes_near_origin() {
        let v = pdf_y2(&[1e-3, 0.0], 2, 2f64.sqrt()).unwrap();
        assert!(v < 1e-100);
    }

    #[test]
    fn radial_pdf_consistent_with_density_and_cdf() {
        let (d, de, s) = (5, 3, 1.7);
        let area =
            |r: f64| 2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d as u32) * r.powi(d as i32 - 1);
        for &r in &[0.2, 0.7, 1.5, 4.0] {
            let mut y = vec![0.0; d];
            y[0] = r;
            let from_density = pdf_y2(&y, de, s).unwrap() * area(r);
            assert!((from_density - radial_pdf(r, d, de, s)).abs() < 1e-12);
        }
        let integral = simpson(|r| radial_pdf(r, d, de, s), 0.0, 2.0, 20_000);
        assert!((integral - radial_cdf(2.0, d, de, s)).abs() < 1e-9);
    }

    #[test]
    fn earlier_bounds() {
        assert!((wang_bound(2, 1.0, 8.0) - (1.0 - 2f64.sqrt() / 8.0)).abs() < 1e-15);
        assert_eq!(sanyang_kaban_bound(2, 2, 1.0, 8.0), None);
        assert_eq!(sanyang_kaban_bound(5, 2, 1.0, 0.1), None);
        let v = sanyang_kaban_bound(9, 1, 1.0, 10.0).unwrap();
        assert!((v - (1.0 - (-0.5f64 * 1.9 * 1.9).exp())).abs() < 1e-14);
    }
}
