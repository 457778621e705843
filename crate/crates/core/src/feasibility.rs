//! Minimum infinity-norm solutions of underdetermined systems.
//!
//! Solves `min t  s.t.  B y = z, -t <= y_i <= t` with a dense two-phase
//! simplex method and Bland's rule. Variables are shifted to `u = y + t·1 >= 0`
//! so that the upper constraints become `u_i - 2t + s_i = 0` with slacks
//! `s_i >= 0`, and the equalities become `B u - (B·1) t = z`.

use thiserror::Error;

use crate::linalg::{norm_inf, Matrix};

/// Pivot elements smaller than this are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-11;

/// Slack added to `delta` by [`box_feasible`].
pub const FEASIBILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeasibilityError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("simplex failed: {0}")]
    NumericalFailure(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// Optimal, but an equality row was found redundant (`B` rank deficient).
    DegenerateWarning,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub y: Vec<f64>,
    pub t: f64,
    pub status: LpStatus,
}

struct Tableau {
    // m rows of (cols + 1) entries, right-hand side last
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.rows)
            .map(|(&b, row)| cost[b] * row[self.cols])
            .sum()
    }

    /// Minimizes `cost · x` over columns `0..active`, starting from the
    /// current basic feasible solution.
    fn minimize(&mut self, cost: &[f64], active: usize) -> Result<(), FeasibilityError> {
        let max_iter = 50 * (self.rows.len() + self.cols) + 1000;
        for _ in 0..max_iter {
            let entering = (0..active).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                reduced < -PIVOT_TOLERANCE
            });
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOLERANCE {
                    let ratio = row[self.cols] / row[c];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - 1e-14
                                || (ratio <= best + 1e-14 && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(FeasibilityError::NumericalFailure(
                    "unbounded direction".into(),
                ));
            };
            self.pivot(r, c);
        }
        Err(FeasibilityError::NumericalFailure(
            "iteration limit reached".into(),
        ))
    }
}

/// Minimum infinity-norm solution of `B y = z`.
pub fn min_inf_norm_solution(b: &Matrix, z: &[f64]) -> Result<LpResult, FeasibilityError> {
    let (m, d) = (b.rows(), b.cols());
    if z.len() != m {
        return Err(FeasibilityError::DimensionMismatch {
            expected: format!("rhs of length {m}"),
            found: format!("length {}", z.len()),
        });
    }
    if m > d || m == 0 {
        return Err(FeasibilityError::DimensionMismatch {
            expected: "1 <= rows <= cols".into(),
            found: format!("{m}x{d}"),
        });
    }
    // columns: u (d), t, s (d), artificials (m)
    let t_col = d;
    let n_real = 2 * d + 1;
    let cols = n_real + m;
    let mut rows = Vec::with_capacity(m + d);
    let mut basis = Vec::with_capacity(m + d);
    for i in 0..m {
        let sign = if z[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; cols + 1];
        let mut row_sum = 0.0;
        for j in 0..d {
            row[j] = sign * b[(i, j)];
            row_sum += b[(i, j)];
        }
        row[t_col] = -sign * row_sum;
        row[n_real + i] = 1.0;
        row[cols] = sign * z[i];
        rows.push(row);
        basis.push(n_real + i);
    }
    for i in 0..d {
        let mut row = vec![0.0; cols + 1];
        row[i] = 1.0;
        row[t_col] = -2.0;
        row[t_col + 1 + i] = 1.0;
        rows.push(row);
        basis.push(t_col + 1 + i);
    }
    let mut tab = Tableau { rows, basis, cols };

    let mut phase1 = vec![0.0; cols];
    for c in phase1.iter_mut().skip(n_real) {
        *c = 1.0;
    }
    tab.minimize(&phase1, cols)?;
    let z_scale = 1.0 + norm_inf(z);
    if tab.objective(&phase1) > 1e-9 * z_scale {
        return Ok(LpResult {
            y: vec![0.0; d],
            t: f64::INFINITY,
            status: LpStatus::Infeasible,
        });
    }

    // drive zero-level artificials out of the basis; rows where that is
    // impossible are redundant and are dropped
    let mut redundant = false;
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n_real {
            let col = (0..n_real)
                .filter(|j| !tab.basis.contains(j))
                .max_by(|&a, &b| tab.rows[r][a].abs().total_cmp(&tab.rows[r][b].abs()))
                .filter(|&j| tab.rows[r][j].abs() > PIVOT_TOLERANCE);
            match col {
                Some(c) => tab.pivot(r, c),
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    redundant = true;
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase2 = vec![0.0; cols];
    phase2[t_col] = 1.0;
    tab.minimize(&phase2, n_real)?;

    let mut u = vec![0.0; n_real];
    for (&bcol, row) in tab.basis.iter().zip(&tab.rows) {
        u[bcol] = row[cols];
    }
    let t = u[t_col];
    let y: Vec<f64> = u[..d].iter().map(|ui| ui - t).collect();
    let residual = (0..m)
        .map(|i| (0..d).map(|j| b[(i, j)] * y[j]).sum::<f64>() - z[i])
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if residual > 1e-8 * z_scale {
        return Err(FeasibilityError::NumericalFailure(format!(
            "residual {residual:e}"
        )));
    }
    let achieved = norm_inf(&y);
    if (achieved - t).abs() > 1e-9 * z_scale {
        return Err(FeasibilityError::NumericalFailure(format!(
            "bound mismatch: t = {t}, ‖y‖∞ = {achieved}"
        )));
    }
    let status = if redundant {
        LpStatus::DegenerateWarning
    } else {
        LpStatus::Optimal
    };
    Ok(LpResult {
        y,
        t: achieved,
        status,
    })
}

/// Whether some `y` with `‖y‖∞ <= delta` solves `B y = z`.
pub fn box_feasible(b: &Matrix, z: &[f64], delta: f64) -> Result<bool, FeasibilityError> {
    let res = min_inf_norm_solution(b, z)?;
    Ok(res.status != LpStatus::Infeasible && res.t <= delta + FEASIBILITY_SLACK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{min_two_norm_solution, sample_gaussian, solve_square};
    use crate::rng::RngStream;

    #[test]
    fn one_row_example() {
        let b = Matrix::from_rows(&[&[1.0, 2.0]]);
        let r = min_inf_norm_solution(&b, &[3.0]).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.t - 1.0).abs() < 1e-12);
        assert!((r.y[0] - 1.0).abs() < 1e-12 && (r.y[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_example() {
        let b = Matrix::identity(2);
        let r = min_inf_norm_solution(&b, &[1.0, -2.0]).unwrap();
        assert!((r.t - 2.0).abs() < 1e-12);
        assert!((r.y[0] - 1.0).abs() < 1e-12 && (r.y[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_rhs() {
        let mut rng = RngStream::new(1, 0);
        let b = sample_gaussian(2, 5, &mut rng);
        let r = min_inf_norm_solution(&b, &[0.0, 0.0]).unwrap();
        assert!(r.t.abs() < 1e-15);
    }

    #[test]
    fn never_worse_than_min_two_norm() {
        let mut rng = RngStream::new(2, 0);
        for _ in 0..200 {
            let b = sample_gaussian(2, 4, &mut rng);
            let z = [rng.standard_normal(), rng.standard_normal()];
            let lp = min_inf_norm_solution(&b, &z).unwrap();
            let y2 = min_two_norm_solution(&b, &z).unwrap();
            assert!(lp.t <= norm_inf(&y2) + 1e-9);
            let res = b.mul_vec(&lp.y);
            for (ri, zi) in res.iter().zip(&z) {
                assert!((ri - zi).abs() <= 1e-8 * (1.0 + norm_inf(&z)));
            }
        }
    }

    #[test]
    fn square_case_matches_direct_solve() {
        let mut rng = RngStream::new(3, 0);
        for de in 1..=4 {
            let b = sample_gaussian(de, de, &mut rng);
            let z: Vec<f64> = (0..de).map(|_| rng.standard_normal()).collect();
            let lp = min_inf_norm_solution(&b, &z).unwrap();
            let exact = solve_square(&b, &z).unwrap();
            for (a, e) in lp.y.iter().zip(&exact) {
                assert!((a - e).abs() < 1e-8);
            }
            assert!((lp.t - norm_inf(&exact)).abs() < 1e-8);
        }
    }

    #[test]
    fn homogeneous_in_rhs() {
        let mut rng = RngStream::new(4, 0);
        let b = sample_gaussian(2, 5, &mut rng);
        let z = [0.3, -1.1];
        let base = min_inf_norm_solution(&b, &z).unwrap().t;
        for c in [-3.0, 0.5, 7.0] {
            let scaled: Vec<f64> = z.iter().map(|v| c * v).collect();
            let t = min_inf_norm_solution(&b, &scaled).unwrap().t;
            assert!((t - c.abs() * base).abs() < 1e-9 * (1.0 + t));
        }
    }

    #[test]
    fn extra_column_never_hurts() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..100 {
            let wide = sample_gaussian(2, 5, &mut rng);
            let narrow = wide.column_range(0, 4);
            let z = [rng.standard_normal(), rng.standard_normal()];
            let t_wide = min_inf_norm_solution(&wide, &z).unwrap().t;
            let t_narrow = min_inf_norm_solution(&narrow, &z).unwrap().t;
            assert!(t_wide <= t_narrow + 1e-9);
        }
    }

    #[test]
    fn box_feasibility_threshold() {
        let b = Matrix::from_rows(&[&[1.0, 2.0]]);
        assert!(box_feasible(&b, &[3.0], 1.0).unwrap());
        assert!(box_feasible(&b, &[3.0], 1.5).unwrap());
        assert!(!box_feasible(&b, &[3.0], 1.0 - 1e-3).unwrap());
    }

    #[test]
    fn rank_deficient_consistent_and_inconsistent() {
        let b = Matrix::from_rows(&[&[1.0, 1.0, 0.0], &[2.0, 2.0, 0.0]]);
        let ok = min_inf_norm_solution(&b, &[1.0, 2.0]).unwrap();
        assert_eq!(ok.status, LpStatus::DegenerateWarning);
        assert!((ok.t - 0.5).abs() < 1e-12);
        let bad = min_inf_norm_solution(&b, &[1.0, 3.0]).unwrap();
        assert_eq!(bad.status, LpStatus::Infeasible);
        assert!(!box_feasible(&b, &[1.0, 3.0], 100.0).unwrap());
    }

    #[test]
    fn dimension_errors() {
        let b = Matrix::identity(2);
        assert!(min_inf_norm_solution(&b, &[1.0]).is_err());
        let tall = Matrix::from_rows(&[&[1.0], &[2.0]]);
        assert!(min_inf_norm_solution(&tall, &[1.0, 2.0]).is_err());
    }
}
