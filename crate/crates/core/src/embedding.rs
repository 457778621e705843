//! The reduced problem `min f(A y + p)` over `y ∈ [-δ, δ]^d`.

use thiserror::Error;

use crate::feasibility::{box_feasible, FeasibilityError};
use crate::linalg::{min_two_norm_solution, norm_inf, sample_gaussian, LinalgError, Matrix};
use crate::problems::GeneratedProblem;
use crate::rng::RngStream;

/// Tolerance on box membership of a reported point.
pub const BOX_TOLERANCE: f64 = 1e-12;

/// Default success tolerance on the objective value.
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("invalid embedding: {0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error("embedded minimizer has value {value}, expected {f_star}")]
    Verification { value: f64, f_star: f64 },
}

/// A `D x d` embedding matrix, the reduced box half-width, and an optional
/// affine offset `p`.
#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    a: Matrix,
    delta: f64,
    offset: Option<Vec<f64>>,
}

impl EmbeddingSpec {
    pub fn new(a: Matrix, delta: f64, offset: Option<Vec<f64>>) -> Result<Self, EmbeddingError> {
        if a.cols() == 0 || a.rows() == 0 {
            return Err(EmbeddingError::Invalid("embedding matrix is empty".into()));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(EmbeddingError::Invalid(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if let Some(p) = &offset {
            if p.len() != a.rows() {
                return Err(EmbeddingError::DimensionMismatch {
                    expected: format!("offset of length {}", a.rows()),
                    found: format!("length {}", p.len()),
                });
            }
        }
        Ok(Self { a, delta, offset })
    }

    /// Samples a fresh `D x d` Gaussian matrix.
    pub fn gaussian(
        ambient_dim: usize,
        d: usize,
        delta: f64,
        rng: &mut RngStream,
    ) -> Result<Self, EmbeddingError> {
        if d == 0 || ambient_dim == 0 {
            return Err(EmbeddingError::Invalid(
                "dimensions must be positive".into(),
            ));
        }
        Self::new(sample_gaussian(ambient_dim, d, rng), delta, None)
    }

    pub fn with_offset(mut self, p: Vec<f64>) -> Result<Self, EmbeddingError> {
        self.offset = Some(p);
        Self::new(self.a, self.delta, self.offset)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.rows()
    }

    /// Embedding dimension `d`.
    pub fn d(&self) -> usize {
        self.a.cols()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn offset(&self) -> Option<&[f64]> {
        self.offset.as_deref()
    }

    pub fn lower(&self) -> Vec<f64> {
        vec![-self.delta; self.d()]
    }

    pub fn upper(&self) -> Vec<f64> {
        vec![self.delta; self.d()]
    }

    /// `A y + p`.
    pub fn map(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.a.mul_vec(y);
        if let Some(p) = &self.offset {
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi += pi;
            }
        }
        x
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        y.len() == self.d() && norm_inf(y) <= self.delta + BOX_TOLERANCE
    }

    /// `B = Uᵀ A`, the effective part of the embedding.
    pub fn effective_matrix(&self, problem: &GeneratedProblem) -> Matrix {
        problem.effective_basis().transpose().matmul(&self.a)
    }

    /// Effective coordinates of `p` (zero without an offset).
    fn offset_coordinates(&self, problem: &GeneratedProblem) -> Vec<f64> {
        match &self.offset {
            Some(p) => problem.project_effective(p),
            None => vec![0.0; problem.effective_dim()],
        }
    }
}

/// `y ↦ f(A y + p)` with an evaluation counter.
#[derive(Debug)]
pub struct ReducedObjective<'a> {
    problem: &'a GeneratedProblem,
    spec: &'a EmbeddingSpec,
    evals: u64,
}

pub fn make_reduced<'a>(
    problem: &'a GeneratedProblem,
    spec: &'a EmbeddingSpec,
) -> Result<ReducedObjective<'a>, EmbeddingError> {
    if spec.ambient_dim() != problem.ambient_dim() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: format!("{} rows", problem.ambient_dim()),
            found: format!("{} rows", spec.ambient_dim()),
        });
    }
    Ok(ReducedObjective {
        problem,
        spec,
        evals: 0,
    })
}

impl<'a> ReducedObjective<'a> {
    pub fn evaluate(&mut self, y: &[f64]) -> f64 {
        self.evals += 1;
        self.problem.evaluate(&self.spec.map(y))
    }

    pub fn eval_count(&self) -> u64 {
        self.evals
    }

    pub fn problem(&self) -> &'a GeneratedProblem {
        self.problem
    }

    pub fn spec(&self) -> &'a EmbeddingSpec {
        self.spec
    }

    pub fn is_successful(&self, y: &[f64], value: f64, epsilon: f64) -> bool {
        is_successful(self.problem.f_star(), self.spec.delta(), y, value, epsilon)
    }
}

/// `value <= f_star + epsilon` and `y` lies in `[-δ, δ]^d`.
pub fn is_successful(f_star: f64, delta: f64, y: &[f64], value: f64, epsilon: f64) -> bool {
    value <= f_star + epsilon && norm_inf(y) <= delta + BOX_TOLERANCE
}

/// Minimum Euclidean norm `y` with `A y + p` a global minimizer, i.e. the
/// minimum-norm solution of `B y = z* - Uᵀp`.
pub fn reduced_min_two_norm(
    problem: &GeneratedProblem,
    spec: &EmbeddingSpec,
) -> Result<Vec<f64>, EmbeddingError> {
    let d = spec.d();
    let Some(z_star) = problem.z_star() else {
        return Err(EmbeddingError::Invalid(format!(
            "problem `{}` has no known minimizer",
            problem.name()
        )));
    };
    let z = target(z_star, &spec.offset_coordinates(problem));
    if z.iter().all(|v| *v == 0.0) {
        return Ok(vec![0.0; d]);
    }
    let b = spec.effective_matrix(problem);
    let y = min_two_norm_solution(&b, &z)?;
    let value = problem.evaluate(&spec.map(&y));
    if (value - problem.f_star()).abs() > 1e-6 {
        return Err(EmbeddingError::Verification {
            value,
            f_star: problem.f_star(),
        });
    }
    Ok(y)
}

fn target(z: &[f64], shift: &[f64]) -> Vec<f64> {
    z.iter().zip(shift).map(|(a, b)| a - b).collect()
}

/// Solver-independent success: whether some known global minimizer is
/// reachable by a `y` in the box. Decided exactly by the LP oracle.
pub fn geometric_success(
    problem: &GeneratedProblem,
    spec: &EmbeddingSpec,
) -> Result<bool, EmbeddingError> {
    if problem.ambient_dim() != spec.ambient_dim() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: format!("{} rows", problem.ambient_dim()),
            found: format!("{} rows", spec.ambient_dim()),
        });
    }
    let b = spec.effective_matrix(problem);
    let shift = spec.offset_coordinates(problem);
    for z in problem.minimizer_coordinates() {
        if box_feasible(&b, &target(z, &shift), spec.delta())? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, null_space_basis};
    use crate::problems::{find, generate};

    fn lifted(name: &str, ambient: usize, seed: u64) -> GeneratedProblem {
        let base = find(name).unwrap().scale_to_unit_box();
        generate(&base, ambient, &mut RngStream::new(seed, 0)).unwrap()
    }

    #[test]
    fn center_maps_to_origin() {
        let p = lifted("branin", 10, 1);
        let spec = EmbeddingSpec::gaussian(10, 3, 2.0, &mut RngStream::new(2, 0)).unwrap();
        let mut obj = make_reduced(&p, &spec).unwrap();
        assert_eq!(obj.evaluate(&[0.0; 3]), p.evaluate(&[0.0; 10]));
    }

    #[test]
    fn identity_embedding_restricts_f() {
        let p = lifted("hartmann3", 4, 3);
        let spec = EmbeddingSpec::new(Matrix::identity(4), 1.0, None).unwrap();
        let mut obj = make_reduced(&p, &spec).unwrap();
        let y = [0.1, -0.4, 0.3, 0.9];
        assert_eq!(obj.evaluate(&y), p.evaluate(&y));
    }

    #[test]
    fn counts_evaluations() {
        let p = lifted("beale", 5, 4);
        let spec = EmbeddingSpec::gaussian(5, 2, 1.0, &mut RngStream::new(5, 0)).unwrap();
        let mut obj = make_reduced(&p, &spec).unwrap();
        for _ in 0..7 {
            obj.evaluate(&[0.1, 0.2]);
        }
        assert_eq!(obj.eval_count(), 7);
    }

    #[test]
    fn dimension_checks() {
        let p = lifted("beale", 5, 4);
        let spec = EmbeddingSpec::gaussian(6, 2, 1.0, &mut RngStream::new(5, 0)).unwrap();
        assert!(make_reduced(&p, &spec).is_err());
        assert!(EmbeddingSpec::new(Matrix::identity(2), 0.0, None).is_err());
        assert!(EmbeddingSpec::new(Matrix::identity(2), 1.0, Some(vec![1.0])).is_err());
    }

    #[test]
    fn success_predicate() {
        assert!(is_successful(1.0, 1.0, &[0.5], 1.0, 1e-3));
        assert!(!is_successful(1.0, 1.0, &[0.5], 1.0 + 2e-3, 1e-3));
        assert!(!is_successful(1.0, 1.0, &[1.1], 1.0, 1e-3));
        assert!(is_successful(1.0, 1.0 + 1e-13, &[1.0 + 1e-13], 1.0, 1e-3));
        // larger boxes keep the verdict
        assert!(is_successful(1.0, 2.0, &[0.5], 1.0, 1e-3));
    }

    #[test]
    fn min_norm_point_hits_minimum() {
        let p = lifted("six-hump-camel", 12, 6);
        let mut rng = RngStream::new(7, 0);
        for d in 2..=4 {
            let spec = EmbeddingSpec::gaussian(12, d, 5.0, &mut rng).unwrap();
            let y = reduced_min_two_norm(&p, &spec).unwrap();
            assert!((p.evaluate(&spec.map(&y)) - p.f_star()).abs() < 1e-6);
            // directions in null(B) leave the value unchanged
            let b = spec.effective_matrix(&p);
            if d > 2 {
                let n = null_space_basis(&b).unwrap();
                for k in 0..n.cols() {
                    let w = n.column(k);
                    let moved: Vec<f64> = y.iter().zip(&w).map(|(a, b)| a + 0.7 * b).collect();
                    assert!((p.evaluate(&spec.map(&moved)) - p.f_star()).abs() < 1e-6);
                    assert!(dot(&y, &w).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn zero_target_gives_zero() {
        // Goldstein-Price scaled to [-1,1]^2 has its minimizer at (0, -1/2);
        // an offset equal to that minimizer makes the target vanish.
        let p = lifted("goldstein-price", 6, 8);
        let x_min = p.lift(p.z_star().unwrap());
        let spec = EmbeddingSpec::gaussian(6, 3, 1.0, &mut RngStream::new(9, 0))
            .unwrap()
            .with_offset(x_min)
            .unwrap();
        assert!(norm_inf(&reduced_min_two_norm(&p, &spec).unwrap()) < 1e-12);
        assert!(geometric_success(&p, &spec).unwrap());
    }

    #[test]
    fn geometric_success_follows_delta() {
        let p = lifted("branin", 10, 10);
        let mut rng = RngStream::new(11, 0);
        let a = sample_gaussian(10, 2, &mut rng);
        let tiny = EmbeddingSpec::new(a.clone(), 1e-6, None).unwrap();
        let huge = EmbeddingSpec::new(a, 1e6, None).unwrap();
        assert!(!geometric_success(&p, &tiny).unwrap());
        assert!(geometric_success(&p, &huge).unwrap());
    }
}
