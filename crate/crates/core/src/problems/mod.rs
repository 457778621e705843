//! Test problems with low effective dimensionality.
//!
//! A [`BaseProblem`] is one of the classic low-dimensional global optimization
//! benchmarks. [`generate`] lifts it to `D` dimensions by padding with
//! `D - de` dummy coordinates and rotating with a random orthogonal `Q`:
//! `f(x) = g((Q x)[..de])`. The first `de` rows of `Q` span the effective
//! subspace; the remaining rows span the subspace along which `f` is constant.

mod catalogue;
mod functions;

use thiserror::Error;

pub use catalogue::{all as catalogue, find};
pub use functions::BaseFunction;

use crate::linalg::{norm2, sample_orthogonal, Matrix};
use crate::rng::RngStream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("point has {found} coordinates, problem has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {ambient} is smaller than the effective dimension {effective}")]
    AmbientTooSmall { ambient: usize, effective: usize },
    #[error("problem `{0}` must be scaled to the unit box before lifting")]
    NotUnitBox(String),
}

/// Affine map `original = center + half_width * u` from `[-1, 1]^de`.
#[derive(Clone, Debug, PartialEq)]
struct UnitBoxMap {
    center: Vec<f64>,
    half_width: Vec<f64>,
}

impl UnitBoxMap {
    fn apply(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.center.iter().zip(&self.half_width))
            .map(|(&v, (&c, &h))| c + h * v)
            .collect()
    }
}

/// A low-dimensional test function with known domain and global minimum.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseProblem {
    id: &'static str,
    display_name: &'static str,
    function: BaseFunction,
    lower: Vec<f64>,
    upper: Vec<f64>,
    f_star: f64,
    reported_f_star: &'static str,
    known_minimizers: Vec<Vec<f64>>,
    baron_excluded: bool,
    knitro_excluded: bool,
    map: Option<UnitBoxMap>,
}

impl BaseProblem {
    /// Short identifier used on the command line.
    pub fn id(&self) -> &'static str {
        self.id
    }

    pub fn display_name(&self) -> &'static str {
        self.display_name
    }

    pub fn function(&self) -> BaseFunction {
        self.function
    }

    /// Effective dimension `de`.
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    /// The global minimum as commonly tabulated (rounded).
    pub fn reported_f_star(&self) -> &'static str {
        self.reported_f_star
    }

    /// Global minimizers in the current coordinates.
    pub fn known_minimizers(&self) -> &[Vec<f64>] {
        &self.known_minimizers
    }

    /// Cannot be handled by algebraic branch-and-reduce solvers (trigonometric terms).
    pub fn baron_excluded(&self) -> bool {
        self.baron_excluded
    }

    /// Known to defeat gradient-based multi-start local solvers.
    pub fn knitro_excluded(&self) -> bool {
        self.knitro_excluded
    }

    pub fn is_unit_box(&self) -> bool {
        self.lower.iter().all(|&l| l == -1.0) && self.upper.iter().all(|&u| u == 1.0)
    }

    /// Evaluates the function at `x` in the current coordinates.
    ///
    /// Points outside the domain are allowed: every formula is globally
    /// defined, and embedded points routinely leave the box.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        match &self.map {
            Some(map) => self.function.evaluate(&map.apply(x)),
            None => self.function.evaluate(x),
        }
    }

    /// Checked variant of [`BaseProblem::evaluate`].
    pub fn try_evaluate(&self, x: &[f64]) -> Result<f64, ProblemError> {
        if x.len() != self.dim() {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.evaluate(x))
    }

    /// Reparametrizes the problem over `[-1, 1]^de`.
    ///
    /// The returned problem evaluates the original function through the
    /// affine map taking the unit box onto the original domain; minimizers
    /// are mapped back accordingly and `f_star` is unchanged.
    pub fn scale_to_unit_box(&self) -> BaseProblem {
        let center: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect();
        let half: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (u - l))
            .collect();
        let to_unit = |x: &Vec<f64>| -> Vec<f64> {
            x.iter()
                .zip(center.iter().zip(&half))
                .map(|(&v, (&c, &h))| (v - c) / h)
                .collect()
        };
        let known_minimizers = self.known_minimizers.iter().map(to_unit).collect();
        let map = match &self.map {
            None => UnitBoxMap {
                center: center.clone(),
                half_width: half.clone(),
            },
            Some(prev) => UnitBoxMap {
                center: prev.apply(&center),
                half_width: prev
                    .half_width
                    .iter()
                    .zip(&half)
                    .map(|(a, b)| a * b)
                    .collect(),
            },
        };
        BaseProblem {
            lower: vec![-1.0; self.dim()],
            upper: vec![1.0; self.dim()],
            known_minimizers,
            map: Some(map),
            ..self.clone()
        }
    }
}

/// Evaluates a catalogue problem, in original coordinates, by name.
pub fn evaluate_named(name: &str, x: &[f64]) -> Result<f64, ProblemError> {
    find(name)
        .ok_or_else(|| ProblemError::UnknownProblem(name.to_string()))?
        .try_evaluate(x)
}

/// A `D`-dimensional function `f(x) = g((Q x)[..de])` with known minimizers.
#[derive(Clone, Debug)]
pub struct GeneratedProblem {
    base: BaseProblem,
    ambient_dim: usize,
    rotation: Matrix,
    /// First `de` rows of the rotation, i.e. `Uᵀ`.
    effective_rows: Matrix,
    mu: f64,
    mu_is_bound: bool,
    z_star: Option<Vec<f64>>,
    x_top_star: Option<Vec<f64>>,
}

/// Lifts a unit-box base problem to ambient dimension `ambient_dim`.
pub fn generate(
    base: &BaseProblem,
    ambient_dim: usize,
    rng: &mut RngStream,
) -> Result<GeneratedProblem, ProblemError> {
    let de = base.dim();
    if ambient_dim < de {
        return Err(ProblemError::AmbientTooSmall {
            ambient: ambient_dim,
            effective: de,
        });
    }
    if !base.is_unit_box() {
        return Err(ProblemError::NotUnitBox(base.id().to_string()));
    }
    let rotation = sample_orthogonal(ambient_dim, rng);
    Ok(GeneratedProblem::with_rotation(base.clone(), rotation))
}

impl GeneratedProblem {
    /// Builds the lifted problem for a given orthogonal `rotation`.
    pub fn with_rotation(base: BaseProblem, rotation: Matrix) -> Self {
        let de = base.dim();
        let ambient_dim = rotation.rows();
        assert_eq!(rotation.cols(), ambient_dim, "rotation must be square");
        assert!(ambient_dim >= de);
        let effective_rows = rotation.top_rows(de);
        // Effective-component norms are rotation independent: the minimizer
        // set is {Uᵀx = x̄*}, and the point of least norm in it is U x̄*.
        let best = base
            .known_minimizers()
            .iter()
            .min_by(|a, b| norm2(a).total_cmp(&norm2(b)))
            .cloned();
        let (mu, mu_is_bound, z_star) = match best {
            Some(z) => (norm2(&z), false, Some(z)),
            None => ((de as f64).sqrt(), true, None),
        };
        let x_top_star = z_star.as_ref().map(|z| effective_rows.tr_mul_vec(z));
        Self {
            base,
            ambient_dim,
            rotation,
            effective_rows,
            mu,
            mu_is_bound,
            z_star,
            x_top_star,
        }
    }

    pub fn base(&self) -> &BaseProblem {
        &self.base
    }

    pub fn name(&self) -> &'static str {
        self.base.id()
    }

    /// Ambient dimension `D`.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Effective dimension `de`.
    pub fn effective_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn f_star(&self) -> f64 {
        self.base.f_star()
    }

    pub fn rotation(&self) -> &Matrix {
        &self.rotation
    }

    /// Distance from the origin to the set of global minimizers.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// True when `mu` is only the upper bound `sqrt(de)` (minimizers unknown).
    pub fn mu_is_bound(&self) -> bool {
        self.mu_is_bound
    }

    /// Effective component of the minimizer closest to the origin.
    pub fn x_top_star(&self) -> Option<&[f64]> {
        self.x_top_star.as_deref()
    }

    /// Coordinates of [`GeneratedProblem::x_top_star`] in the effective basis.
    pub fn z_star(&self) -> Option<&[f64]> {
        self.z_star.as_deref()
    }

    /// Effective-basis coordinates of every known global minimizer.
    pub fn minimizer_coordinates(&self) -> &[Vec<f64>] {
        self.base.known_minimizers()
    }

    /// `Uᵀ x`: coordinates of `x` in the effective basis.
    pub fn project_effective(&self, x: &[f64]) -> Vec<f64> {
        // Compensated, like `lift`, so a lifted minimizer projects back onto
        // itself; at Bukin N.6's minimizer one ulp already costs 1e-6 in f.
        self.effective_rows.mul_vec_compensated(x)
    }

    /// Orthonormal basis `U` (`D x de`) of the effective subspace.
    pub fn effective_basis(&self) -> Matrix {
        self.effective_rows.transpose()
    }

    /// Orthonormal basis `V` (`D x (D - de)`) of the constant subspace.
    pub fn constant_basis(&self) -> Matrix {
        let de = self.effective_dim();
        let mut v = Matrix::zeros(self.ambient_dim, self.ambient_dim - de);
        for k in de..self.ambient_dim {
            for i in 0..self.ambient_dim {
                v[(i, k - de)] = self.rotation[(k, i)];
            }
        }
        v
    }

    /// `U z`: the point of the effective subspace with coordinates `z`.
    ///
    /// The rows of a sampled rotation are orthonormal only to rounding, so
    /// `Uᵀ U z` can miss `z` by a few ulps; two refinement steps remove that.
    pub fn lift(&self, z: &[f64]) -> Vec<f64> {
        let rows = &self.effective_rows;
        let mut x = rows.tr_mul_vec_compensated(z);
        for _ in 0..2 {
            let back = self.project_effective(&x);
            let r: Vec<f64> = z.iter().zip(&back).map(|(a, b)| a - b).collect();
            for (xi, c) in x.iter_mut().zip(rows.tr_mul_vec_compensated(&r)) {
                *xi += c;
            }
        }
        x
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.ambient_dim);
        self.base.evaluate(&self.project_effective(x))
    }
}
