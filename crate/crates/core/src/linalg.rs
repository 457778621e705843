//! Small dense linear algebra: the matrix type, Householder QR, random
//! Gaussian and orthogonal sampling, and minimum-norm solves.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::rng::RngStream;

/// Relative pivot threshold below which a factorization is declared rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is rank deficient: effective rank {rank} < {required}")]
    RankDeficient { rank: usize, required: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// The first `count` rows as a new matrix.
    pub fn top_rows(&self, count: usize) -> Matrix {
        assert!(count <= self.rows);
        Matrix {
            rows: count,
            cols: self.cols,
            data: self.data[..count * self.cols].to_vec(),
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> Matrix {
        assert!(start <= end && end <= self.cols);
        let mut m = Matrix::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m[(i, j - start)] = self[(i, j)];
            }
        }
        m
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "mul_vec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `self * x` with [`dot_compensated`] rows.
    pub fn mul_vec_compensated(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| dot_compensated(self.row(i), x))
            .collect()
    }

    /// `selfᵀ * x` with [`dot_compensated`] columns.
    pub fn tr_mul_vec_compensated(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "tr_mul_vec dimension mismatch");
        let mut column = vec![0.0; self.rows];
        (0..self.cols)
            .map(|j| {
                for (i, c) in column.iter_mut().enumerate() {
                    *c = self.data[i * self.cols + j];
                }
                dot_compensated(&column, x)
            })
            .collect()
    }

    /// `selfᵀ * x` without forming the transpose.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "tr_mul_vec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Determinant via LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        match Lu::factor(self) {
            Ok(lu) => lu.determinant(),
            Err(_) => 0.0,
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dot product carried in twice the working precision (error-free products
/// via `mul_add`, Neumaier-style sums), rounded once at the end.
pub fn dot_compensated(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut err = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let p = x * y;
        let p_err = x.mul_add(y, -p);
        let t = sum + p;
        let z = t - sum;
        err += (sum - (t - z)) + (p - z) + p_err;
        sum = t;
    }
    sum + err
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Householder QR of an `m x n` matrix with `m >= n`.
///
/// The factor is normalized so that the diagonal of `R` is non-negative,
/// which makes the decomposition unique for full-rank input.
#[derive(Clone, Debug)]
pub struct Qr {
    m: usize,
    n: usize,
    /// Householder vectors, `v_k` has length `m - k`.
    reflectors: Vec<Vec<f64>>,
    betas: Vec<f64>,
    r: Matrix,
    signs: Vec<f64>,
}

impl Qr {
    pub fn factor(a: &Matrix) -> Self {
        let (m, n) = (a.rows(), a.cols());
        assert!(m >= n, "QR requires rows >= cols");
        let mut w = a.clone();
        let mut reflectors = Vec::with_capacity(n);
        let mut betas = Vec::with_capacity(n);
        for k in 0..n {
            let mut v: Vec<f64> = (k..m).map(|i| w[(i, k)]).collect();
            let norm_x = norm2(&v);
            if norm_x == 0.0 {
                reflectors.push(vec![0.0; m - k]);
                betas.push(0.0);
                continue;
            }
            let alpha = if v[0] >= 0.0 { -norm_x } else { norm_x };
            v[0] -= alpha;
            let vtv = dot(&v, &v);
            let beta = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };
            for j in k..n {
                let s: f64 = (k..m).map(|i| v[i - k] * w[(i, j)]).sum::<f64>() * beta;
                for i in k..m {
                    w[(i, j)] -= s * v[i - k];
                }
            }
            reflectors.push(v);
            betas.push(beta);
        }
        let mut r = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                r[(i, j)] = w[(i, j)];
            }
        }
        let signs: Vec<f64> = (0..n)
            .map(|i| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 })
            .collect();
        for (i, &s) in signs.iter().enumerate() {
            if s < 0.0 {
                for j in i..n {
                    r[(i, j)] = -r[(i, j)];
                }
            }
        }
        Self {
            m,
            n,
            reflectors,
            betas,
            r,
            signs,
        }
    }

    /// The upper-triangular factor with non-negative diagonal.
    pub fn r(&self) -> &Matrix {
        &self.r
    }

    /// Applies `H_1 ... H_n` to the columns of `x` (an `m x c` matrix).
    fn apply_q(&self, x: &mut Matrix) {
        for k in (0..self.n).rev() {
            let v = &self.reflectors[k];
            let beta = self.betas[k];
            if beta == 0.0 {
                continue;
            }
            for j in 0..x.cols() {
                let s: f64 = (k..self.m).map(|i| v[i - k] * x[(i, j)]).sum::<f64>() * beta;
                for i in k..self.m {
                    x[(i, j)] -= s * v[i - k];
                }
            }
        }
    }

    /// Full `m x m` orthogonal factor; the first `n` columns match [`Qr::q_thin`].
    pub fn q_full(&self) -> Matrix {
        let mut q = Matrix::identity(self.m);
        self.apply_q(&mut q);
        self.fix_signs(&mut q);
        q
    }

    /// Thin `m x n` factor with orthonormal columns.
    pub fn q_thin(&self) -> Matrix {
        let mut q = Matrix::zeros(self.m, self.n);
        for i in 0..self.n {
            q[(i, i)] = 1.0;
        }
        self.apply_q(&mut q);
        self.fix_signs(&mut q);
        q
    }

    fn fix_signs(&self, q: &mut Matrix) {
        for (j, &s) in self.signs.iter().enumerate() {
            if s < 0.0 {
                for i in 0..q.rows() {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
    }

    /// Number of diagonal entries of `R` above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        (0..self.n).filter(|&i| self.r[(i, i)].abs() > tol).count()
    }
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self, LinalgError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs()))
                .unwrap();
            if lu[(p, k)] == 0.0 {
                return Err(LinalgError::Singular);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / lu[(k, k)];
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.rows()).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }
}

/// Solves the square system `a x = b`.
pub fn solve_square(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("rhs of length {}", a.rows()),
            found: format!("{}", b.len()),
        });
    }
    Ok(Lu::factor(a)?.solve(b))
}

/// `rows x cols` matrix of independent standard normal entries.
pub fn sample_gaussian(rows: usize, cols: usize, rng: &mut RngStream) -> Matrix {
    assert!(
        rows >= 1 && cols >= 1,
        "Gaussian matrix needs positive dimensions"
    );
    let data = (0..rows * cols).map(|_| rng.standard_normal()).collect();
    Matrix { rows, cols, data }
}

/// Random `n x n` orthogonal matrix, Haar distributed.
///
/// Orthonormalizes a Gaussian matrix by QR with the positive-diagonal
/// convention on `R`; the uniqueness of that factorization is what makes the
/// resulting `Q` rotation invariant.
pub fn sample_orthogonal(n: usize, rng: &mut RngStream) -> Matrix {
    let g = sample_gaussian(n, n, rng);
    Qr::factor(&g).q_full()
}

fn check_system(b: &Matrix, z: &[f64]) -> Result<(), LinalgError> {
    if z.len() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("right-hand side of length {}", b.rows()),
            found: format!("{}", z.len()),
        });
    }
    if b.rows() > b.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: "rows <= cols (underdetermined system)".into(),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(())
}

fn factor_transpose(b: &Matrix) -> Result<Qr, LinalgError> {
    let qr = Qr::factor(&b.transpose());
    let tol = RANK_TOLERANCE * b.frobenius_norm();
    let rank = qr.rank(tol);
    if rank < b.rows() {
        return Err(LinalgError::RankDeficient {
            rank,
            required: b.rows(),
        });
    }
    Ok(qr)
}

/// Minimum Euclidean norm solution of the underdetermined system `b y = z`.
///
/// Factors `bᵀ = Q R` and returns `y = Q R⁻ᵀ z`, which lies in the row space
/// of `b`. Equivalent to `bᵀ (b bᵀ)⁻¹ z` without forming the Gram matrix.
pub fn min_two_norm_solution(b: &Matrix, z: &[f64]) -> Result<Vec<f64>, LinalgError> {
    check_system(b, z)?;
    let qr = factor_transpose(b)?;
    let r = qr.r();
    let n = b.rows();
    // forward substitution with Rᵀ
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut s = z[i];
        for k in 0..i {
            s -= r[(k, i)] * w[k];
        }
        w[i] = s / r[(i, i)];
    }
    Ok(qr.q_thin().mul_vec(&w))
}

/// Orthonormal basis (as columns) of the null space of a full-row-rank `b`.
pub fn null_space_basis(b: &Matrix) -> Result<Matrix, LinalgError> {
    if b.rows() > b.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: "rows <= cols".into(),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    let qr = factor_transpose(b)?;
    Ok(qr.q_full().column_range(b.rows(), b.cols()))
}
