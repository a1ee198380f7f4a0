//! Dense complex-matrix backend.
//!
//! [`DenseOperator`] is a thin, validated wrapper over a `nalgebra` matrix of
//! `Complex64`. Every other module consumes operators through this type, so
//! all entries are guaranteed finite at construction.

mod decomp;
mod joint;
mod radius;

pub use decomp::{kernel_basis, pinv, psd_sqrt, range_basis, HermitianEigen, EIGEN_KAPPA};
pub use joint::joint_eigs_commuting_normal;
pub use radius::{numerical_radius, spectral_radius};

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Absolute residual tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Scales an absolute tolerance by `max(1, largest norm)`.
pub fn scaled_tol(tol: f64, norms: impl IntoIterator<Item = f64>) -> f64 {
    tol * norms.into_iter().fold(1.0, f64::max)
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A finite complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    m: DMatrix<Complex64>,
}

impl DenseOperator {
    /// Builds an operator from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Parameter(format!("dimensions must be positive, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Parameter(format!(
                "expected {} entries for a {rows}x{cols} operator, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Wraps a matrix after checking every entry is finite.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        Self { m }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::Parameter("ragged rows".into()));
        }
        Self::new(r, cols, rows.concat())
    }

    /// Convenience constructor for real matrices; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let data: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&data).expect("well-formed real matrix")
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { m: DMatrix::zeros(rows, cols) }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        Self { m: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)) }
    }

    pub fn scalar(z: Complex64) -> Self {
        Self::diag(&[z])
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self { m: &self.m * z }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(c(x, 0.0))
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return 0.0;
        }
        let sv = self.m.clone().singular_values();
        sv.iter().copied().fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.rows());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `‖A - A*‖`, zero for Hermitian operators.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).operator_norm()
    }

    /// `‖AA* - A*A‖`.
    pub fn normality_defect(&self) -> f64 {
        let a = self.adjoint();
        (&(self * &a) - &(&a * self)).operator_norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `‖A*A - I‖`.
    pub fn isometry_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.cols())).operator_norm()
    }

    pub fn columns(&self, start: usize, count: usize) -> Self {
        Self { m: self.m.columns(start, count).into_owned() }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self { m: self.m.select_columns(idx) }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self { m: self.m.view((r0, c0), (rows, cols)).into_owned() }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        self.m.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.m);
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows() + other.rows(), self.cols() + other.cols());
        out.set_block(0, 0, self);
        out.set_block(self.rows(), self.cols(), other);
        out
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows());
        let cols = parts.iter().map(|p| p.cols()).sum();
        let mut out = Self::zeros(rows, cols);
        let mut at = 0;
        for p in parts {
            out.set_block(0, at, p);
            at += p.cols();
        }
        out
    }

    /// Inverse of a square matrix; `Degenerate` when numerically singular.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Parameter("inverse needs a square matrix".into()));
        }
        self.m
            .clone()
            .try_inverse()
            .filter(|inv| inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            .map(Self::from_matrix_unchecked)
            .ok_or_else(|| Error::Degenerate("matrix is singular".into()))
    }

    /// Eigenvalues of a square matrix via the complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::Parameter("eigenvalues need a square matrix".into()));
        }
        let n = self.rows();
        if n == 1 {
            return Ok(vec![self.m[(0, 0)]]);
        }
        // the unshifted QR iteration can stall on exactly nilpotent input; retry with a diagonal shift
        let scale = self.max_abs().max(1.0);
        for shift in [c(0.0, 0.0), c(0.5, 0.25) * scale, c(-0.375, 0.625) * scale] {
            let mut m = self.m.clone();
            for i in 0..n {
                m[(i, i)] += shift;
            }
            if let Some(schur) = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000) {
                let (_, t) = schur.unpack();
                return Ok((0..n).map(|i| t[(i, i)] - shift).collect());
            }
        }
        Err(Error::Convergence(format!("Schur iteration on {n}x{n} matrix")))
    }

    pub fn hermitian_eigen(&self) -> HermitianEigen {
        HermitianEigen::new(self)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(self)
    }

    pub fn numerical_radius(&self, angular_samples: usize) -> Result<f64> {
        numerical_radius(self, angular_samples)
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m + &rhs.m }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m - &rhs.m }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m * &rhs.m }
    }
}

impl Neg for &DenseOperator {
    type Output = DenseOperator;
    fn neg(self) -> DenseOperator {
        DenseOperator { m: -&self.m }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for DenseOperator {
            type Output = DenseOperator;
            fn $f(self, rhs: DenseOperator) -> DenseOperator {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
