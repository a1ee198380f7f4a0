use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{c, DenseOperator};
use crate::error::{Error, Result};

/// Reconstruction constant for [`HermitianEigen`]: `‖A − VΛV*‖ ≤ dim·ε·‖A‖·KAPPA`.
pub const EIGEN_KAPPA: f64 = 100.0;

/// Eigen-decomposition of the Hermitian part of a square operator.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` belongs to `values[k]`.
    pub vectors: DenseOperator,
}

impl HermitianEigen {
    /// Decomposes `(A + A*)/2`.
    pub fn new(a: &DenseOperator) -> Self {
        let n = a.rows();
        let h = (a.matrix() + a.matrix().adjoint()) * c(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::<Complex64>::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self { values, vectors: DenseOperator::from_matrix_unchecked(vectors) }
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DenseOperator {
        let v = self.vectors.matrix();
        let mut scaled = v.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            scaled.column_mut(k).scale_mut(s);
        }
        DenseOperator::from_matrix_unchecked(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> DenseOperator {
        self.apply(|x| x)
    }
}

/// Positive square root of a Hermitian PSD operator.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything below `-tol` is
/// reported as [`Error::NotPsd`].
pub fn psd_sqrt(h: &DenseOperator, tol: f64) -> Result<DenseOperator> {
    if !h.is_square() {
        return Err(Error::Parameter("psd_sqrt needs a square operator".into()));
    }
    let norm = h.operator_norm();
    if h.hermitian_defect() > tol * norm.max(1.0) {
        return Err(Error::Precondition(format!(
            "operator is not Hermitian (defect {:e})",
            h.hermitian_defect()
        )));
    }
    let eig = HermitianEigen::new(h);
    if eig.min() < -tol {
        return Err(Error::NotPsd { eigenvalue: eig.min() });
    }
    Ok(eig.apply(|x| x.max(0.0).sqrt()))
}

/// SVD of `a` zero-padded to `rows × cols`, so the requested singular-vector
/// set is complete.
fn padded_svd(
    a: &DenseOperator,
    rows: usize,
    cols: usize,
) -> (DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>) {
    let mut sq = DMatrix::<Complex64>::zeros(rows, cols);
    sq.view_mut((0, 0), (a.rows(), a.cols())).copy_from(a.matrix());
    let svd = sq.svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").adjoint();
    (u, svd.singular_values.iter().copied().collect(), v)
}

/// Moore–Penrose pseudo-inverse; singular values `≤ rank_tol·σ_max` are dropped.
pub fn pinv(a: &DenseOperator, rank_tol: f64) -> DenseOperator {
    let (u, s, v) = padded_svd(a, a.rows(), a.cols());
    let smax = s.iter().copied().fold(0.0, f64::max);
    let mut out = DMatrix::<Complex64>::zeros(a.cols(), a.rows());
    for (k, &sk) in s.iter().enumerate() {
        if sk > rank_tol * smax && sk > 0.0 {
            out += (v.column(k) * u.column(k).adjoint()) * c(1.0 / sk, 0.0);
        }
    }
    DenseOperator::from_matrix_unchecked(out)
}

/// Orthonormal columns spanning `{x : ‖Ax‖ ≤ tol·‖A‖·‖x‖}`; `None` when trivial.
pub fn kernel_basis(a: &DenseOperator, tol: f64) -> Option<DenseOperator> {
    let (_, s, v) = padded_svd(a, a.rows().max(a.cols()), a.cols());
    let smax = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..s.len()).filter(|&k| s[k] <= tol * smax).collect();
    select_columns(&v, &cols)
}

/// Orthonormal columns spanning the range of `a` at relative threshold `tol`.
pub fn range_basis(a: &DenseOperator, tol: f64) -> Option<DenseOperator> {
    let (u, s, _) = padded_svd(a, a.rows(), a.rows().max(a.cols()));
    let smax = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..s.len()).filter(|&k| s[k] > tol * smax && s[k] > 0.0).collect();
    select_columns(&u, &cols)
}

fn select_columns(m: &DMatrix<Complex64>, cols: &[usize]) -> Option<DenseOperator> {
    if cols.is_empty() {
        return None;
    }
    let mut out = DMatrix::<Complex64>::zeros(m.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    Some(DenseOperator::from_matrix_unchecked(out))
}
