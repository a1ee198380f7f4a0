//! Common interface over the dense and exact shift backends.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::operator::{scaled_tol, DenseOperator, HermitianEigen};
use crate::shift::{defect_sym, safe_window, BlockShiftOperator, CRational, ShiftElement};

/// Extra coordinates kept past the word degree when a symbolic operator is viewed densely.
pub const SHIFT_MARGIN: usize = 8;

/// Operators that the fundamental-operator machinery can run on.
pub trait Operator: Clone + Debug + PartialEq + Send + Sync + 'static {
    /// Subspace representation used for defect spaces and kernels.
    type Subspace: Clone + Debug + PartialEq + Send + Sync;

    /// `true` when equality is decided symbolically.
    const EXACT: bool;

    fn dim(&self) -> usize;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn dagger(&self) -> Self;
    /// Multiplication by `num/den`.
    fn scaled(&self, num: i64, den: i64) -> Self;
    fn identity_like(&self) -> Self;
    fn zero_like(&self) -> Self;

    /// Operator norm (dense) or safe-window norm (symbolic; exactly 0 iff the element is 0).
    fn magnitude(&self) -> f64;

    /// Dense stand-ins of `ops` on one common space, used by spectral functionals.
    fn dense_views(ops: &[Self]) -> Vec<DenseOperator>;

    /// `(D, D⁺, range, kernel)` for `D = (I − S*S)^{1/2}`.
    fn defect_parts(s: &Self, tol: f64) -> Result<(Self, Self, Self::Subspace, Self::Subspace)>;

    /// Kernel of a partial isometry.
    fn partial_isometry_kernel(s: &Self, tol: f64) -> Result<Self::Subspace>;

    fn subspace_dim(sub: &Self::Subspace) -> usize;
    /// `W* A W` for the inclusion `W` of the subspace.
    fn compress(&self, sub: &Self::Subspace) -> Self;
    /// `W A W*`: the inverse of [`compress`](Self::compress), zero off the subspace.
    fn extend(&self, sub: &Self::Subspace) -> Self;
    /// Magnitude of `A W`.
    fn restricted_magnitude(&self, sub: &Self::Subspace) -> f64;

    fn pow(&self, k: u32) -> Self {
        let mut out = self.identity_like();
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }

    /// Pass rule: exact backends require a residual of exactly 0.
    fn within(residual: f64, tol: f64) -> bool {
        if Self::EXACT {
            residual == 0.0
        } else {
            residual <= tol
        }
    }
}

/// Orthonormal columns of a dense subspace; `basis` may have zero columns.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSubspace {
    pub basis: DenseOperator,
}

impl DenseSubspace {
    pub fn from_basis(ambient: usize, basis: Option<DenseOperator>) -> Self {
        Self { basis: basis.unwrap_or_else(|| DenseOperator::zeros(ambient, 0)) }
    }
}

impl Operator for DenseOperator {
    type Subspace = DenseSubspace;
    const EXACT: bool = false;

    fn dim(&self) -> usize {
        self.rows()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn dagger(&self) -> Self {
        self.adjoint()
    }
    fn scaled(&self, num: i64, den: i64) -> Self {
        self.scale_re(num as f64 / den as f64)
    }
    fn identity_like(&self) -> Self {
        DenseOperator::identity(self.rows())
    }
    fn zero_like(&self) -> Self {
        DenseOperator::zeros(self.rows(), self.cols())
    }
    fn magnitude(&self) -> f64 {
        self.operator_norm()
    }
    fn dense_views(ops: &[Self]) -> Vec<DenseOperator> {
        ops.to_vec()
    }

    fn defect_parts(s: &Self, tol: f64) -> Result<(Self, Self, DenseSubspace, DenseSubspace)> {
        let h = s.cols();
        let q = &DenseOperator::identity(h) - &(&s.adjoint() * s);
        let eig = HermitianEigen::new(&q);
        let floor = scaled_tol(tol, [s.operator_norm().powi(2)]);
        if eig.min() < -floor {
            return Err(Error::NotContraction { eigenvalue: eig.min() });
        }
        // eigenvalues of D² below tol are rounding noise around an isometric direction
        let keep: Vec<usize> = (0..h).filter(|&k| eig.values[k] > floor).collect();
        let drop: Vec<usize> = (0..h).filter(|&k| eig.values[k] <= floor).collect();
        let pick = |idx: &[usize]| {
            let mut b = DenseOperator::zeros(h, idx.len());
            for (c, &k) in idx.iter().enumerate() {
                b.set_block(0, c, &eig.vectors.columns(k, 1));
            }
            b
        };
        let d = eig.apply(|x| if x > floor { x.sqrt() } else { 0.0 });
        let d_pinv = eig.apply(|x| if x > floor { 1.0 / x.sqrt() } else { 0.0 });
        Ok((d, d_pinv, DenseSubspace { basis: pick(&keep) }, DenseSubspace { basis: pick(&drop) }))
    }

    fn partial_isometry_kernel(s: &Self, tol: f64) -> Result<DenseSubspace> {
        let defect = (&(&(s * &s.adjoint()) * s) - s).operator_norm();
        if defect > scaled_tol(tol, [s.operator_norm()]) {
            return Err(Error::Precondition(format!("not a partial isometry: ‖SS*S − S‖ = {defect:.3e}")));
        }
        Ok(DenseSubspace::from_basis(s.cols(), crate::operator::kernel_basis(s, tol)))
    }

    fn subspace_dim(sub: &DenseSubspace) -> usize {
        sub.basis.cols()
    }
    fn compress(&self, sub: &DenseSubspace) -> Self {
        &(&sub.basis.adjoint() * self) * &sub.basis
    }
    fn extend(&self, sub: &DenseSubspace) -> Self {
        &(&sub.basis * self) * &sub.basis.adjoint()
    }
    fn restricted_magnitude(&self, sub: &DenseSubspace) -> f64 {
        (self * &sub.basis).operator_norm()
    }
}

/// Block indices `idx` of an `m × m` block operator: the range of a coordinate projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSubspace {
    pub m: usize,
    pub idx: Vec<usize>,
}

impl BlockSubspace {
    fn complement(&self) -> Self {
        Self { m: self.m, idx: (0..self.m).filter(|i| !self.idx.contains(i)).collect() }
    }

    /// Reads `idx` off a projection that is diagonal with entries `0` or `I`.
    pub fn from_coordinate_projection(q: &BlockShiftOperator) -> Result<Self> {
        let m = q.m();
        let one = ShiftElement::one();
        let mut idx = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let x = q.get(i, j);
                let ok = if i == j { x.is_zero() || *x == one } else { x.is_zero() };
                if !ok {
                    return Err(Error::SymbolicSqrtUnsupported(format!(
                        "projection {q} is not a coordinate projection"
                    )));
                }
            }
            if *q.get(i, i) == one {
                idx.push(i);
            }
        }
        Ok(Self { m, idx })
    }
}

impl Operator for BlockShiftOperator {
    type Subspace = BlockSubspace;
    const EXACT: bool = true;

    fn dim(&self) -> usize {
        self.m()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o).expect("conformable block operators")
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o).expect("conformable block operators")
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o).expect("conformable block operators")
    }
    fn dagger(&self) -> Self {
        self.adjoint()
    }
    fn scaled(&self, num: i64, den: i64) -> Self {
        self.scale(&CRational::ratio(num, den))
    }
    fn identity_like(&self) -> Self {
        BlockShiftOperator::identity(self.m())
    }
    fn zero_like(&self) -> Self {
        BlockShiftOperator::zero(self.m())
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let d = self.degree();
        let n = d as usize + SHIFT_MARGIN;
        let dense = self.truncate_to_dense(n).expect("n exceeds degree");
        let cols = safe_window(self.m(), n, d);
        let window = dense.select_columns(&cols);
        // a nonzero element is nonzero on its safe window
        window.operator_norm().max(f64::MIN_POSITIVE)
    }

    fn dense_views(ops: &[Self]) -> Vec<DenseOperator> {
        let n = ops.iter().map(|x| x.degree() as usize).max().unwrap_or(0) + SHIFT_MARGIN;
        ops.iter().map(|x| x.truncate_to_dense(n).expect("n exceeds degree")).collect()
    }

    fn defect_parts(s: &Self, _tol: f64) -> Result<(Self, Self, BlockSubspace, BlockSubspace)> {
        let q = defect_sym(s)?;
        let range = BlockSubspace::from_coordinate_projection(&q)?;
        let kernel = range.complement();
        Ok((q.clone(), q, range, kernel))
    }

    fn partial_isometry_kernel(s: &Self, _tol: f64) -> Result<BlockSubspace> {
        if s.times(&s.dagger()).times(s) != *s {
            return Err(Error::Precondition("not a partial isometry: SS*S ≠ S".into()));
        }
        let q = s.identity_like().minus(&s.dagger().times(s));
        BlockSubspace::from_coordinate_projection(&q)
    }

    fn subspace_dim(sub: &BlockSubspace) -> usize {
        sub.idx.len()
    }
    fn compress(&self, sub: &BlockSubspace) -> Self {
        self.compress(&sub.idx)
    }
    fn extend(&self, sub: &BlockSubspace) -> Self {
        if sub.idx.is_empty() {
            return BlockShiftOperator::zero(sub.m);
        }
        BlockShiftOperator::extend(self, &sub.idx, sub.m).expect("indices match")
    }
    fn restricted_magnitude(&self, sub: &BlockSubspace) -> f64 {
        let mut masked = BlockShiftOperator::zero(self.m());
        for i in 0..self.m() {
            for &j in &sub.idx {
                masked.set(i, j, self.get(i, j).clone());
            }
        }
        masked.magnitude()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn dense_defect_of_isometry_and_zero() {
        let u = DenseOperator::diag(&[Complex64::new(0.0, 1.0), c(-1.0)]);
        let (d, _, range, kernel) = DenseOperator::defect_parts(&u, 1e-10).unwrap();
        assert_eq!(d.operator_norm(), 0.0);
        assert_eq!(DenseOperator::subspace_dim(&range), 0);
        assert_eq!(DenseOperator::subspace_dim(&kernel), 2);
        let z = DenseOperator::zeros(3, 3);
        let (d, pinv, range, _) = DenseOperator::defect_parts(&z, 1e-10).unwrap();
        assert!((&d - &DenseOperator::identity(3)).operator_norm() < 1e-14);
        assert!((&pinv - &DenseOperator::identity(3)).operator_norm() < 1e-14);
        assert_eq!(DenseOperator::subspace_dim(&range), 3);
    }

    #[test]
    fn dense_defect_rejects_expansion() {
        let s = DenseOperator::scalar(c(1.5));
        assert!(matches!(DenseOperator::defect_parts(&s, 1e-10), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn compress_extend_dense() {
        let s = DenseOperator::diag(&[c(0.5), c(1.0)]);
        let (_, _, range, _) = DenseOperator::defect_parts(&s, 1e-10).unwrap();
        let x = DenseOperator::scalar(c(2.0));
        let e = x.extend(&range);
        assert!((e.get(0, 0).norm() - 2.0).abs() < 1e-14);
        assert!((e.compress(&range).get(0, 0) - c(2.0)).norm() < 1e-14);
    }

    #[test]
    fn symbolic_defect_and_kernel() {
        let t = ShiftElement::t();
        let z = ShiftElement::zero();
        let s3 = BlockShiftOperator::from_rows(vec![
            vec![z.clone(), z.clone(), t.clone()],
            vec![z.clone(), z.clone(), z.clone()],
            vec![t, z.clone(), z],
        ])
        .unwrap();
        let (d, _, range, kernel) = BlockShiftOperator::defect_parts(&s3, 0.0).unwrap();
        assert_eq!(range.idx, vec![1]);
        assert_eq!(kernel.idx, vec![0, 2]);
        assert!(d.is_projection_sym());
        let ker = BlockShiftOperator::partial_isometry_kernel(&s3, 0.0).unwrap();
        assert_eq!(ker.idx, vec![1]);
    }

    #[test]
    fn symbolic_magnitude() {
        assert_eq!(BlockShiftOperator::zero(2).magnitude(), 0.0);
        let t = BlockShiftOperator::single(ShiftElement::t());
        assert!((t.magnitude() - 1.0).abs() < 1e-12);
        let tts = BlockShiftOperator::single(ShiftElement::one().sub(&ShiftElement::word(1, 1)));
        assert!((tts.magnitude() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn within_is_exact_for_symbolic() {
        assert!(BlockShiftOperator::within(0.0, 1.0));
        assert!(!BlockShiftOperator::within(1e-300, 1.0));
        assert!(DenseOperator::within(1e-11, 1e-10));
    }
}
