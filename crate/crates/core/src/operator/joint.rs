use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{c, scaled_tol, DenseOperator, HermitianEigen};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 5;

/// Joint eigenvalues of a commuting family of normal matrices.
///
/// A random real combination of the Hermitian and skew-Hermitian parts is
/// diagonalized; each operator is then read off on the common eigenbasis.
/// Returns one point `(λ₁ᵏ, …, λₙᵏ)` per basis vector.
pub fn joint_eigs_commuting_normal(ops: &[DenseOperator], tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let first = ops.first().ok_or_else(|| Error::Parameter("empty operator list".into()))?;
    let dim = first.rows();
    if ops.iter().any(|a| !a.is_square() || a.rows() != dim) {
        return Err(Error::Parameter("operators must be square and of equal size".into()));
    }
    let scale = scaled_tol(tol, ops.iter().map(DenseOperator::operator_norm));
    for (i, a) in ops.iter().enumerate() {
        let defect = a.normality_defect();
        if defect > scale {
            return Err(Error::Precondition(format!("operator {i} is not normal (defect {defect:e})")));
        }
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            let comm = a.commutator(b).operator_norm();
            if comm > scale {
                return Err(Error::Precondition(format!(
                    "operators {i} and {j} do not commute (defect {comm:e})"
                )));
            }
        }
    }

    let herm: Vec<DenseOperator> = ops.iter().map(|a| (a + &a.adjoint()).scale_re(0.5)).collect();
    let skew: Vec<DenseOperator> =
        ops.iter().map(|a| (a - &a.adjoint()).scale(c(0.0, -0.5))).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x6a01_7e16);
    for _ in 0..MAX_ATTEMPTS {
        let mut h = DenseOperator::zeros(dim, dim);
        for (hp, sp) in herm.iter().zip(&skew) {
            h = &h + &hp.scale_re(rng.random_range(-1.0..1.0));
            h = &h + &sp.scale_re(rng.random_range(-1.0..1.0));
        }
        let basis = HermitianEigen::new(&h).vectors;
        if let Some(points) = read_points(ops, &basis, 100.0 * scale) {
            return Ok(points);
        }
    }
    Err(Error::Degenerate(format!(
        "no common eigenbasis found after {MAX_ATTEMPTS} random combinations"
    )))
}

fn read_points(ops: &[DenseOperator], basis: &DenseOperator, tol: f64) -> Option<Vec<Vec<Complex64>>> {
    let dim = basis.rows();
    let mut points = Vec::with_capacity(dim);
    for k in 0..dim {
        let v = basis.columns(k, 1);
        let mut point = Vec::with_capacity(ops.len());
        for a in ops {
            let av = a * &v;
            let lambda = (&v.adjoint() * &av).get(0, 0);
            if (&av - &v.scale(lambda)).operator_norm() > tol {
                return None;
            }
            point.push(lambda);
        }
        points.push(point);
    }
    Some(points)
}
