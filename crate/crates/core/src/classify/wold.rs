use serde_json::json;

use super::battery::is_gamma_unitary;
use super::VerdictKind;
use crate::error::{Error, Result};
use crate::fundamental::tuple_tol;
use crate::operator::{range_basis, DenseOperator};
use crate::report::{CheckEntry, CheckReport};
use crate::shift::{safe_window, BlockShiftOperator};
use crate::tuple::OperatorTuple;

/// `ℋ = ℋ₁ ⊕ ℋ₂` with `ℋ₁` the unitary part of `Sₙ` and `ℋ₂` the pure part.
#[derive(Clone, Debug, PartialEq)]
pub struct WoldReport {
    pub unitary_dim: usize,
    pub pure_dim: usize,
    pub checks: CheckReport,
}

/// Dense decomposition: `ℋ₁ = ran Sₙ^h`. In finite dimension `ℋ₂ = {0}` always.
pub fn wold_decompose(t: &OperatorTuple<DenseOperator>, tol: f64) -> Result<WoldReport> {
    let h = t.dim();
    if h == 0 {
        return Ok(WoldReport { unitary_dim: 0, pure_dim: 0, checks: CheckReport::new() });
    }
    let bound = tuple_tol(t, tol);
    let iso = t.last().isometry_defect();
    if iso > bound {
        return Err(Error::Precondition(format!("last operator is not isometric: ‖S*S − I‖ = {iso:.3e}")));
    }
    let basis = range_basis(&t.last().pow(h as u32), tol).unwrap_or_else(|| DenseOperator::zeros(h, 0));
    let k = basis.cols();
    let proj = &basis * &basis.adjoint();
    let comp = &DenseOperator::identity(h) - &proj;
    let mut checks = CheckReport::new();
    let leak = t.ops().iter().map(|s| (&(&comp * s) * &proj).operator_norm()).fold(0.0, f64::max);
    checks.push(CheckEntry::judge("unitary_part_invariant", leak <= bound, leak, bound, || json!({ "leak": leak })));
    if k > 0 {
        let parts: Vec<DenseOperator> = t.ops().iter().map(|s| &(&basis.adjoint() * s) * &basis).collect();
        let v = is_gamma_unitary(&OperatorTuple::unchecked(parts)?, tol);
        let ok = v.kind == VerdictKind::GammaUnitary;
        checks.push(CheckEntry::judge("unitary_part_classifies", ok, 0.0, tol, || json!({ "evidence": v.evidence })));
    }
    checks.push(CheckEntry::judge("pure_part_trivial", k == h, (h - k) as f64, 0.0, || json!({ "pure_dim": h - k })));
    Ok(WoldReport { unitary_dim: k, pure_dim: h - k, checks })
}

/// Ranks of `I − SₙᵏSₙ*ᵏ`, `k = 1..=kmax`, on the safe window of a truncation. Strict growth
/// signals a nontrivial pure part.
pub fn wold_rank_growth(sn: &BlockShiftOperator, kmax: u32, tol: f64) -> Result<Vec<usize>> {
    if sn.adjoint().mul(sn)? != BlockShiftOperator::identity(sn.m()) {
        return Err(Error::Precondition("last operator is not an isometry".into()));
    }
    let mut ranks = Vec::new();
    for k in 1..=kmax {
        let p = sn.pow(k);
        let q = BlockShiftOperator::identity(sn.m()).sub(&p.mul(&p.adjoint())?)?;
        let d = q.degree();
        let n = d as usize + 8;
        let dense = q.truncate_to_dense(n)?;
        let win = safe_window(sn.m(), n, d);
        let sub = dense.select_columns(&win);
        let rows = DenseOperator::from_matrix(sub.matrix().select_rows(&win))?;
        ranks.push(range_basis(&rows, tol).map_or(0, |b| b.cols()));
    }
    Ok(ranks)
}
