use serde_json::json;

use crate::error::{Error, Result};
use crate::operator::{range_basis, DenseOperator};
use crate::report::{CheckEntry, CheckReport};
use crate::tuple::OperatorTuple;

/// Compression of a dilation to `K = span{V^m h}`.
#[derive(Clone, Debug)]
pub struct MinimalDilation {
    /// Orthonormal basis of `K` in the original dilation space.
    pub basis: DenseOperator,
    pub ops: Vec<DenseOperator>,
    /// `ℋ → K`.
    pub embed: DenseOperator,
}

impl MinimalDilation {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// Smallest subspace containing `embed(ℋ)` and invariant under every `V_k`, found by Krylov
/// iteration. `K` is invariant, so compressing to it preserves all moments.
pub fn minimal_space(ops: &[DenseOperator], embed: &DenseOperator, tol: f64) -> Result<MinimalDilation> {
    let total = embed.rows();
    if ops.iter().any(|v| v.rows() != total || v.cols() != total) {
        return Err(Error::Parameter("dilation operators and embedding disagree on dimension".into()));
    }
    let mut basis = range_basis(embed, tol).unwrap_or_else(|| DenseOperator::zeros(total, 0));
    loop {
        if basis.cols() == 0 {
            break;
        }
        let images: Vec<DenseOperator> = ops.iter().map(|v| v * &basis).collect();
        let mut parts = vec![&basis];
        parts.extend(images.iter());
        let grown = range_basis(&DenseOperator::hstack(&parts), tol).expect("contains a nonzero basis");
        if grown.cols() == basis.cols() {
            break;
        }
        basis = grown;
    }
    let bstar = basis.adjoint();
    let ops = ops.iter().map(|v| &(&bstar * v) * &basis).collect();
    let embed = &bstar * embed;
    Ok(MinimalDilation { basis, ops, embed })
}

/// On `K`: `‖(I − ee*)·V_k*·e‖` (ℋ is co-invariant) and `‖e*·V_k*·e − S_k*‖`.
pub fn check_coisometric_extension(t: &OperatorTuple<DenseOperator>, ops: &[DenseOperator], embed: &DenseOperator, tol: f64) -> CheckReport {
    let proj_perp = &DenseOperator::identity(embed.rows()) - &(embed * &embed.adjoint());
    let mut inv = 0.0f64;
    let mut ext = 0.0f64;
    for (v, s) in ops.iter().zip(t.ops()) {
        let vs = v.adjoint();
        inv = inv.max((&(&proj_perp * &vs) * embed).operator_norm());
        ext = ext.max((&(&(&embed.adjoint() * &vs) * embed) - &s.adjoint()).operator_norm());
    }
    let mut r = CheckReport::new();
    r.push(CheckEntry::judge("adjoint_invariant", inv <= tol, inv, tol, || json!({ "leak": inv })));
    r.push(CheckEntry::judge("adjoint_restriction", ext <= tol, ext, tol, || json!({ "residual": ext })));
    r
}
