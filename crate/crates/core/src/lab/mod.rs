//! Checks specific to tuples whose last operator is a partial isometry, and the two exact
//! three-block scenarios built on the unilateral shift.

mod scenario;

pub use scenario::{example_generator, run_scenario, ExpectedCheck, Scenario, DENSE_CHECK_LEVEL, DENSE_CHECK_MARGIN};

use serde_json::json;

use crate::backend::Operator;
use crate::error::{Error, Result};
use crate::fundamental::FundamentalSet;
use crate::report::{CheckEntry, CheckReport};
use crate::tuple::OperatorTuple;

/// `(S₁, S₂)` compressed to `ker S₃`. Genuine restrictions only when the kernel is invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedPair<O: Operator> {
    pub kernel: O::Subspace,
    pub d1: O,
    pub d2: O,
}

fn require_triple<O: Operator>(t: &OperatorTuple<O>) -> Result<()> {
    if t.n() == 3 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("partial-isometry checks need a triple, got n = {}", t.n())))
    }
}

/// `‖S₃S₁|ker S₃‖` and `‖S₃S₂|ker S₃‖`. Errors when `S₃` is not a partial isometry.
pub fn kernel_invariance<O: Operator>(t: &OperatorTuple<O>, tol: f64) -> Result<(RestrictedPair<O>, CheckEntry)> {
    require_triple(t)?;
    let s3 = t.last();
    let kernel = O::partial_isometry_kernel(s3, tol)?;
    let r1 = s3.times(t.s(1)).restricted_magnitude(&kernel);
    let r2 = s3.times(t.s(2)).restricted_magnitude(&kernel);
    let r = r1.max(r2);
    let entry = CheckEntry::judge("kernel_invariance", O::within(r, tol), r, tol, || json!({ "s1_leak": r1, "s2_leak": r2 }))
        .with_note(format!("dim ker = {}", O::subspace_dim(&kernel)));
    let pair = RestrictedPair { d1: t.s(1).compress(&kernel), d2: t.s(2).compress(&kernel), kernel };
    Ok((pair, entry))
}

fn self_commutator<O: Operator>(x: &O) -> O {
    x.dagger().times(x).minus(&x.times(&x.dagger()))
}

fn side<O: Operator>(a: &O, b: &O) -> (f64, f64) {
    let comm = a.times(b).minus(&b.times(a)).magnitude();
    let defect = self_commutator(a).minus(&self_commutator(b)).magnitude();
    (comm, defect)
}

/// Commutation and self-commutator equality for the fundamental pair `(E₁, E₂)` and for the
/// restricted pair `(D₁, D₂)`, plus agreement of the verdicts between the two sides.
pub fn partial_isometry_battery<O: Operator>(t: &OperatorTuple<O>, fs: &FundamentalSet<O>, tol: f64) -> Result<CheckReport> {
    let (pair, inv) = kernel_invariance(t, tol)?;
    let (ec, ed) = side(fs.e(1), fs.e(2));
    let (dc, dd) = side(&pair.d1, &pair.d2);
    let judge = |name: &str, r: f64| CheckEntry::judge(name, O::within(r, tol), r, tol, || json!({ "residual": r }));
    let e_comm = judge("fundamental_commute", ec);
    let e_def = judge("fundamental_defect_equality", ed);
    let d_comm = judge("restricted_commute", dc);
    let d_def = judge("restricted_defect_equality", dd);
    let agree = |name: &str, x: &CheckEntry, y: &CheckEntry| {
        let ok = x.is_pass() == y.is_pass();
        CheckEntry::judge(name, ok, if ok { 0.0 } else { 1.0 }, 0.0, || json!({ "fundamental": x.status, "restricted": y.status }))
    };
    let mut rep = CheckReport::new();
    rep.push(inv);
    rep.push(agree("defect_iff_consistent", &e_def, &d_def));
    rep.push(agree("commute_iff_consistent", &e_comm, &d_comm));
    for e in [e_comm, e_def, d_comm, d_def] {
        rep.push(e);
    }
    Ok(rep)
}
