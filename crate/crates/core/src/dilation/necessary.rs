use serde_json::json;

use crate::backend::Operator;
use crate::classify::{von_neumann_entry, VnConfig};
use crate::error::Result;
use crate::fundamental::{tuple_tol, FundamentalSet};
use crate::operator::DenseOperator;
use crate::report::{CheckEntry, CheckReport, CheckStatus};
use crate::tuple::OperatorTuple;

pub const PARTIAL_NOTE: &str = "partial (necessary consequence only)";

/// The two kernel conditions and the identity linking them. `fs` may carry candidate operators
/// that do not solve the fundamental equations; the identity then generally fails.
pub fn necessary_conditions<O: Operator>(t: &OperatorTuple<O>, fs: &FundamentalSet<O>, tol: f64) -> CheckReport {
    let n = t.n();
    let tol = tuple_tol(t, tol);
    let d = &fs.defect.d;
    let e = fs.ambient_all();
    let ker = &fs.defect.kernel;
    let sn = t.last();
    let (mut w2, mut w3, mut wid) = ((0.0f64, 0), (0.0f64, 0), (0.0f64, 0));
    for i in 1..n {
        let (ei, eni) = (&e[i - 1], &e[n - i - 1]);
        let (eis, enis) = (ei.dagger(), eni.dagger());
        let lhs = eis.times(d).times(t.s(i)).minus(&enis.times(d).times(t.s(n - i)));
        let comm = eis.times(&enis).minus(&enis.times(&eis));
        let item3 = comm.times(d).times(sn);
        let rhs = eis.times(ei).minus(&enis.times(eni)).times(d).plus(&item3);
        let r2 = lhs.restricted_magnitude(ker);
        let r3 = item3.restricted_magnitude(ker);
        let rid = lhs.minus(&rhs).magnitude();
        for (w, r) in [(&mut w2, r2), (&mut w3, r3), (&mut wid, rid)] {
            if r > w.0 {
                *w = (r, i);
            }
        }
    }
    let entry = |name: &str, (r, i): (f64, usize)| CheckEntry::judge(name, O::within(r, tol), r, tol, || json!({ "i": i, "residual": r }));
    let mut rep = CheckReport::new();
    rep.push(entry("adjoint_fundamental_kernel", w2));
    rep.push(entry("fundamental_commutator_kernel", w3));
    rep.push(entry("kernel_conditions_identity", wid));
    rep
}

/// `(γ₁E₁, …, γₙ₋₁Eₙ₋₁)` with `γᵢ = (n − i)/n` against the Γₙ₋₁ von Neumann battery.
/// For `n = 2` the target set is the closed disc and the check is a norm bound.
pub fn scaled_fundamental_check(fs: &FundamentalSet<DenseOperator>, n: usize, cfg: &VnConfig) -> Result<CheckEntry> {
    const NAME: &str = "scaled_fundamental_contraction";
    let scaled: Vec<DenseOperator> = (1..n).map(|i| fs.e(i).scale_re((n - i) as f64 / n as f64)).collect();
    if scaled[0].rows() == 0 {
        return Ok(CheckEntry::pass(NAME, 0.0, cfg.tol).with_note("empty defect space"));
    }
    if n == 2 {
        let excess = (scaled[0].operator_norm() - 1.0).max(0.0);
        let ok = excess <= cfg.tol;
        let entry = CheckEntry::judge(NAME, ok, excess, cfg.tol, || json!({ "norm": 1.0 + excess }));
        let entry = if ok { CheckEntry { status: CheckStatus::Inconclusive, ..entry } } else { entry };
        return Ok(entry.with_note(PARTIAL_NOTE));
    }
    let tuple = OperatorTuple::unchecked(scaled)?;
    let mut entry = von_neumann_entry(&tuple, cfg)?;
    entry.name = NAME.into();
    Ok(entry.with_note(PARTIAL_NOTE))
}

/// [`necessary_conditions`] plus the sampled consequence of the subnormal-dilation condition.
pub fn necessary_conditions_dense(t: &OperatorTuple<DenseOperator>, fs: &FundamentalSet<DenseOperator>, tol: f64, cfg: &VnConfig) -> Result<CheckReport> {
    let mut rep = necessary_conditions(t, fs, tol);
    rep.push(scaled_fundamental_check(fs, t.n(), cfg)?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fundamental::solve_fundamental;
    use num_complex::Complex64;

    #[test]
    fn isometric_last_holds_vacuously() {
        let p = crate::geometry::symmetrize(&[Complex64::from_polar(1.0, 1.0), Complex64::from_polar(1.0, 2.5)]).unwrap();
        let t = OperatorTuple::scalars(&p.s).unwrap();
        let fs = solve_fundamental(&t, 1e-10).unwrap();
        let r = necessary_conditions_dense(&t, &fs, 1e-10, &VnConfig::for_n(1)).unwrap();
        assert!(!r.any_fail(), "{}", r.to_text());
    }

    #[test]
    fn scalar_pair_passes() {
        let t = OperatorTuple::scalars(&[Complex64::new(1.2, 0.0), Complex64::new(0.5, 0.0)]).unwrap();
        let fs = solve_fundamental(&t, 1e-10).unwrap();
        let r = necessary_conditions_dense(&t, &fs, 1e-10, &VnConfig::for_n(1)).unwrap();
        assert!(!r.any_fail(), "{}", r.to_text());
        assert_eq!(r.get("scaled_fundamental_contraction").unwrap().status, CheckStatus::Inconclusive);
    }

    #[test]
    fn perturbed_candidate_breaks_identity() {
        // for n = 2 the identity is vacuous (i = n − i), so use a Γ₃ point
        let p = crate::geometry::symmetrize(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.3), Complex64::new(-0.2, 0.0)]).unwrap();
        let t = OperatorTuple::scalars(&p.s).unwrap();
        let fs = solve_fundamental(&t, 1e-10).unwrap();
        assert!(!necessary_conditions(&t, &fs, 1e-10).any_fail());
        let bumped = fs.with_candidates(vec![&fs.e[0] + &DenseOperator::identity(1).scale_re(0.1), fs.e[1].clone()]);
        let r = necessary_conditions(&t, &bumped, 1e-10);
        assert!(r.get("kernel_conditions_identity").unwrap().is_fail());
    }
}
