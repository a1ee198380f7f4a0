use serde_json::json;

use super::pencil::pencil_battery;
use super::vonneumann::{von_neumann_entry, VnConfig};
use super::{ClassifierVerdict, VerdictKind};
use crate::backend::Operator;
use crate::error::{Error, Result};
use crate::fundamental::{omega_bound_check, solve_fundamental, tuple_tol};
use crate::geometry::{on_bgamma, SymPoint};
use crate::operator::{joint_eigs_commuting_normal, scaled_tol, DenseOperator};
use crate::report::{CheckEntry, CheckReport};
use crate::serde_util::pair;
use crate::shift::BlockShiftOperator;
use crate::tuple::OperatorTuple;

/// Caveat attached whenever the reduced contraction step relies on sampling.
pub const SAMPLED_CAVEAT: &str = "contraction-step sampled";

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryConfig {
    pub beta_samples: usize,
    pub omega_samples: usize,
    /// Settings for the reduced `(n−1)`-tuple.
    pub vn: VnConfig,
}

impl IsometryConfig {
    pub fn for_n(n: usize) -> Self {
        Self { beta_samples: 32, omega_samples: 64, vn: VnConfig::for_n(n.saturating_sub(1).max(2)) }
    }
}

pub fn is_gamma_unitary(t: &OperatorTuple<DenseOperator>, tol: f64) -> ClassifierVerdict {
    let mut ev = CheckReport::new();
    let bound = tuple_tol(t, tol);
    let defects: Vec<f64> = t.ops().iter().map(DenseOperator::normality_defect).collect();
    let worst = defects.iter().copied().fold(0.0, f64::max);
    ev.push(CheckEntry::judge("normal", worst <= bound, worst, bound, || json!({ "normality_defects": defects })));
    let mut comm = 0.0f64;
    for a in t.ops() {
        for b in t.ops() {
            comm = comm.max(a.commutator(b).operator_norm());
        }
    }
    ev.push(CheckEntry::judge("commuting", comm <= bound, comm, bound, || json!({ "commutator_norm": comm })));
    if ev.any_fail() {
        return ClassifierVerdict::from_evidence(VerdictKind::GammaUnitary, ev);
    }
    // repeated roots are only determined to about the square root of the rounding error
    let root_tol = bound.sqrt().max(bound);
    let entry = match joint_eigs_commuting_normal(t.ops(), bound) {
        Err(e) => CheckEntry::fail("joint_spectrum_in_distinguished_boundary", f64::INFINITY, root_tol, json!({ "error": e.to_string() })),
        Ok(points) => {
            let mut worst = 0.0f64;
            let mut witness = None;
            for p in &points {
                let sp = SymPoint { n: p.len(), s: p.clone() };
                let roots = sp.roots().unwrap_or_default();
                let dev = roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
                worst = worst.max(dev);
                if witness.is_none() && !on_bgamma(&sp, root_tol).unwrap_or(false) {
                    witness = Some(json!({
                        "point": p.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                        "roots": roots.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                    }));
                }
            }
            match witness {
                None => CheckEntry::pass("joint_spectrum_in_distinguished_boundary", worst, root_tol),
                Some(w) => CheckEntry::fail("joint_spectrum_in_distinguished_boundary", worst, root_tol, w),
            }
        }
    };
    ev.push(entry);
    ClassifierVerdict::from_evidence(VerdictKind::GammaUnitary, ev)
}

/// `Sₙ*Sₙ = I` and `Sᵢ = Sₙ₋ᵢ*Sₙ`; exact on the symbolic backend.
fn isometry_algebra<O: Operator>(t: &OperatorTuple<O>, tol: f64) -> CheckReport {
    let n = t.n();
    let bound = tuple_tol(t, tol);
    let sn = t.last();
    let mut ev = CheckReport::new();
    let a = sn.dagger().times(sn).minus(&sn.identity_like()).magnitude();
    ev.push(CheckEntry::judge("last_isometric", O::within(a, bound), a, bound, || json!({ "isometry_defect": a })));
    let res: Vec<f64> = (1..n).map(|i| t.s(i).minus(&t.s(n - i).dagger().times(sn)).magnitude()).collect();
    let worst = res.iter().copied().fold(0.0, f64::max);
    let ok = res.iter().all(|&r| O::within(r, bound));
    ev.push(CheckEntry::judge("adjoint_relation", ok, worst, bound, || json!({ "residuals": res })));
    ev
}

/// Battery: last operator isometric, adjoint relation, pencils vanish on sampled β, and the
/// necessary contraction battery on `(γ₁S₁, …, γₙ₋₁Sₙ₋₁)`, `γᵢ = (n−i)/n`.
pub fn is_gamma_isometry(t: &OperatorTuple<DenseOperator>, tol: f64, cfg: &IsometryConfig) -> Result<ClassifierVerdict> {
    let n = t.n();
    let mut ev = isometry_algebra(t, tol);
    ev.push(pencil_battery(t, cfg.beta_samples, tuple_tol(t, tol))?);
    let reduced: Vec<DenseOperator> = (1..n).map(|i| t.s(i).scale_re((n - i) as f64 / n as f64)).collect();
    let mut sampled = false;
    if n == 2 {
        let r = reduced[0].operator_norm();
        ev.push(CheckEntry::judge("reduced_contraction", r <= 1.0 + tol, r, tol, || json!({ "norm": r })));
    } else {
        let rt = OperatorTuple::unchecked(reduced)?;
        let (sub, s) = contraction_battery(&rt, tol, cfg)?;
        sampled = s;
        ev.extend(sub.prefixed("reduced"));
    }
    let mut v = ClassifierVerdict::from_evidence(VerdictKind::GammaIsometry, ev);
    if sampled {
        v = v.with_caveat(SAMPLED_CAVEAT);
    }
    Ok(v)
}

/// Exact part of the isometry battery on the symbolic backend; eigen-based steps are skipped.
pub fn is_gamma_isometry_sym(t: &OperatorTuple<BlockShiftOperator>) -> ClassifierVerdict {
    ClassifierVerdict::from_evidence(VerdictKind::NecessaryBatteryPassed, isometry_algebra(t, 0.0))
        .with_caveat("pencil and contraction steps skipped on the symbolic backend")
}

/// Necessary checks for a Γₘ-contraction (`m ≥ 2`). Returns the evidence and whether any step
/// relied on sampling.
pub fn contraction_battery(t: &OperatorTuple<DenseOperator>, tol: f64, cfg: &IsometryConfig) -> Result<(CheckReport, bool)> {
    if t.n() == 2 {
        let v = gamma2_battery(t.s(1), t.s(2), tol, &cfg.vn)?;
        return Ok((v.evidence, true));
    }
    let mut ev = CheckReport::new();
    match solve_fundamental(t, tol) {
        Ok(fs) => {
            let worst = fs.residuals.iter().copied().fold(0.0, f64::max);
            ev.push(CheckEntry::pass("fundamental_operators_exist", worst, tol));
            ev.push(omega_bound_check(&fs, t.n(), cfg.omega_samples, tol.max(1e-8))?);
        }
        Err(e @ (Error::NoFundamentalOperators { .. } | Error::NotContraction { .. })) => {
            ev.push(CheckEntry::fail("fundamental_operators_exist", f64::INFINITY, tol, json!({ "error": e.to_string() })));
        }
        Err(e) => return Err(e),
    }
    let vn = VnConfig { grid: VnConfig::for_n(t.n()).grid, ..cfg.vn.clone() };
    ev.push(von_neumann_entry(t, &vn)?);
    Ok((ev, true))
}

/// `‖P‖ ≤ 1`, `(2I−S)*(2I−S) − (2P−S)*(2P−S) ⪰ 0`, and the sampled von Neumann test.
/// Passing is only `NecessaryBatteryPassed`.
pub fn gamma2_battery(s: &DenseOperator, p: &DenseOperator, tol: f64, cfg: &VnConfig) -> Result<ClassifierVerdict> {
    let t = OperatorTuple::new(vec![s.clone(), p.clone()], tol)?;
    let mut ev = CheckReport::new();
    let pn = p.operator_norm();
    ev.push(CheckEntry::judge("p_contractive", pn <= 1.0 + tol, pn, tol, || json!({ "norm": pn })));
    let two = DenseOperator::identity(s.rows()).scale_re(2.0);
    let a = &two - s;
    let b = &p.scale_re(2.0) - s;
    let m = &(&a.adjoint() * &a) - &(&b.adjoint() * &b);
    let min_eig = if m.rows() == 0 { 0.0 } else { m.hermitian_eigen().min() };
    let bound = scaled_tol(tol, [s.operator_norm(), pn]);
    ev.push(CheckEntry::judge("pair_inequality", min_eig >= -bound, min_eig, bound, || json!({ "min_eig": min_eig })));
    let vn = super::vonneumann::von_neumann_sampled(&t, &VnConfig { degree: cfg.degree.min(3), ..cfg.clone() })?;
    let witness = vn.witness.clone();
    ev.extend(vn.evidence);
    let mut v = ClassifierVerdict::from_evidence(VerdictKind::NecessaryBatteryPassed, ev);
    v.witness = witness;
    Ok(v)
}
