use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::backend::Operator;
use crate::classify::{monomial, multi_indices};
use crate::error::{Error, Result};
use crate::fundamental::FundamentalSet;
use crate::operator::{scaled_tol, DenseOperator};
use crate::report::{CheckEntry, CheckReport};
use crate::tuple::OperatorTuple;

/// Residuals of the two compatibility identities over all `(l, k)`, plus pairwise commutation
/// of the `E`s and of the `F`s (the construction needs commuting blocks).
pub fn compatibility_check<O: Operator>(e: &FundamentalSet<O>, f: &FundamentalSet<O>, tol: f64) -> CheckReport {
    let n = e.e.len() + 1;
    let (ee, ff) = (&e.e, &f.e);
    let mut worst_e = 0.0f64;
    let mut worst_f = 0.0f64;
    let mut at_e = (0, 0);
    let mut at_f = (0, 0);
    for l in 1..n {
        for k in 1..n {
            let (el, ek, enk, enl) = (&ee[l - 1], &ee[k - 1], &ee[n - k - 1], &ee[n - l - 1]);
            let lhs = el.times(&enk.dagger()).minus(&ek.times(&enl.dagger()));
            let rhs = enk.dagger().times(el).minus(&enl.dagger().times(ek));
            let r = lhs.minus(&rhs).magnitude();
            if r > worst_e {
                (worst_e, at_e) = (r, (l, k));
            }
            let (fl, fk, fnk, fnl) = (&ff[l - 1], &ff[k - 1], &ff[n - k - 1], &ff[n - l - 1]);
            let lhs = fl.dagger().times(fnk).minus(&fk.dagger().times(fnl));
            let rhs = fnk.times(&fl.dagger()).minus(&fnl.times(&fk.dagger()));
            let r = lhs.minus(&rhs).magnitude();
            if r > worst_f {
                (worst_f, at_f) = (r, (l, k));
            }
        }
    }
    let commute = |xs: &[O]| {
        let mut w = 0.0f64;
        for a in xs {
            for b in xs {
                w = w.max(a.times(b).minus(&b.times(a)).magnitude());
            }
        }
        w
    };
    let (ce, cf) = (commute(ee), commute(ff));
    let mut r = CheckReport::new();
    r.push(CheckEntry::judge("compatibility_e", O::within(worst_e, tol), worst_e, tol, || json!({ "l": at_e.0, "k": at_e.1 })));
    r.push(CheckEntry::judge("compatibility_f", O::within(worst_f, tol), worst_f, tol, || json!({ "l": at_f.0, "k": at_f.1 })));
    r.push(CheckEntry::judge("fundamental_e_commute", O::within(ce, tol), ce, tol, || json!({ "commutator_norm": ce })));
    r.push(CheckEntry::judge("fundamental_f_commute", O::within(cf, tol), cf, tol, || json!({ "commutator_norm": cf })));
    r
}

/// Block levels `-N..-1` carry the defect space of `Sₙ`, level 0 carries `ℋ`, levels `1..N`
/// carry the defect space of `Sₙ*`. Every operator is block upper triangular in the order
/// (left tail, `ℋ`, right tail), so `ℋ` is semi-invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedDilation {
    pub levels: usize,
    /// `(N·d, h, N·d*)`.
    pub space_dims: (usize, usize, usize),
    #[serde(skip)]
    pub r: Vec<DenseOperator>,
    #[serde(skip)]
    pub u: DenseOperator,
    #[serde(skip)]
    pub embed: DenseOperator,
    /// Block offsets; level `j` occupies `offsets[j]..offsets[j + 1]` with `ℋ` at `j = N`.
    pub offsets: Vec<usize>,
}

impl TruncatedDilation {
    /// `(R₁, …, Rₙ₋₁, U)`.
    pub fn ops(&self) -> Vec<DenseOperator> {
        let mut v = self.r.clone();
        v.push(self.u.clone());
        v
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().expect("nonempty offsets")
    }

    /// Coordinates of every level except the outermost on each side.
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.offsets[1]..self.offsets[2 * self.levels]
    }
}

pub fn schaffer_dilation(
    t: &OperatorTuple<DenseOperator>,
    e: &FundamentalSet<DenseOperator>,
    f: &FundamentalSet<DenseOperator>,
    levels: usize,
    tol: f64,
) -> Result<TruncatedDilation> {
    if levels == 0 {
        return Err(Error::Parameter("need at least one level".into()));
    }
    let compat = compatibility_check(e, f, scaled_tol(tol, t.ops().iter().map(DenseOperator::operator_norm)));
    if let Some(bad) = compat.checks.iter().find(|c| c.is_fail()) {
        return Err(Error::Precondition(format!("{} fails: residual {:.3e}", bad.name, bad.residual)));
    }
    let n = t.n();
    let h = t.dim();
    let sn = t.last();
    let (w, ws) = (&e.defect.range.basis, &f.defect.range.basis);
    let (d, ds) = (w.cols(), ws.cols());
    let nl = levels;
    let mut sizes = vec![d; nl];
    sizes.push(h);
    sizes.extend(std::iter::repeat_n(ds, nl));
    let mut offsets = vec![0];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let total = *offsets.last().unwrap();
    let hb = nl;
    let put = |m: &mut DenseOperator, r: usize, c: usize, b: &DenseOperator| {
        if b.rows() > 0 && b.cols() > 0 {
            m.set_block(offsets[r], offsets[c], b);
        }
    };

    let wd = &w.adjoint() * &e.defect.d;
    let cross = &(&w.adjoint() * &sn.adjoint()) * ws;
    let dsw = &f.defect.d * ws;

    let mut u = DenseOperator::zeros(total, total);
    for j in 1..nl {
        put(&mut u, j - 1, j, &DenseOperator::identity(d));
    }
    put(&mut u, nl - 1, hb, &wd);
    put(&mut u, nl - 1, hb + 1, &-&cross);
    put(&mut u, hb, hb, sn);
    put(&mut u, hb, hb + 1, &dsw);
    for j in hb + 1..hb + nl {
        put(&mut u, j, j + 1, &DenseOperator::identity(ds));
    }

    let mut r = Vec::with_capacity(n - 1);
    for i in 1..n {
        let (ei, eni) = (e.e(i), e.e(n - i));
        let (fi, fni) = (f.e(i), f.e(n - i));
        let eni_star = eni.adjoint();
        let mut m = DenseOperator::zeros(total, total);
        for j in 0..nl {
            put(&mut m, j, j, ei);
        }
        for j in 0..nl - 1 {
            put(&mut m, j, j + 1, &eni_star);
        }
        put(&mut m, nl - 1, hb, &(&eni_star * &wd));
        put(&mut m, nl - 1, hb + 1, &-&(&eni_star * &cross));
        put(&mut m, hb, hb, t.s(i));
        put(&mut m, hb, hb + 1, &(&dsw * fni));
        for j in hb + 1..=hb + nl {
            put(&mut m, j, j, &fi.adjoint());
        }
        for j in hb + 1..hb + nl {
            put(&mut m, j, j + 1, fni);
        }
        r.push(m);
    }

    let mut embed = DenseOperator::zeros(total, h);
    embed.set_block(offsets[hb], 0, &DenseOperator::identity(h));
    Ok(TruncatedDilation { levels, space_dims: (nl * d, h, nl * ds), r, u, embed, offsets })
}

/// Commutation of the dilation operators and isometry of `U`, both on the interior.
pub fn interior_checks(dil: &TruncatedDilation, tol: f64) -> CheckReport {
    let range = dil.interior();
    let k = range.len();
    let cut = |m: &DenseOperator| m.block(range.start, range.start, k, k);
    let ops = dil.ops();
    let mut comm = 0.0f64;
    for a in &ops {
        for b in &ops {
            comm = comm.max(cut(&a.commutator(b)).operator_norm());
        }
    }
    let iso = cut(&(&(&dil.u.adjoint() * &dil.u) - &DenseOperator::identity(dil.total_dim()))).operator_norm();
    let mut r = CheckReport::new();
    r.push(CheckEntry::judge("interior_commuting", comm <= tol, comm, tol, || json!({ "commutator_norm": comm })));
    r.push(CheckEntry::judge("interior_u_isometric", iso <= tol, iso, tol, || json!({ "isometry_defect": iso })));
    r
}

/// One entry per multi-index `m` with `Σmᵢ ≤ max_total_degree`:
/// `‖embed*·V^m·embed − S^m‖ ≤ tol`.
pub fn verify_dilation(t: &OperatorTuple<DenseOperator>, v: &[DenseOperator], embed: &DenseOperator, max_total_degree: u32, tol: f64) -> Result<CheckReport> {
    if v.len() != t.n() {
        return Err(Error::Parameter(format!("{} dilation operators for an {}-tuple", v.len(), t.n())));
    }
    let idx = multi_indices(t.n(), max_total_degree);
    let entries: Vec<CheckEntry> = idx
        .par_iter()
        .map(|m| {
            let big = monomial(v, m);
            let lhs = &(&embed.adjoint() * &big) * embed;
            let r = (&lhs - &monomial(t.ops(), m)).operator_norm();
            let name = format!("moment{m:?}");
            CheckEntry::judge(name, r <= tol, r, tol, || json!({ "multi_index": m, "residual": r }))
        })
        .collect();
    Ok(entries.into_iter().collect())
}
