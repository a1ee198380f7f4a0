use serde_json::json;

use crate::backend::Operator;
use crate::error::{Error, Result};
use crate::operator::DenseOperator;
use crate::report::{CheckEntry, CheckReport};
use crate::tuple::OperatorTuple;

use super::verify_dilation;

fn commuting<O: Operator>(ops: &[&O], tol: f64) -> Result<()> {
    for (a, x) in ops.iter().enumerate() {
        for (b, y) in ops.iter().enumerate().skip(a + 1) {
            let r = x.times(y).minus(&y.times(x)).magnitude();
            if !O::within(r, tol) {
                return Err(Error::Precondition(format!("inputs {} and {} do not commute (residual {r:.3e})", a + 1, b + 1)));
            }
        }
    }
    Ok(())
}

fn isometric<O: Operator>(v: &O, which: usize, tol: f64) -> Result<()> {
    let r = v.dagger().times(v).minus(&v.identity_like()).magnitude();
    if O::within(r, tol) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("input {which} is not an isometry (residual {r:.3e})")))
    }
}

fn symmetrize3<O: Operator>(a: &O, b: &O, c: &O) -> Result<OperatorTuple<O>> {
    let s1 = a.plus(b).plus(c).scaled(1, 3);
    let s2 = a.times(b).plus(&b.times(c)).plus(&c.times(a)).scaled(1, 3);
    let s3 = a.times(b).times(c);
    OperatorTuple::unchecked(vec![s1, s2, s3])
}

/// `((V₁+V₂+V₃)/3, (V₁V₂+V₂V₃+V₃V₁)/3, V₁V₂V₃)` for commuting isometries.
pub fn gamma3_from_isometries<O: Operator>(v1: &O, v2: &O, v3: &O, tol: f64) -> Result<OperatorTuple<O>> {
    for (k, v) in [v1, v2, v3].into_iter().enumerate() {
        isometric(v, k + 1, tol)?;
    }
    commuting(&[v1, v2, v3], tol)?;
    symmetrize3(v1, v2, v3)
}

/// The same symmetrization for commuting contractions `T₁, T₂` and an isometry `V₃`.
pub fn gamma3_symmetrized_triple<O: Operator>(t1: &O, t2: &O, v3: &O, tol: f64) -> Result<OperatorTuple<O>> {
    for (k, t) in [t1, t2].into_iter().enumerate() {
        let m = t.magnitude();
        if m > 1.0 + tol.max(1e-12) {
            return Err(Error::Precondition(format!("input {} is not a contraction (norm {m})", k + 1)));
        }
    }
    isometric(v3, 3, tol)?;
    commuting(&[t1, t2, v3], tol)?;
    symmetrize3(t1, t2, v3)
}

/// Moments of the tuple built from commuting isometric lifts against `t`, through `embed`.
pub fn verify_lifts(t: &OperatorTuple<DenseOperator>, lifts: &[DenseOperator; 3], embed: &DenseOperator, degree: u32, tol: f64) -> Result<CheckReport> {
    let big = gamma3_from_isometries(&lifts[0], &lifts[1], &lifts[2], tol)?;
    verify_dilation(t, big.ops(), embed, degree, tol)
}

/// Sum-of-squares decomposition of `A − B` for
/// `A = (2I − ⅔S₁)*(2I − ⅔S₁)` and `B = (⅔S₂ − ⅔S₁)*(⅔S₂ − ⅔S₁)`.
///
/// `sos_identity` compares `A − B` with the squares alone; `sos_identity_corrected` adds
/// `(4/81)·Σ X*(I − VV*)X`, which vanishes when every `Vₐ` is unitary.
pub fn sos_identity_check<O: Operator>(v1: &O, v2: &O, v3: &O, tol: f64) -> Result<CheckReport> {
    let s = gamma3_from_isometries(v1, v2, v3, tol)?;
    let one = v1.identity_like();
    let v = [v1, v2, v3];
    let adj: Vec<O> = v.iter().map(|x| x.dagger()).collect();
    let sq = |x: &O| x.dagger().times(x);
    let sum = |xs: &mut dyn Iterator<Item = O>| xs.fold(one.zero_like(), |acc, x| acc.plus(&x));

    let xa = one.scaled(2, 1).minus(&s.s(1).scaled(2, 3));
    let a_direct = sq(&xa);
    let xb = s.s(2).scaled(2, 3).minus(&s.s(1).scaled(2, 3));
    let b_direct = sq(&xb);

    let sum_v = sum(&mut v.iter().map(|x| (*x).clone()));
    let sum_vs = sum_v.dagger();
    let cross = sum(&mut (0..3).flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| (a, b))).map(|(a, b)| adj[a].times(v[b])));
    let a_formula = one
        .scaled(84, 1)
        .minus(&sum_v.scaled(9, 1))
        .minus(&sum_vs.scaled(9, 1))
        .plus(&cross)
        .scaled(4, 81);
    let c_terms = [
        adj[1].times(v1).times(v3),
        adj[2].times(&adj[0]).times(v2),
        adj[0].times(v2).times(v3),
        adj[2].times(&adj[1]).times(v1),
        adj[2].times(v1).times(v2),
        adj[1].times(&adj[0]).times(v3),
    ];
    let c = sum(&mut c_terms.into_iter());
    let b_formula = one
        .scaled(6, 1)
        .minus(&sum_v.scaled(2, 1))
        .minus(&sum_vs.scaled(2, 1))
        .plus(&cross.scaled(2, 1))
        .minus(&c)
        .scaled(4, 81);

    let minus_one = |x: &O| one.minus(x);
    let plus_one = |x: &O| one.plus(x);
    let mut squares = one.scaled(24, 1);
    for x in v {
        squares = squares.plus(&sq(&minus_one(x)).scaled(7, 1));
    }
    for x in [adj[1].times(v1), adj[2].times(v1), adj[1].times(v3)] {
        squares = squares.plus(&sq(&minus_one(&x)));
    }
    for x in [adj[1].times(v1).times(v3), adj[0].times(v2).times(v3), adj[2].times(v1).times(v2)] {
        squares = squares.plus(&sq(&plus_one(&x)));
    }
    let sos = squares.scaled(4, 81);

    let pairs = [
        (v1.clone(), v2),
        (v1.clone(), v3),
        (v3.clone(), v2),
        (v1.times(v3), v2),
        (v2.times(v3), v1),
        (v1.times(v2), v3),
    ];
    let correction = sum(&mut pairs.iter().map(|(x, w)| x.dagger().times(&one.minus(&w.times(&w.dagger()))).times(x))).scaled(4, 81);

    let diff = a_direct.minus(&b_direct);
    let ra = a_direct.minus(&a_formula).magnitude();
    let rb = b_direct.minus(&b_formula).magnitude();
    let gap = diff.minus(&sos);
    let r_plain = gap.magnitude();
    let r_corr = gap.minus(&correction).magnitude();
    let corr_mag = correction.magnitude();

    let mut rep = CheckReport::new();
    rep.push(CheckEntry::judge("sos_a_expansion", O::within(ra, tol), ra, tol, || json!({ "residual": ra })));
    rep.push(CheckEntry::judge("sos_b_expansion", O::within(rb, tol), rb, tol, || json!({ "residual": rb })));
    rep.push(
        CheckEntry::judge("sos_identity", O::within(r_plain, tol), r_plain, tol, || json!({ "residual": r_plain, "correction_norm": corr_mag }))
            .with_note(format!("range-defect correction norm {corr_mag:.3e}")),
    );
    rep.push(CheckEntry::judge("sos_identity_corrected", O::within(r_corr, tol), r_corr, tol, || json!({ "residual": r_corr })));
    if !O::EXACT {
        let view = O::dense_views(std::slice::from_ref(&diff)).remove(0);
        let min = view.hermitian_eigen().min();
        rep.push(CheckEntry::judge("sos_positive", min >= -tol, min.min(0.0).abs(), tol, || json!({ "min_eigenvalue": min })));
    }
    Ok(rep)
}
