use serde::Serialize;
use serde_json::json;

use crate::backend::Operator;
use crate::dilation::{gamma3_symmetrized_triple, necessary_conditions};
use crate::error::Result;
use crate::fundamental::{solve_fundamental, verify_altform};
use crate::report::{CheckEntry, CheckReport, CheckStatus};
use crate::shift::{safe_window, safe_window_gap, BlockShiftOperator, CRational, ShiftElement};
use crate::tuple::{AnyTuple, OperatorTuple};

use super::{kernel_invariance, partial_isometry_battery};

/// Truncation level of the dense cross-check.
pub const DENSE_CHECK_LEVEL: usize = 8;
/// Coordinates dropped at the end of each block; at least the largest word degree involved.
pub const DENSE_CHECK_MARGIN: u32 = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedCheck {
    pub name: &'static str,
    pub status: CheckStatus,
}

/// Inputs and every expected value of one exact example.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub which: u8,
    /// `(T₁, T₂, V₃)`.
    pub inputs: [BlockShiftOperator; 3],
    pub expected_s: [BlockShiftOperator; 3],
    /// `(E₁, E₂)` in coordinates of the defect range.
    pub expected_e: [BlockShiftOperator; 2],
    /// Block indices of the range of `D`.
    pub expected_defect_range: Vec<usize>,
    /// Block indices of `ker S₃`.
    pub expected_kernel: Vec<usize>,
    /// `(S₁, S₂)` compressed to `ker S₃`.
    pub expected_restricted: [BlockShiftOperator; 2],
    pub expected: Vec<ExpectedCheck>,
}

impl Scenario {
    /// The tuple built from the inputs.
    pub fn tuple(&self) -> Result<OperatorTuple<BlockShiftOperator>> {
        let [t1, t2, v3] = &self.inputs;
        gamma3_symmetrized_triple(t1, t2, v3, 0.0)
    }

    pub fn tuple_json(&self) -> Result<String> {
        AnyTuple::Shift(self.tuple()?).to_json_string()
    }

    fn expected_status(&self, name: &str) -> CheckStatus {
        self.expected.iter().find(|e| e.name == name).map_or(CheckStatus::Pass, |e| e.status)
    }
}

fn third(num: i64) -> CRational {
    CRational::ratio(num, 3)
}

fn el(parts: &[(u32, u32, i64)]) -> ShiftElement {
    ShiftElement::from_terms(parts.iter().map(|&(a, b, c)| (crate::shift::ShiftWord::new(a, b), CRational::from_int(c))))
}

fn rows(r: Vec<Vec<ShiftElement>>) -> BlockShiftOperator {
    BlockShiftOperator::from_rows(r).expect("square literal")
}

/// `1` or `2`; anything else is `None`.
pub fn example_generator(which: u8) -> Option<Scenario> {
    let o = ShiftElement::zero;
    let i = ShiftElement::one;
    let t = ShiftElement::t;
    let i_plus_t = || el(&[(0, 0, 1), (1, 0, 1)]);
    let third_of = |x: BlockShiftOperator| x.scale(&third(1));
    match which {
        1 => {
            let inputs = [
                rows(vec![vec![o(), o()], vec![i(), o()]]),
                BlockShiftOperator::diag(vec![t(), t()]),
                BlockShiftOperator::identity(2),
            ];
            let expected_s = [
                third_of(rows(vec![vec![i_plus_t(), o()], vec![i(), i_plus_t()]])),
                third_of(rows(vec![vec![t(), o()], vec![i_plus_t(), t()]])),
                rows(vec![vec![o(), o()], vec![t(), o()]]),
            ];
            let expected_e = [third_of(BlockShiftOperator::single(i_plus_t())), third_of(BlockShiftOperator::single(t()))];
            Some(Scenario { which, inputs, expected_s, expected_restricted: expected_e.clone(), expected_e, expected_defect_range: vec![1], expected_kernel: vec![1], expected: Vec::new() })
        }
        2 => {
            let inputs = [
                rows(vec![vec![o(), o(), i()], vec![o(), o(), o()], vec![i(), o(), o()]]),
                BlockShiftOperator::diag(vec![t(), o(), t()]),
                BlockShiftOperator::diag(vec![i(), t(), i()]),
            ];
            let expected_s = [
                third_of(rows(vec![vec![i_plus_t(), o(), i()], vec![o(), t(), o()], vec![i(), o(), i_plus_t()]])),
                third_of(rows(vec![vec![t(), o(), i_plus_t()], vec![o(), o(), o()], vec![i_plus_t(), o(), t()]])),
                rows(vec![vec![o(), o(), t()], vec![o(), o(), o()], vec![t(), o(), o()]]),
            ];
            let expected_e = [third_of(BlockShiftOperator::single(t())), BlockShiftOperator::zero(1)];
            let expected = vec![
                ExpectedCheck { name: "fundamental_defect_equality", status: CheckStatus::Fail },
                ExpectedCheck { name: "restricted_defect_equality", status: CheckStatus::Fail },
            ];
            Some(Scenario { which, inputs, expected_s, expected_restricted: expected_e.clone(), expected_e, expected_defect_range: vec![1], expected_kernel: vec![1], expected })
        }
        _ => None,
    }
}

fn exact(name: &str, ok: bool, witness: impl FnOnce() -> serde_json::Value) -> CheckEntry {
    CheckEntry::judge(name, ok, if ok { 0.0 } else { 1.0 }, 0.0, witness)
}

/// Every module's checks on the scenario, each tagged with its expected status.
/// Symbolic checks are exact; the dense cross-check compares truncations on the safe window.
pub fn run_scenario(sc: &Scenario) -> Result<CheckReport> {
    let t = sc.tuple()?;
    let mut rep = CheckReport::new();

    let s_ok = t.ops().iter().zip(&sc.expected_s).all(|(a, b)| a == b);
    rep.push(exact("symmetrized_triple_matches", s_ok, || json!({ "got": t.ops().iter().map(|x| x.to_string()).collect::<Vec<_>>() })));

    let fs = solve_fundamental(&t, 0.0)?;
    let e_ok = fs.e.iter().zip(&sc.expected_e).all(|(a, b)| a == b);
    rep.push(exact("fundamental_operators_match", e_ok, || json!({ "got": fs.e.iter().map(|x| x.to_string()).collect::<Vec<_>>() })));
    let range = &fs.defect.range;
    rep.push(exact("defect_range_matches", range.idx == sc.expected_defect_range, || json!({ "got": range.idx })));
    rep.push(verify_altform(&t, &fs, 0.0));

    let kernel = BlockShiftOperator::partial_isometry_kernel(t.last(), 0.0)?;
    rep.push(exact("kernel_matches", kernel.idx == sc.expected_kernel, || json!({ "got": kernel.idx })));
    let (pair, _) = kernel_invariance(&t, 0.0)?;
    let d_ok = pair.d1 == sc.expected_restricted[0] && pair.d2 == sc.expected_restricted[1];
    rep.push(exact("restricted_pair_matches", d_ok, || json!({ "got": [pair.d1.to_string(), pair.d2.to_string()] })));

    rep.extend(necessary_conditions(&t, &fs, 0.0));
    rep.extend(partial_isometry_battery(&t, &fs, 0.0)?);
    rep.extend(dense_cross_check(&t, &fs.ambient_all(), &fs.defect.d)?);

    let checks = rep.checks.into_iter().map(|c| {
        let status = sc.expected_status(&c.name);
        c.expecting(status)
    });
    Ok(checks.collect())
}

/// The fundamental equation and the self-commutator difference evaluated two ways: products of
/// truncations versus truncations of exact products. They must agree on the safe window.
fn dense_cross_check(t: &OperatorTuple<BlockShiftOperator>, e: &[BlockShiftOperator], d: &BlockShiftOperator) -> Result<CheckReport> {
    let n = DENSE_CHECK_LEVEL;
    let m = t.dim();
    let cols = safe_window(m, n, DENSE_CHECK_MARGIN);
    let tr = |x: &BlockShiftOperator| x.truncate_to_dense(n);
    let (s1, s2, s3) = (tr(t.s(1))?, tr(t.s(2))?, tr(t.s(3))?);
    let mut gap_eq = 0.0f64;
    for (i, (si, sni)) in [(&s1, &s2), (&s2, &s1)].into_iter().enumerate() {
        let dense = si - &(&sni.adjoint() * &s3);
        let sym = tr(&d.times(&e[i]).times(d))?;
        gap_eq = gap_eq.max(safe_window_gap(&dense, &sym, &cols));
    }
    let (e1, e2) = (tr(&e[0])?, tr(&e[1])?);
    let selfc = |x: &crate::operator::DenseOperator| &(&x.adjoint() * x) - &(x * &x.adjoint());
    let dense = &selfc(&e1) - &selfc(&e2);
    let sc = |x: &BlockShiftOperator| x.dagger().times(x).minus(&x.times(&x.dagger()));
    let sym = tr(&sc(&e[0]).minus(&sc(&e[1])))?;
    let gap_def = safe_window_gap(&dense, &sym, &cols);
    let tol = 1e-12;
    let mut rep = CheckReport::new();
    rep.push(CheckEntry::judge("dense_fundamental_equation", gap_eq <= tol, gap_eq, tol, || json!({ "gap": gap_eq })));
    rep.push(CheckEntry::judge("dense_defect_difference", gap_def <= tol, gap_def, tol, || json!({ "gap": gap_def })));
    Ok(rep)
}
