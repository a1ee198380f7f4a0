//! Cross-module invariants: fundamental operators, classifier batteries, dilations and the
//! partial-isometry checks.

use gamma_lab::backend::Operator;
use gamma_lab::classify::{is_gamma_isometry, is_gamma_unitary, pencil, von_neumann_sampled, IsometryConfig, PencilWhich, VerdictKind, VnConfig};
use gamma_lab::dilation::{gamma3_symmetrized_triple, necessary_conditions, schaffer_dilation, sos_identity_check, verify_dilation};
use gamma_lab::fundamental::{eq21_residuals, eq22_residuals, solve_fundamental, tuple_tol};
use gamma_lab::geometry::symmetrize;
use gamma_lab::lab::{example_generator, partial_isometry_battery, run_scenario};
use gamma_lab::operator::range_basis;
use gamma_lab::shift::{BlockShiftOperator, ShiftElement};
use gamma_lab::tuple::{AnyTuple, OperatorTuple};
use gamma_lab::DenseOperator;
use num_complex::Complex64;
use proptest::prelude::*;

fn disc() -> impl Strategy<Value = Complex64> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), t))
}

fn circle() -> impl Strategy<Value = Complex64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

fn diag_tuple(points: &[Vec<Complex64>]) -> OperatorTuple<DenseOperator> {
    let s: Vec<Vec<Complex64>> = points.iter().map(|z| symmetrize(z).unwrap().s).collect();
    OperatorTuple::diagonal(&s).unwrap()
}

/// Points in the closed polydisc, `dim` of them, each with `n` coordinates.
fn polydisc_points(n: std::ops::RangeInclusive<usize>, dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<Complex64>>> {
    (n, dim).prop_flat_map(|(n, d)| prop::collection::vec(prop::collection::vec(disc(), n), d))
}

fn shift_power(k: u32) -> ShiftElement {
    ShiftElement::word(k, 0)
}

/// Diagonal block operators whose entries are `0` or `Tᵏ`: commuting partial isometries.
fn shift_diag(m: usize, allow_zero: bool) -> impl Strategy<Value = BlockShiftOperator> {
    prop::collection::vec((0u32..3, any::<bool>()), m).prop_map(move |es| {
        BlockShiftOperator::diag(es.into_iter().map(|(k, z)| if z && allow_zero { ShiftElement::zero() } else { shift_power(k) }).collect())
    })
}

fn shift_triple() -> impl Strategy<Value = (BlockShiftOperator, BlockShiftOperator, BlockShiftOperator)> {
    (1usize..=3).prop_flat_map(|m| (shift_diag(m, true), shift_diag(m, true), shift_diag(m, false)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fundamental_forms_agree(points in polydisc_points(2..=4, 1..=4), bump in 0.05f64..0.5) {
        let t = diag_tuple(&points);
        let fs = solve_fundamental(&t, 1e-10).unwrap();
        let bound = tuple_tol(&t, 1e-9);
        let bumped: Vec<DenseOperator> = fs.e.iter().map(|e| e + &DenseOperator::identity(e.rows()).scale_re(bump)).collect();
        for cand in [fs.e.clone(), bumped] {
            let a = eq21_residuals(&t, &fs.defect, &cand).iter().all(|&r| r <= bound);
            let b = eq22_residuals(&t, &fs.defect, &cand).iter().all(|&r| r <= bound);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn pencils_are_hermitian(points in polydisc_points(2..=4, 1..=3), beta in disc()) {
        let t = diag_tuple(&points);
        for i in 1..t.n() {
            for which in [PencilWhich::First, PencilWhich::Second] {
                let p = pencil(&t, i, which, beta, 1e-12).unwrap();
                prop_assert!(p.value.hermitian_defect() <= 1e-12 * p.value.operator_norm().max(1.0));
            }
        }
    }

    #[test]
    fn unitary_implies_isometry(points in (2usize..=4, 1usize..=3).prop_flat_map(|(n, d)| prop::collection::vec(prop::collection::vec(circle(), n), d))) {
        let t = diag_tuple(&points);
        let u = is_gamma_unitary(&t, 1e-10);
        prop_assert_eq!(u.kind, VerdictKind::GammaUnitary);
        let v = is_gamma_isometry(&t, 1e-9, &IsometryConfig::for_n(t.n())).unwrap();
        prop_assert_eq!(v.kind, VerdictKind::GammaIsometry, "{}", v.evidence.to_text());
    }

    #[test]
    fn schaffer_moments_to_degree_n(z in prop::collection::vec(disc(), 2), levels in 1usize..=4) {
        let t = diag_tuple(&[z]);
        let e = solve_fundamental(&t, 1e-10).unwrap();
        let f = solve_fundamental(&t.adjoint(), 1e-10).unwrap();
        let dil = schaffer_dilation(&t, &e, &f, levels, 1e-10).unwrap();
        prop_assert!(verify_dilation(&t, &dil.ops(), &dil.embed, levels as u32, 1e-8).unwrap().all_pass());
    }

    #[test]
    fn sos_printed_form_on_unitaries(v in (1usize..=5).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(circle(), d), 3))) {
        let ops: Vec<DenseOperator> = v.iter().map(|d| DenseOperator::diag(d)).collect();
        let rep = sos_identity_check(&ops[0], &ops[1], &ops[2], 1e-10).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep.to_text());
    }

    #[test]
    fn sos_corrected_form_on_shift_isometries(m in 1usize..=3, seed in any::<u64>()) {
        let pick = |k: u64| shift_power((seed >> k) as u32 % 3);
        let v: Vec<BlockShiftOperator> = (0..3)
            .map(|j| BlockShiftOperator::diag((0..m).map(|b| pick(2 * (3 * j + b) as u64)).collect()))
            .collect();
        let rep = sos_identity_check(&v[0], &v[1], &v[2], 0.0).unwrap();
        for name in ["sos_a_expansion", "sos_b_expansion", "sos_identity_corrected"] {
            prop_assert!(rep.get(name).unwrap().is_pass(), "{}", rep.to_text());
        }
    }

    #[test]
    fn symmetrized_triples_meet_kernel_conditions_dense(
        rows in (1usize..=4).prop_flat_map(|d| (Just(d), prop::collection::vec(prop::collection::vec(disc(), d), d))),
        diag in prop::collection::vec((disc(), disc(), circle()), 4),
    ) {
        let (d, seed) = rows;
        let Some(q) = range_basis(&DenseOperator::from_rows(&seed).unwrap(), 1e-6).filter(|q| q.cols() == d) else { return Ok(()) };
        let conj = |vals: Vec<Complex64>| &(&q * &DenseOperator::diag(&vals)) * &q.adjoint();
        let t1 = conj(diag[..d].iter().map(|x| x.0).collect());
        let t2 = conj(diag[..d].iter().map(|x| x.1).collect());
        let v3 = conj(diag[..d].iter().map(|x| x.2).collect());
        let t = gamma3_symmetrized_triple(&t1, &t2, &v3, 1e-9).unwrap();
        let fs = solve_fundamental(&t, 1e-10).unwrap();
        let rep = necessary_conditions(&t, &fs, 1e-9);
        prop_assert!(rep.get("adjoint_fundamental_kernel").unwrap().is_pass(), "{}", rep.to_text());
        prop_assert!(rep.get("fundamental_commutator_kernel").unwrap().is_pass(), "{}", rep.to_text());
    }

    #[test]
    fn symmetrized_shift_triples_meet_kernel_conditions_and_agree_across_sides((t1, t2, v3) in shift_triple()) {
        let t = gamma3_symmetrized_triple(&t1, &t2, &v3, 0.0).unwrap();
        let fs = solve_fundamental(&t, 0.0).unwrap();
        let rep = necessary_conditions(&t, &fs, 0.0);
        prop_assert!(rep.get("adjoint_fundamental_kernel").unwrap().is_pass(), "{}", rep.to_text());
        prop_assert!(rep.get("fundamental_commutator_kernel").unwrap().is_pass(), "{}", rep.to_text());
        let bat = partial_isometry_battery(&t, &fs, 0.0).unwrap();
        prop_assert!(bat.get("defect_iff_consistent").unwrap().is_pass(), "{}", bat.to_text());
        prop_assert!(bat.get("commute_iff_consistent").unwrap().is_pass(), "{}", bat.to_text());
    }

    #[test]
    fn tuples_round_trip(points in polydisc_points(2..=3, 1..=3)) {
        let t = AnyTuple::Dense(diag_tuple(&points));
        let back = AnyTuple::parse(&t.to_json_string().unwrap(), 1e-10).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn violation_witness_reproduces_within_1e12() {
    let t = OperatorTuple::scalars(&[Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
    let v = von_neumann_sampled(&t, &VnConfig::for_n(2)).unwrap();
    let w = v.witness.unwrap();
    let norm = w.polynomial.eval_operator(t.ops()).unwrap().operator_norm();
    assert!((norm - w.operator_norm).abs() <= 1e-12);
    assert!(w.reverify(&t).unwrap());
}

#[test]
fn generator_tuples_have_commuting_fundamental_pairs() {
    for which in [1, 2] {
        let sc = example_generator(which).unwrap();
        let t = sc.tuple().unwrap();
        let fs = solve_fundamental(&t, 0.0).unwrap();
        assert_eq!(fs.e[0].times(&fs.e[1]), fs.e[1].times(&fs.e[0]));
    }
}

#[test]
fn scenario_runs_are_deterministic_and_exact() {
    for which in [1, 2] {
        let sc = example_generator(which).unwrap();
        let a = run_scenario(&sc).unwrap();
        let b = run_scenario(&sc).unwrap();
        assert_eq!(a, b);
        let symbolic = a.checks.iter().filter(|c| !c.name.starts_with("dense_"));
        assert!(symbolic.into_iter().all(|c| c.tol == 0.0), "symbolic checks consumed a tolerance");
    }
}
