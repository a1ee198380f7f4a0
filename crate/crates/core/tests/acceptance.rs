//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use gamma_lab::backend::Operator;
use gamma_lab::classify::{is_gamma_isometry, mobius_battery, von_neumann_sampled, IsometryConfig, VerdictKind, VnConfig};
use gamma_lab::dilation::{check_coisometric_extension, compatibility_check, gamma3_from_isometries, minimal_space, necessary_conditions, schaffer_dilation, sos_identity_check, verify_dilation};
use gamma_lab::fundamental::{eq21_residuals, eq22_residuals, omega_bound_check, solve_fundamental, tuple_tol};
use gamma_lab::geometry::{in_gamma, symmetrize};
use gamma_lab::lab::{example_generator, kernel_invariance, partial_isometry_battery, run_scenario};
use gamma_lab::operator::range_basis;
use gamma_lab::shift::{BlockShiftOperator, CRational, ShiftElement};
use gamma_lab::tuple::OperatorTuple;
use gamma_lab::DenseOperator;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed_acce);
    r.set_stream(stream);
    r
}

fn unit(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU))
}

/// Uniform on the closed disc; with probability `p_edge` exactly on the circle.
fn disc(r: &mut ChaCha8Rng, p_edge: f64) -> Complex64 {
    let rad = if r.random_bool(p_edge) { 1.0 } else { r.random::<f64>().sqrt() };
    unit(r) * rad
}

fn random_unitary(r: &mut ChaCha8Rng, dim: usize) -> DenseOperator {
    loop {
        let rows: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))).collect())
            .collect();
        if let Some(q) = range_basis(&DenseOperator::from_rows(&rows).unwrap(), 1e-12) {
            if q.cols() == dim {
                return q;
            }
        }
    }
}

/// `Sₖ` of the diagonal tuple whose `j`-th entry is the symmetrization of `points[j]`.
fn diagonal_tuple(points: &[Vec<Complex64>]) -> OperatorTuple<DenseOperator> {
    let s: Vec<Vec<Complex64>> = points.iter().map(|z| symmetrize(z).unwrap().s).collect();
    OperatorTuple::diagonal(&s).unwrap()
}

fn one_minus_ttstar_over_nine() -> ShiftElement {
    ShiftElement::from_terms([(gamma_lab::shift::ShiftWord::new(0, 0), CRational::ratio(1, 9)), (gamma_lab::shift::ShiftWord::new(1, 1), CRational::ratio(-1, 9))])
}

fn self_commutator(x: &BlockShiftOperator) -> BlockShiftOperator {
    x.dagger().times(x).minus(&x.times(&x.dagger()))
}

fn example_two() -> Outcome {
    let start = Instant::now();
    let sc = example_generator(2).unwrap();
    let t = sc.tuple().map_err(|e| e.to_string())?;
    let fs = solve_fundamental(&t, 0.0).map_err(|e| e.to_string())?;
    let third_t = BlockShiftOperator::single(ShiftElement::t()).scale(&CRational::ratio(1, 3));
    ensure(fs.e[0] == third_t && fs.e[1] == BlockShiftOperator::zero(1), || format!("E = ({}, {})", fs.e[0], fs.e[1]))?;
    let d_expected = BlockShiftOperator::diag(vec![ShiftElement::zero(), ShiftElement::one(), ShiftElement::zero()]);
    ensure(fs.defect.d == d_expected, || format!("D = {}", fs.defect.d))?;
    let (pair, inv) = kernel_invariance(&t, 0.0).map_err(|e| e.to_string())?;
    ensure(pair.kernel.idx == [1], || format!("ker S₃ blocks {:?}", pair.kernel.idx))?;
    ensure(inv.is_pass(), || "kernel not invariant".into())?;
    let left = self_commutator(&fs.e[0]);
    ensure(left == BlockShiftOperator::single(one_minus_ttstar_over_nine()) && !left.is_zero(), || format!("E₁ side = {left}"))?;
    ensure(self_commutator(&fs.e[1]).is_zero(), || "E₂ side nonzero".into())?;
    let bat = partial_isometry_battery(&t, &fs, 0.0).map_err(|e| e.to_string())?;
    ensure(bat.get("fundamental_commute").unwrap().is_pass(), || "E₁E₂ ≠ E₂E₁".into())?;
    ensure(bat.get("defect_iff_consistent").unwrap().is_pass(), || "E/D verdicts disagree".into())?;
    let nec = necessary_conditions(&t, &fs, 0.0);
    ensure(nec.get("adjoint_fundamental_kernel").unwrap().is_pass() && nec.get("fundamental_commutator_kernel").unwrap().is_pass(), || nec.to_text())?;
    let rep = run_scenario(&sc).map_err(|e| e.to_string())?;
    ensure(rep.meets_expectations(), || rep.to_text())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("{} scenario checks exact, {secs:.3} s", rep.checks.len()))
}

fn example_one() -> Outcome {
    let start = Instant::now();
    let sc = example_generator(1).unwrap();
    let t = sc.tuple().map_err(|e| e.to_string())?;
    let fs = solve_fundamental(&t, 0.0).map_err(|e| e.to_string())?;
    let third = CRational::ratio(1, 3);
    let e1 = BlockShiftOperator::single(ShiftElement::one().add(&ShiftElement::t())).scale(&third);
    let e2 = BlockShiftOperator::single(ShiftElement::t()).scale(&third);
    ensure(fs.e[0] == e1 && fs.e[1] == e2, || format!("E = ({}, {})", fs.e[0], fs.e[1]))?;
    let target = BlockShiftOperator::single(one_minus_ttstar_over_nine());
    ensure(self_commutator(&fs.e[0]) == target && self_commutator(&fs.e[1]) == target, || "self-commutators differ from (I − TT*)/9".into())?;
    let bat = partial_isometry_battery(&t, &fs, 0.0).map_err(|e| e.to_string())?;
    ensure(bat.all_pass(), || bat.to_text())?;
    let rep = run_scenario(&sc).map_err(|e| e.to_string())?;
    ensure(rep.all_pass(), || rep.to_text())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("{} checks exact, {secs:.3} s", rep.checks.len()))
}

fn sos_dense() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let dim = 2 + k % 7;
        let v: Vec<DenseOperator> = (0..3).map(|_| DenseOperator::diag(&(0..dim).map(|_| unit(&mut r)).collect::<Vec<_>>())).collect();
        let rep = sos_identity_check(&v[0], &v[1], &v[2], 1e-10).map_err(|e| e.to_string())?;
        let (id, pos) = (rep.get("sos_identity").unwrap(), rep.get("sos_positive").unwrap());
        ensure(id.is_pass() && pos.is_pass(), || format!("triple {k}: {}", rep.to_text()))?;
        worst = worst.max(id.residual);
    }
    Ok(format!("50 unitary triples, worst residual {worst:.2e}, all PSD"))
}

/// The printed identity on the isometric completion of the second example's inputs.
/// `T₁` is completed to the flip `W₁`, `T₂` to `diag(T, I, T)`; `V₃` is already isometric.
fn sos_symbolic() -> Outcome {
    let (o, i, t) = (ShiftElement::zero, ShiftElement::one, ShiftElement::t);
    let w1 = BlockShiftOperator::from_rows(vec![vec![o(), o(), i()], vec![o(), i(), o()], vec![i(), o(), o()]]).unwrap();
    let w2 = BlockShiftOperator::diag(vec![t(), i(), t()]);
    let v3 = BlockShiftOperator::diag(vec![i(), t(), i()]);
    let rep = sos_identity_check(&w1, &w2, &v3, 0.0).map_err(|e| e.to_string())?;
    let corrected = rep.get("sos_identity_corrected").unwrap();
    let printed = rep.get("sos_identity").unwrap();
    let summary = format!(
        "corrected identity {}, printed identity {} (gap norm {:.3e})",
        corrected.status, printed.status, printed.residual
    );
    ensure(printed.is_pass(), || summary.clone())?;
    Ok(summary)
}

fn isometry_coherence() -> Outcome {
    let mut r = rng(4);
    let cfg = IsometryConfig { beta_samples: 32, ..IsometryConfig::for_n(3) };
    let tol = 1e-9;
    let (mut worst_adj, mut worst_pencil, mut worst_mob) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..50 {
        let dim = 2 + k % 5;
        let q = random_unitary(&mut r, dim);
        let v: Vec<DenseOperator> = (0..3)
            .map(|_| {
                let d = DenseOperator::diag(&(0..dim).map(|_| unit(&mut r)).collect::<Vec<_>>());
                &(&q * &d) * &q.adjoint()
            })
            .collect();
        let t = gamma3_from_isometries(&v[0], &v[1], &v[2], 1e-10).map_err(|e| e.to_string())?;
        let verdict = is_gamma_isometry(&t, tol, &cfg).map_err(|e| e.to_string())?;
        ensure(verdict.kind == VerdictKind::GammaIsometry, || format!("tuple {k}: {:?}\n{}", verdict.kind, verdict.evidence.to_text()))?;
        for i in 1..3 {
            let res = (t.s(i) - &(&t.s(3 - i).adjoint() * t.last())).operator_norm();
            worst_adj = worst_adj.max(res);
        }
        ensure(worst_adj <= tol, || format!("tuple {k}: adjoint relation {worst_adj:.2e}"))?;
        let pencils = verdict.evidence.get("pencils_vanish").unwrap();
        worst_pencil = worst_pencil.max(pencils.residual);
        ensure(pencils.residual <= tol, || format!("tuple {k}: pencil {:.2e}", pencils.residual))?;
        let mob = mobius_battery(&t, 32, tol).map_err(|e| e.to_string())?;
        ensure(mob.is_pass(), || format!("tuple {k}: {}", mob.text_line()))?;
        worst_mob = worst_mob.max(mob.residual);
    }
    Ok(format!("50 tuples; worst adjoint {worst_adj:.2e}, pencil {worst_pencil:.2e}, Möbius {worst_mob:.2e}"))
}

/// `Eᵢ = (sᵢ − s̄ₙ₋ᵢsₙ)/(1 − |sₙ|²)` per diagonal entry, zero where `|sₙ| = 1`.
fn planted_e(s: &[Vec<Complex64>], i: usize) -> DenseOperator {
    let n = s[0].len();
    let vals: Vec<Complex64> = s
        .iter()
        .map(|p| {
            let sn = p[n - 1];
            let d2 = 1.0 - sn.norm_sqr();
            if d2 <= 1e-12 {
                Complex64::new(0.0, 0.0)
            } else {
                (p[i - 1] - p[n - i - 1].conj() * sn) / d2
            }
        })
        .collect();
    DenseOperator::diag(&vals)
}

fn fundamental_suite() -> Outcome {
    let mut r = rng(5);
    let (mut worst, mut agree, mut total) = (0.0f64, 0usize, 0usize);
    for k in 0..100 {
        let n = 2 + k % 3;
        let dim = 1 + (k / 3) % 5;
        let points: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| if r.random_bool(0.15) { (0..n).map(|_| unit(&mut r)).collect() } else { (0..n).map(|_| disc(&mut r, 0.1)).collect() })
            .collect();
        let s: Vec<Vec<Complex64>> = points.iter().map(|z| symmetrize(z).unwrap().s).collect();
        let t = diagonal_tuple(&points);
        let fs = solve_fundamental(&t, 1e-10).map_err(|e| format!("tuple {k}: {e}"))?;
        for i in 1..n {
            let res = (&fs.ambient(i) - &planted_e(&s, i)).operator_norm();
            worst = worst.max(res);
        }
        ensure(worst <= 1e-9, || format!("tuple {k}: recovery residual {worst:.2e}"))?;
        let bound = tuple_tol(&t, 1e-9);
        let verdict = |e: &[DenseOperator]| {
            let a = eq21_residuals(&t, &fs.defect, e).iter().all(|&x| x <= bound);
            let b = eq22_residuals(&t, &fs.defect, e).iter().all(|&x| x <= bound);
            (a, b)
        };
        let bumped: Vec<DenseOperator> = fs.e.iter().map(|e| e + &DenseOperator::identity(e.rows()).scale_re(0.1)).collect();
        for cand in [fs.e.clone(), bumped] {
            let (a, b) = verdict(&cand);
            total += 1;
            agree += usize::from(a == b);
        }
        let omega = omega_bound_check(&fs, n, 64, 1e-8).map_err(|e| e.to_string())?;
        ensure(omega.is_pass(), || format!("tuple {k}: {}", omega.text_line()))?;
    }
    ensure(agree == total, || format!("equation forms agree on {agree}/{total}"))?;
    Ok(format!("100 tuples; worst recovery {worst:.2e}; form agreement {agree}/{total}; ω bound holds"))
}

fn dilation_suite() -> Outcome {
    let mut r = rng(6);
    let mut tuples: Vec<OperatorTuple<DenseOperator>> = vec![OperatorTuple::scalars(&[Complex64::new(1.2, 0.0), Complex64::new(0.5, 0.0)]).unwrap()];
    while tuples.len() < 20 {
        tuples.push(diagonal_tuple(&[vec![disc(&mut r, 0.1), disc(&mut r, 0.1)]]));
    }
    for k in 0..10 {
        let dim = 2 + k % 3;
        tuples.push(diagonal_tuple(&(0..dim).map(|_| (0..3).map(|_| disc(&mut r, 0.1)).collect()).collect::<Vec<_>>()));
    }
    let tol = 1e-8;
    let mut worst = 0.0f64;
    for (k, t) in tuples.iter().enumerate() {
        let e = solve_fundamental(t, 1e-10).map_err(|e| format!("tuple {k}: {e}"))?;
        let f = solve_fundamental(&t.adjoint(), 1e-10).map_err(|e| format!("tuple {k}: {e}"))?;
        ensure(compatibility_check(&e, &f, tol).all_pass(), || format!("tuple {k}: compatibility fails"))?;
        for levels in 1..=4 {
            let dil = schaffer_dilation(t, &e, &f, levels, 1e-10).map_err(|e| e.to_string())?;
            let mom = verify_dilation(t, &dil.ops(), &dil.embed, levels as u32, tol).map_err(|e| e.to_string())?;
            ensure(mom.all_pass(), || format!("tuple {k}, N = {levels}: {}", mom.to_text()))?;
            worst = mom.checks.iter().fold(worst, |w, c| w.max(c.residual));
            let min = minimal_space(&dil.ops(), &dil.embed, 1e-10).map_err(|e| e.to_string())?;
            let again = verify_dilation(t, &min.ops, &min.embed, levels as u32, tol).map_err(|e| e.to_string())?;
            ensure(again.all_pass(), || format!("tuple {k}, N = {levels}: minimal space {}", again.to_text()))?;
            let co = check_coisometric_extension(t, &min.ops, &min.embed, tol);
            ensure(co.all_pass(), || format!("tuple {k}, N = {levels}: {}", co.to_text()))?;
        }
    }
    Ok(format!("{} tuples × N = 1..4; worst moment residual {worst:.2e}", tuples.len()))
}

fn geometry_oracle() -> Outcome {
    let mut r = rng(7);
    for n in 2..=4 {
        for k in 0..10_000 {
            let z: Vec<Complex64> = (0..n).map(|_| disc(&mut r, 0.2)).collect();
            let m = in_gamma(&symmetrize(&z).unwrap(), 1e-9).map_err(|e| e.to_string())?;
            ensure(m.inside, || format!("n = {n}, point {k}: max root modulus {}", m.max_modulus))?;
        }
    }
    for k in 0..1_000 {
        let n = 2 + k % 3;
        let mut z: Vec<Complex64> = (0..n).map(|_| disc(&mut r, 0.2)).collect();
        z[k % n] = unit(&mut r) * 1.2;
        let m = in_gamma(&symmetrize(&z).unwrap(), 1e-9).map_err(|e| e.to_string())?;
        ensure(!m.inside, || format!("outside point {k} accepted"))?;
    }
    Ok("30000 accepted, 1000 rejected".into())
}

fn violation_machinery() -> Outcome {
    let t = OperatorTuple::scalars(&[Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
    let v = von_neumann_sampled(&t, &VnConfig::for_n(2)).map_err(|e| e.to_string())?;
    ensure(v.kind == VerdictKind::ViolationCertificate, || format!("{:?}", v.kind))?;
    let w = v.witness.ok_or("no witness stored")?;
    ensure(w.reverify(&t).map_err(|e| e.to_string())?, || "witness does not re-verify".into())?;
    // independent check: |g(3, 1)| against g on s(𝕋²) sampled on a finer grid
    let g = &w.polynomial;
    let at = |s: &[Complex64]| g.eval_point(s).norm();
    let value = at(&[Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]);
    let m = 256;
    let mut sup = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let (z1, z2) = (Complex64::from_polar(1.0, std::f64::consts::TAU * a as f64 / m as f64), Complex64::from_polar(1.0, std::f64::consts::TAU * b as f64 / m as f64));
            sup = sup.max(at(&[z1 + z2, z1 * z2]));
        }
    }
    ensure(value > sup * 1.05, || format!("|g(3,1)| = {value}, fine-grid sup {sup}"))?;
    Ok(format!("witness of degree {}: |g(3,1)| = {value:.4}, fine-grid sup {sup:.4}", g.degree()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 second example, exact", example_two),
        ("2 first example, exact", example_one),
        ("3 sum-of-squares identity, dense unitaries", sos_dense),
        ("3 sum-of-squares identity, symbolic", sos_symbolic),
        ("4 isometry battery coherence", isometry_coherence),
        ("5 fundamental-operator suite", fundamental_suite),
        ("6 truncated dilation", dilation_suite),
        ("7 geometry oracle", geometry_oracle),
        ("8 violation machinery", violation_machinery),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {name}: PASS [{secs:.2} s] {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL [{secs:.2} s] {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria lines passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
