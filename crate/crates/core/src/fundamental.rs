//! Defect operators and the fundamental operators `E₁, …, Eₙ₋₁` solving
//! `Sᵢ − Sₙ₋ᵢ*Sₙ = D Eᵢ D` on the defect space of `Sₙ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde_json::json;

use crate::backend::Operator;
use crate::error::{Error, Result};
use crate::operator::{numerical_radius, scaled_tol, DenseOperator};
use crate::report::CheckEntry;
use crate::tuple::OperatorTuple;

/// Angular samples used for every numerical radius inside the ω-bound check.
pub const OMEGA_ANGULAR_SAMPLES: usize = 64;

/// `D = (I − Sₙ*Sₙ)^{1/2}` with its pseudo-inverse, range and kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectData<O: Operator> {
    pub d: O,
    pub d_pinv: O,
    pub range: O::Subspace,
    pub kernel: O::Subspace,
}

impl<O: Operator> DefectData<O> {
    pub fn rank(&self) -> usize {
        O::subspace_dim(&self.range)
    }
}

/// Fundamental operators in defect-space coordinates, with the residual of each equation.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalSet<O: Operator> {
    pub e: Vec<O>,
    pub residuals: Vec<f64>,
    pub defect: DefectData<O>,
}

impl<O: Operator> FundamentalSet<O> {
    /// `Eᵢ` with 1-based `i`.
    pub fn e(&self, i: usize) -> &O {
        &self.e[i - 1]
    }

    /// `Eᵢ` extended by zero off the defect space.
    pub fn ambient(&self, i: usize) -> O {
        self.e[i - 1].extend(&self.defect.range)
    }

    pub fn ambient_all(&self) -> Vec<O> {
        (1..=self.e.len()).map(|i| self.ambient(i)).collect()
    }

    /// Same defect, different candidate operators (in defect coordinates).
    pub fn with_candidates(&self, e: Vec<O>) -> Self {
        Self { e, residuals: Vec::new(), defect: self.defect.clone() }
    }
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// `k(i) = C(n−1, i) + C(n−1, n−i)`.
pub fn k_const(n: usize, i: usize) -> u64 {
    binomial(n as u64 - 1, i as u64) + binomial(n as u64 - 1, (n - i) as u64)
}

pub fn defect<O: Operator>(t: &OperatorTuple<O>, tol: f64) -> Result<DefectData<O>> {
    let sn = t.last();
    if !O::EXACT {
        let norm = sn.magnitude();
        if norm > 1.0 + tol {
            return Err(Error::NotContraction { eigenvalue: 1.0 - norm * norm });
        }
    }
    let (d, d_pinv, range, kernel) = O::defect_parts(sn, tol)?;
    Ok(DefectData { d, d_pinv, range, kernel })
}

/// Tolerance scaled by the tuple's size.
pub fn tuple_tol<O: Operator>(t: &OperatorTuple<O>, tol: f64) -> f64 {
    scaled_tol(tol, t.ops().iter().map(Operator::magnitude))
}

/// `Sᵢ − Sₙ₋ᵢ*Sₙ`.
pub fn fundamental_rhs<O: Operator>(t: &OperatorTuple<O>, i: usize) -> O {
    let n = t.n();
    t.s(i).minus(&t.s(n - i).dagger().times(t.last()))
}

pub fn solve_fundamental<O: Operator>(t: &OperatorTuple<O>, tol: f64) -> Result<FundamentalSet<O>> {
    let defect = defect(t, tol)?;
    let n = t.n();
    let bound = tuple_tol(t, tol);
    let mut e = Vec::with_capacity(n - 1);
    for i in 1..n {
        let x = fundamental_rhs(t, i);
        e.push(defect.d_pinv.times(&x).times(&defect.d_pinv).compress(&defect.range));
    }
    let residuals = eq21_residuals(t, &defect, &e);
    for (k, &r) in residuals.iter().enumerate() {
        if !O::within(r, bound) {
            return Err(Error::NoFundamentalOperators { index: k + 1, residual: r, tol: bound });
        }
    }
    Ok(FundamentalSet { e, residuals, defect })
}

/// `‖D Eᵢ D − (Sᵢ − Sₙ₋ᵢ*Sₙ)‖` for candidates `e` in defect coordinates.
pub fn eq21_residuals<O: Operator>(t: &OperatorTuple<O>, defect: &DefectData<O>, e: &[O]) -> Vec<f64> {
    (1..t.n())
        .map(|i| {
            let lhs = defect.d.times(&e[i - 1].extend(&defect.range)).times(&defect.d);
            lhs.minus(&fundamental_rhs(t, i)).magnitude()
        })
        .collect()
}

/// `‖D Sᵢ − Eᵢ D − Eₙ₋ᵢ* D Sₙ‖` for candidates `e` in defect coordinates.
pub fn eq22_residuals<O: Operator>(t: &OperatorTuple<O>, defect: &DefectData<O>, e: &[O]) -> Vec<f64> {
    let n = t.n();
    let amb: Vec<O> = e.iter().map(|x| x.extend(&defect.range)).collect();
    (1..n)
        .map(|i| {
            let d = &defect.d;
            let lhs = d.times(t.s(i));
            let rhs = amb[i - 1].times(d).plus(&amb[n - i - 1].dagger().times(d).times(t.last()));
            lhs.minus(&rhs).magnitude()
        })
        .collect()
}

pub fn verify_altform<O: Operator>(t: &OperatorTuple<O>, fs: &FundamentalSet<O>, tol: f64) -> CheckEntry {
    let res = eq22_residuals(t, &fs.defect, &fs.e);
    let worst = res.iter().copied().fold(0.0, f64::max);
    let bound = tuple_tol(t, tol);
    let ok = res.iter().all(|&r| O::within(r, bound));
    CheckEntry::judge("alternative_fundamental_equation", ok, worst, bound, || {
        json!({ "residuals": res })
    })
}

/// `ω(Eᵢ + Eₙ₋ᵢz) ≤ k(i) + tol` at `samples` equally spaced `z ∈ 𝕋`. A failure is a
/// certificate (the computed radius is a lower bound); a pass is sampled evidence.
pub fn omega_bound_check<O: Operator>(fs: &FundamentalSet<O>, n: usize, samples: usize, tol: f64) -> Result<CheckEntry> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one z sample".into()));
    }
    let views = O::dense_views(&fs.e);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut witness = None;
    for i in 1..n {
        let k = k_const(n, i) as f64;
        for s in 0..samples {
            let z = Complex64::from_polar(1.0, TAU * s as f64 / samples as f64);
            let a = &views[i - 1] + &views[n - i - 1].scale(z);
            let w = omega(&a)?;
            if w - k > worst_excess {
                worst_excess = w - k;
            }
            if w > k + tol && witness.is_none() {
                witness = Some(json!({ "i": i, "z": [z.re, z.im], "omega": w, "bound": k }));
            }
        }
    }
    let name = "omega_bound";
    Ok(match witness {
        None => CheckEntry::pass(name, worst_excess.max(0.0), tol).with_note("sampled z"),
        Some(w) => CheckEntry::fail(name, worst_excess, tol, w)
            .with_note("ω-bound violated (input may not be a Γₙ-contraction)"),
    })
}

fn omega(a: &DenseOperator) -> Result<f64> {
    if a.rows() == 0 {
        return Ok(0.0);
    }
    numerical_radius(a, OMEGA_ANGULAR_SAMPLES)
}
