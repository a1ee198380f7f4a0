use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polynomial::{monomial, multi_indices, Polynomial};
use super::{ClassifierVerdict, VerdictKind};
use crate::error::{Error, Result};
use crate::geometry::{sample_bgamma, DEFAULT_SAMPLE_BUDGET};
use crate::operator::DenseOperator;
use crate::report::{CheckEntry, CheckReport};
use crate::tuple::OperatorTuple;

/// Settings for the sampled von Neumann battery.
#[derive(Clone, Debug, PartialEq)]
pub struct VnConfig {
    pub degree: u32,
    pub trials: usize,
    pub grid: usize,
    /// Relative slack on the sampled sup; absorbs grid under-approximation.
    pub margin: f64,
    pub tol: f64,
    pub seed: u64,
    pub budget: usize,
}

impl VnConfig {
    /// Defaults: degree 3, 64 trials, grid 32 for n = 2, 16 for n = 3, 8 beyond.
    pub fn for_n(n: usize) -> Self {
        let grid = match n {
            0..=2 => 32,
            3 => 16,
            _ => 8,
        };
        Self { degree: 3, trials: 64, grid, margin: 0.05, tol: 1e-10, seed: 0, budget: DEFAULT_SAMPLE_BUDGET }
    }
}

/// A polynomial with `‖g(S)‖` above the sampled boundary sup; re-checkable in isolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub polynomial: Polynomial,
    pub operator_norm: f64,
    pub sampled_sup: f64,
    pub grid: usize,
    pub margin: f64,
    pub tol: f64,
}

impl ViolationWitness {
    /// Recomputes both sides from scratch; `Ok(true)` iff the violation reproduces.
    pub fn reverify(&self, t: &OperatorTuple<DenseOperator>) -> Result<bool> {
        let norm = self.polynomial.eval_operator(t.ops())?.operator_norm();
        let sup = sampled_sup(&self.polynomial, self.grid, DEFAULT_SAMPLE_BUDGET)?;
        let agree = (norm - self.operator_norm).abs() <= 1e-12 * norm.max(1.0)
            && (sup - self.sampled_sup).abs() <= 1e-12 * sup.max(1.0);
        Ok(agree && norm > sup * (1.0 + self.margin) + self.tol)
    }
}

/// `max |g|` over the boundary grid of the given size; a lower bound for the sup over Γₙ.
pub fn sampled_sup(g: &Polynomial, grid: usize, budget: usize) -> Result<f64> {
    let pts = sample_bgamma(g.n, grid, budget)?;
    Ok(pts.iter().map(|p| g.eval_point(&p.s).norm()).fold(0.0, f64::max))
}

struct Trial {
    poly: Polynomial,
    norm: f64,
    sup: f64,
}

/// Monomial probes first (deterministic order), then `trials` Gaussian random polynomials.
pub fn von_neumann_sampled(t: &OperatorTuple<DenseOperator>, cfg: &VnConfig) -> Result<ClassifierVerdict> {
    let n = t.n();
    let idx = multi_indices(n, cfg.degree);
    let pts = sample_bgamma(n, cfg.grid, cfg.budget)?;
    let mono_ops: Vec<DenseOperator> = idx.par_iter().map(|e| monomial(t.ops(), e)).collect();
    // rows: boundary points, columns: monomial values
    let mono_pts: Vec<Vec<Complex64>> = pts
        .par_iter()
        .map(|p| idx.iter().map(|e| e.iter().zip(&p.s).map(|(&m, z)| z.powu(m)).product()).collect())
        .collect();

    let eval = |coeffs: &[Complex64]| -> Trial {
        let h = t.dim();
        let mut op = DenseOperator::zeros(h, h);
        for (c, m) in coeffs.iter().zip(&mono_ops) {
            if *c != Complex64::new(0.0, 0.0) {
                op = &op + &m.scale(*c);
            }
        }
        let sup = mono_pts
            .iter()
            .map(|row| row.iter().zip(coeffs).map(|(v, c)| v * c).sum::<Complex64>().norm())
            .fold(0.0, f64::max);
        let terms = idx.iter().cloned().zip(coeffs.iter().copied()).filter(|(_, c)| c.norm() > 0.0).collect();
        Trial { poly: Polynomial::new(n, terms).expect("consistent length"), norm: op.operator_norm(), sup }
    };

    let probes: Vec<Trial> = (0..idx.len())
        .into_par_iter()
        .map(|k| {
            let mut c = vec![Complex64::new(0.0, 0.0); idx.len()];
            c[k] = Complex64::new(1.0, 0.0);
            eval(&c)
        })
        .collect();
    let random: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            let c: Vec<Complex64> = (0..idx.len())
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re * scale, im * scale)
                })
                .collect();
            eval(&c)
        })
        .collect();

    let mut worst_ratio: f64 = 0.0;
    let mut violation: Option<&Trial> = None;
    for tr in probes.iter().chain(&random) {
        let excess = tr.norm - tr.sup * (1.0 + cfg.margin);
        if tr.sup > 0.0 {
            worst_ratio = worst_ratio.max(tr.norm / tr.sup);
        }
        if excess > cfg.tol && violation.is_none() {
            violation = Some(tr);
        }
    }
    let name = "von_neumann_sampled";
    let mut evidence = CheckReport::new();
    let verdict = match violation {
        Some(tr) => {
            let w = ViolationWitness {
                polynomial: tr.poly.clone(),
                operator_norm: tr.norm,
                sampled_sup: tr.sup,
                grid: cfg.grid,
                margin: cfg.margin,
                tol: cfg.tol,
            };
            evidence.push(CheckEntry::fail(name, tr.norm - tr.sup, cfg.tol, serde_json::to_value(&w)?));
            ClassifierVerdict::new(VerdictKind::ViolationCertificate, evidence).with_witness(w)
        }
        None => {
            evidence.push(
                CheckEntry::inconclusive(name, worst_ratio, cfg.tol)
                    .with_note(format!("max ‖g(S)‖/sup ratio {worst_ratio:.6} over {} polynomials", probes.len() + random.len())),
            );
            ClassifierVerdict::new(VerdictKind::NecessaryBatteryPassed, evidence)
        }
    };
    Ok(verdict)
}

/// Like [`von_neumann_sampled`] but reports a single entry, for use inside larger batteries.
pub fn von_neumann_entry(t: &OperatorTuple<DenseOperator>, cfg: &VnConfig) -> Result<CheckEntry> {
    let v = von_neumann_sampled(t, cfg)?;
    v.evidence.checks.into_iter().next().ok_or_else(|| Error::Degenerate("empty battery".into()))
}
