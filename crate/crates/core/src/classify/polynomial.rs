use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::DenseOperator;
use crate::serde_util::{pair, unpair};

/// Exponent vectors `(m₁, …, mₙ)` with `Σmᵢ ≤ degree`, ordered by total degree, then
/// lexicographically descending (so `s₁` precedes `s₂` within a degree).
pub fn multi_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=degree {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, total);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for take in (0..=left).rev() {
        cur[pos] = take;
        fill(out, cur, pos + 1, left - take);
    }
    cur[pos] = 0;
}

/// `g(s₁, …, sₙ) = Σ c_m s^m`; operator evaluation multiplies `S₁^{m₁}⋯Sₙ^{mₙ}` in index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub n: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coeff: [f64; 2],
}

impl Polynomial {
    pub fn new(n: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Result<Self> {
        if terms.iter().any(|(e, _)| e.len() != n) {
            return Err(Error::Parameter("exponent vector length differs from n".into()));
        }
        Ok(Self { n, terms: terms.into_iter().map(|(exponents, c)| Term { exponents, coeff: pair(c) }).collect() })
    }

    /// The coordinate function `sᵢ` (1-based).
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Self::new(n, vec![(e, Complex64::new(1.0, 0.0))]).expect("consistent length")
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exponents.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval_point(&self, s: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                t.exponents.iter().zip(s).fold(unpair(t.coeff), |acc, (&m, z)| acc * z.powu(m))
            })
            .sum()
    }

    pub fn eval_operator(&self, ops: &[DenseOperator]) -> Result<DenseOperator> {
        if ops.len() != self.n {
            return Err(Error::Parameter(format!("polynomial in {} variables, {} operators", self.n, ops.len())));
        }
        let h = ops[0].rows();
        let mut acc = DenseOperator::zeros(h, h);
        for t in &self.terms {
            acc = &acc + &monomial(ops, &t.exponents).scale(unpair(t.coeff));
        }
        Ok(acc)
    }
}

/// `S₁^{m₁}⋯Sₙ^{mₙ}`.
pub fn monomial(ops: &[DenseOperator], exps: &[u32]) -> DenseOperator {
    let h = ops[0].rows();
    let mut out = DenseOperator::identity(h);
    for (s, &m) in ops.iter().zip(exps) {
        if m > 0 {
            out = &out * &s.pow(m);
        }
    }
    out
}
