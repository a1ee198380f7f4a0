//! Scalar geometry of the symmetrized polydisc: symmetrization, membership tests and
//! boundary sampling.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::DenseOperator;
use crate::serde_util::complex_vec;

/// Default cap on the number of boundary samples.
pub const DEFAULT_SAMPLE_BUDGET: usize = 1 << 22;

/// Point `(s₁, …, sₙ)` of ℂⁿ; membership is a query, not an invariant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymPoint {
    pub n: usize,
    #[serde(with = "complex_vec")]
    pub s: Vec<Complex64>,
}

impl SymPoint {
    pub fn new(s: Vec<Complex64>) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::Parameter(format!("need n ≥ 2 coordinates, got {}", s.len())));
        }
        if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter("coordinates must be finite".into()));
        }
        Ok(Self { n: s.len(), s })
    }

    /// Roots of `tⁿ − s₁tⁿ⁻¹ + s₂tⁿ⁻² − … + (−1)ⁿsₙ`, the preimage multiset under `s`.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.n;
        // companion matrix of tⁿ + c₁tⁿ⁻¹ + … + cₙ with cₖ = (−1)ᵏsₖ
        let mut comp = DenseOperator::zeros(n, n);
        for k in 0..n {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            comp.set_block(0, k, &DenseOperator::scalar(-(self.s[k] * sign)));
        }
        for i in 1..n {
            comp.set_block(i, i - 1, &DenseOperator::scalar(Complex64::new(1.0, 0.0)));
        }
        comp.eigenvalues()
    }
}

/// Membership verdict with the root multiset as witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub inside: bool,
    pub roots: Vec<Complex64>,
    pub max_modulus: f64,
}

/// Elementary symmetric polynomials of `z`, from the coefficients of `∏(t + zⱼ)`.
pub fn symmetrize(z: &[Complex64]) -> Result<SymPoint> {
    if z.len() < 2 {
        return Err(Error::Parameter(format!("need n ≥ 2 coordinates, got {}", z.len())));
    }
    let mut e = vec![Complex64::new(0.0, 0.0); z.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (j, zj) in z.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            e[k] = e[k] + zj * e[k - 1];
        }
    }
    SymPoint::new(e[1..].to_vec())
}

pub fn in_gamma(p: &SymPoint, tol: f64) -> Result<Membership> {
    let roots = p.roots()?;
    let max_modulus = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok(Membership { inside: max_modulus <= 1.0 + tol, roots, max_modulus })
}

pub fn on_bgamma(p: &SymPoint, tol: f64) -> Result<bool> {
    Ok(p.roots()?.iter().all(|r| (r.norm() - 1.0).abs() <= tol))
}

/// The `mⁿ` points `s(e^{2πik₁/m}, …, e^{2πikₙ/m})`, an under-approximation of the
/// distinguished boundary. Not deduplicated; index order is lexicographic in `(k₁, …, kₙ)`.
pub fn sample_bgamma(n: usize, m: usize, budget: usize) -> Result<Vec<SymPoint>> {
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    if m < 4 {
        return Err(Error::Parameter(format!("grid size must be at least 4, got {m}")));
    }
    let requested = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(Error::Budget { requested, budget });
    }
    let unit: Vec<Complex64> =
        (0..m).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).collect();
    (0..requested as usize)
        .into_par_iter()
        .map(|mut idx| {
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            for slot in z.iter_mut().rev() {
                *slot = unit[idx % m];
                idx /= m;
            }
            symmetrize(&z)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn symmetrize_examples() {
        assert!(close(&symmetrize(&[r(1.0); 3]).unwrap().s, &[r(3.0), r(3.0), r(1.0)], 0.0));
        assert!(close(&symmetrize(&[r(0.0); 4]).unwrap().s, &[r(0.0); 4], 0.0));
        assert!(close(&symmetrize(&[r(1.0), r(-1.0)]).unwrap().s, &[r(0.0), r(-1.0)], 0.0));
        assert!(symmetrize(&[r(1.0)]).is_err());
    }

    #[test]
    fn membership_examples() {
        let zero = SymPoint::new(vec![r(0.0); 3]).unwrap();
        assert!(in_gamma(&zero, 1e-9).unwrap().inside);
        let out = in_gamma(&SymPoint::new(vec![r(2.0), r(0.0)]).unwrap(), 1e-9).unwrap();
        assert!(!out.inside);
        assert!(out.roots.iter().any(|z| (z - r(2.0)).norm() < 1e-12));
        assert!(on_bgamma(&symmetrize(&[r(1.0), r(-1.0)]).unwrap(), 1e-9).unwrap());
        assert!(!on_bgamma(&symmetrize(&[r(0.5), r(1.0)]).unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn boundary_grid() {
        let pts = sample_bgamma(2, 4, DEFAULT_SAMPLE_BUDGET).unwrap();
        assert_eq!(pts.len(), 16);
        assert!(pts.iter().all(|p| on_bgamma(p, 1e-9).unwrap()));
        assert!(close(&pts[0].s, &[r(2.0), r(1.0)], 1e-15));
        let pts3 = sample_bgamma(3, 4, DEFAULT_SAMPLE_BUDGET).unwrap();
        assert!(close(&pts3[0].s, &[r(3.0), r(3.0), r(1.0)], 1e-15));
        assert!(sample_bgamma(1, 4, DEFAULT_SAMPLE_BUDGET).is_err());
        assert!(sample_bgamma(2, 3, DEFAULT_SAMPLE_BUDGET).is_err());
        assert!(matches!(sample_bgamma(4, 64, 1000), Err(Error::Budget { requested: 16_777_216, budget: 1000 })));
    }

    #[test]
    fn json_encoding() {
        let p = SymPoint::new(vec![Complex64::new(1.0, -0.5), r(0.25)]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"n":2,"s":[[1.0,-0.5],[0.25,0.0]]}"#);
        assert_eq!(serde_json::from_str::<SymPoint>(&text).unwrap(), p);
    }

    fn disc_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..=1.0, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), t))
    }

    proptest! {
        #[test]
        fn round_trip_in_closed_polydisc(z in prop::collection::vec(disc_point(), 2..6)) {
            let p = symmetrize(&z).unwrap();
            prop_assert!(in_gamma(&p, 1e-9).unwrap().inside);
        }

        #[test]
        fn roots_recover_coefficients(z in prop::collection::vec(disc_point(), 2..6)) {
            let p = symmetrize(&z).unwrap();
            let q = symmetrize(&p.roots().unwrap()).unwrap();
            prop_assert!(close(&p.s, &q.s, 1e-8));
        }

        #[test]
        fn membership_monotone_in_tol(
            s in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..5),
            t1 in 0.0f64..0.5,
            extra in 0.0f64..0.5,
        ) {
            let p = SymPoint::new(s.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
            if in_gamma(&p, t1).unwrap().inside {
                prop_assert!(in_gamma(&p, t1 + extra).unwrap().inside);
            }
        }
    }
}
