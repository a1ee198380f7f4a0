use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fundamental::{k_const, tuple_tol};
use crate::operator::DenseOperator;
use crate::report::CheckEntry;
use crate::tuple::OperatorTuple;

/// Isometry residuals of `(kβⁿSₙ − βʲSⱼ)(kI − βⁱSᵢ)⁻¹` and of the same quotient with
/// `i ↔ j`, where `j = n − i`. Requires `r(Sᵢ), r(Sⱼ) < k(i)`.
pub fn mobius_isometry_check(t: &OperatorTuple<DenseOperator>, i: usize, beta: Complex64, tol: f64) -> Result<CheckEntry> {
    let n = t.n();
    if i == 0 || i >= n {
        return Err(Error::Parameter(format!("index {i} outside 1..{}", n - 1)));
    }
    if (beta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("|β| = {} is not 1", beta.norm())));
    }
    let k = k_const(n, i) as f64;
    let j = n - i;
    for idx in [i, j] {
        let r = t.s(idx).spectral_radius()?;
        if r >= k {
            return Err(Error::SpectralRadiusTooLarge { index: idx, radius: r, bound: k });
        }
    }
    let quotient = |a: usize, b: usize| -> Result<DenseOperator> {
        let id = DenseOperator::identity(t.dim());
        let num = &t.last().scale(beta.powu(n as u32) * k) - &t.s(b).scale(beta.powu(b as u32));
        let den = &id.scale_re(k) - &t.s(a).scale(beta.powu(a as u32));
        Ok(&num * &den.inverse()?)
    };
    let r1 = quotient(i, j)?.isometry_defect();
    let r2 = quotient(j, i)?.isometry_defect();
    let worst = r1.max(r2);
    let bound = tuple_tol(t, tol);
    Ok(CheckEntry::judge(format!("mobius_isometric[i={i}]"), worst <= bound, worst, bound, || {
        json!({ "i": i, "beta": [beta.re, beta.im], "residuals": [r1, r2] })
    }))
}

/// [`mobius_isometry_check`] over every `i` and `samples` equally spaced `β`; one entry.
pub fn mobius_battery(t: &OperatorTuple<DenseOperator>, samples: usize, tol: f64) -> Result<CheckEntry> {
    let mut worst = 0.0f64;
    let mut failing = None;
    for s in 0..samples {
        let beta = Complex64::from_polar(1.0, std::f64::consts::TAU * s as f64 / samples as f64);
        for i in 1..t.n() {
            let e = mobius_isometry_check(t, i, beta, tol)?;
            worst = worst.max(e.residual);
            if e.is_fail() && failing.is_none() {
                failing = e.witness;
            }
        }
    }
    let bound = tuple_tol(t, tol);
    Ok(match failing {
        None => CheckEntry::pass("mobius_isometric", worst, bound).with_note(format!("{samples} β samples")),
        Some(w) => CheckEntry::fail("mobius_isometric", worst, bound, w),
    })
}
