use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fundamental::k_const;
use crate::operator::DenseOperator;
use crate::report::CheckEntry;
use crate::tuple::OperatorTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PencilWhich {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PencilValue {
    pub i: usize,
    pub which: PencilWhich,
    pub alpha: Complex64,
    pub value: DenseOperator,
    pub min_eig: f64,
}

/// `k²(I − |α|²ⁿSₙ*Sₙ) + |α|²ⁱSᵢ*Sᵢ − |α|²⁽ⁿ⁻ⁱ⁾Sⱼ*Sⱼ − (Y + Y*)` with `j = n − i` and
/// `Y = kαⁱ(Sᵢ − |α|²⁽ⁿ⁻ⁱ⁾Sⱼ*Sₙ)`. The second pencil swaps the roles of `i` and `n − i`.
/// Hermitian by construction.
pub fn pencil(t: &OperatorTuple<DenseOperator>, i: usize, which: PencilWhich, alpha: Complex64, tol: f64) -> Result<PencilValue> {
    let n = t.n();
    if i == 0 || i >= n {
        return Err(Error::Parameter(format!("index {i} outside 1..{}", n - 1)));
    }
    if alpha.norm() > 1.0 + tol {
        return Err(Error::Parameter(format!("|α| = {} exceeds 1", alpha.norm())));
    }
    let (a, b) = match which {
        PencilWhich::First => (i, n - i),
        PencilWhich::Second => (n - i, i),
    };
    let k = k_const(n, i) as f64;
    let r2 = alpha.norm_sqr();
    let (sa, sb, sn) = (t.s(a), t.s(b), t.last());
    let h = t.dim();
    let id = DenseOperator::identity(h);
    let gram = |x: &DenseOperator| &x.adjoint() * x;
    let base = &(&id - &gram(sn).scale_re(r2.powi(n as i32))).scale_re(k * k)
        + &(&gram(sa).scale_re(r2.powi(a as i32)) - &gram(sb).scale_re(r2.powi(b as i32)));
    let inner = sa - &(&sb.adjoint() * sn).scale_re(r2.powi(b as i32));
    let y = inner.scale(alpha.powu(a as u32) * k);
    let value = &base - &(&y + &y.adjoint());
    let min_eig = if h == 0 { 0.0 } else { value.hermitian_eigen().min() };
    Ok(PencilValue { i, which, alpha, value, min_eig })
}

/// Both pencils at `samples` equally spaced `β ∈ 𝕋`, every `i`; pass iff all norms ≤ tol.
pub fn pencil_battery(t: &OperatorTuple<DenseOperator>, samples: usize, tol: f64) -> Result<CheckEntry> {
    let mut worst = 0.0f64;
    let mut witness = None;
    for s in 0..samples {
        let beta = Complex64::from_polar(1.0, std::f64::consts::TAU * s as f64 / samples as f64);
        for i in 1..t.n() {
            for which in [PencilWhich::First, PencilWhich::Second] {
                let p = pencil(t, i, which, beta, tol)?;
                let r = p.value.operator_norm();
                if r > worst {
                    worst = r;
                    if r > tol {
                        witness = Some(json!({ "i": i, "pencil": if which == PencilWhich::First { 1 } else { 2 }, "beta": [beta.re, beta.im], "norm": r }));
                    }
                }
            }
        }
    }
    Ok(match witness {
        None => CheckEntry::pass("pencils_vanish", worst, tol).with_note(format!("{samples} β samples")),
        Some(w) => CheckEntry::fail("pencils_vanish", worst, tol, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::symmetrize;

    #[test]
    fn zero_tuple_gives_k_squared() {
        let t = OperatorTuple::new(vec![DenseOperator::zeros(2, 2); 3], 1e-10).unwrap();
        let p = pencil(&t, 1, PencilWhich::First, Complex64::new(0.3, 0.4), 1e-10).unwrap();
        assert!((&p.value - &DenseOperator::identity(2).scale_re(9.0)).operator_norm() < 1e-14);
        assert!((p.min_eig - 9.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_boundary_point_vanishes() {
        let z: Vec<Complex64> = [0.4, 2.0, -1.1].iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        let t = OperatorTuple::scalars(&symmetrize(&z).unwrap().s).unwrap();
        let e = pencil_battery(&t, 32, 1e-12).unwrap();
        assert!(e.is_pass(), "{e:?}");
    }

    #[test]
    fn rejects_bad_arguments() {
        let t = OperatorTuple::scalars(&[Complex64::new(0.0, 0.0); 2]).unwrap();
        assert!(pencil(&t, 2, PencilWhich::First, Complex64::new(1.0, 0.0), 1e-10).is_err());
        assert!(pencil(&t, 1, PencilWhich::First, Complex64::new(1.1, 0.0), 1e-10).is_err());
    }
}
