use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{DenseOperator, HermitianEigen};
use crate::error::{Error, Result};

/// `max |λ|` over the eigenvalues of `a`.
pub fn spectral_radius(a: &DenseOperator) -> Result<f64> {
    Ok(a.eigenvalues()?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Support function of the numerical range in direction `θ`:
/// `λ_max((e^{iθ}A + e^{-iθ}A*)/2)`.
fn support(a: &DenseOperator, theta: f64) -> f64 {
    let rotated = a.scale(Complex64::from_polar(1.0, theta));
    HermitianEigen::new(&rotated).max()
}

/// Numerical radius `ω(A) = sup{|⟨Ax,x⟩| : ‖x‖ = 1}`.
///
/// Samples the support function on `angular_samples` equally spaced angles,
/// then refines the best peaks by golden-section search. The result is a lower
/// bound that converges to `ω(A)` from below.
pub fn numerical_radius(a: &DenseOperator, angular_samples: usize) -> Result<f64> {
    if angular_samples < 8 {
        return Err(Error::Parameter(format!("angular_samples must be >= 8, got {angular_samples}")));
    }
    if !a.is_square() {
        return Err(Error::Parameter("numerical radius needs a square operator".into()));
    }
    let step = TAU / angular_samples as f64;
    let profile: Vec<f64> = (0..angular_samples).map(|k| support(a, k as f64 * step)).collect();
    let mut best = profile.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut peaks: Vec<usize> = (0..angular_samples)
        .filter(|&k| {
            let prev = profile[(k + angular_samples - 1) % angular_samples];
            let next = profile[(k + 1) % angular_samples];
            profile[k] >= prev && profile[k] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| profile[j].total_cmp(&profile[i]));
    for &k in peaks.iter().take(3) {
        let centre = k as f64 * step;
        best = best.max(golden_max(|t| support(a, t), centre - step, centre + step));
    }
    Ok(best.max(0.0))
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.max(f2);
    while hi - lo > 1e-10 * TAU {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        best = best.max(f1).max(f2);
    }
    best
}
