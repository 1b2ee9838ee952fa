use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Relative size of a `(0,0)` coefficient still treated as zero.
const MEAN_TOL: f64 = 1e-12;

fn mean_scale(f: &SpectralField) -> f64 {
    f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `ĉ = n̂/(α + k² + ξ²)`; with `α = 0` the data must be mean-free and
/// `ĉ(0,0) = 0`.
pub fn solve_chemoattractant(n: &SpectralField, alpha: f64) -> Result<SpectralField> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if alpha == 0.0 {
        let c00 = n.coeffs()[0];
        if c00.norm() > MEAN_TOL * mean_scale(n).max(f64::MIN_POSITIVE) && c00.norm() > 0.0 {
            let mass = c00.re * n.grid().area();
            return Err(Error::Solvability(format!(
                "-Δc = n has no periodic solution: n carries mass {mass} (subtract the mean or use alpha > 0)"
            )));
        }
    }
    let mut c = n.map_symbol(|k, xi| {
        let d = alpha + k * k + xi * xi;
        if d == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0 / d, 0.0)
        }
    });
    if alpha == 0.0 {
        c.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    }
    Ok(c)
}

/// `u = ∇^⊥Δ⁻¹ω`: `Φ̂ = −ω̂/(k²+ξ²)`, `û₁ = iξΦ̂`, `û₂ = −ikΦ̂`.
pub fn velocity_from_vorticity(w: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let w00 = w.coeffs()[0];
    if w00.norm() > MEAN_TOL * mean_scale(w).max(f64::MIN_POSITIVE) && w00.norm() > 0.0 {
        return Err(Error::Solvability(format!(
            "vorticity has nonzero mean {} and no periodic stream function",
            w00.re
        )));
    }
    let stream = |k: f64, xi: f64| {
        let d = k * k + xi * xi;
        if d == 0.0 {
            0.0
        } else {
            -1.0 / d
        }
    };
    let u1 = w.map_symbol(|k, xi| Complex64::new(0.0, xi * stream(k, xi)));
    let u2 = w.map_symbol(|k, xi| Complex64::new(0.0, -k * stream(k, xi)));
    Ok((u1, u2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, GridSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap()
    }

    fn single(kx: i64, ky: i64, v: Complex64) -> SpectralField {
        let mut f = SpectralField::zeros(grid());
        f.set_mode(kx, ky, v).unwrap();
        f
    }

    #[test]
    fn divisors() {
        let v = Complex64::new(0.7, -0.2);
        let c = solve_chemoattractant(&single(1, 0, v), 0.0).unwrap();
        assert_eq!(c.mode(1, 0), v);
        let c = solve_chemoattractant(&single(1, 1, v), 3.0).unwrap();
        assert!((c.mode(1, 1) - v / 5.0).norm() < 1e-16);
    }

    #[test]
    fn mass_without_decay_is_unsolvable() {
        let mut n = SpectralField::zeros(grid());
        n.set_mode(0, 0, Complex64::new(2.0, 0.0)).unwrap();
        let err = solve_chemoattractant(&n, 0.0).unwrap_err();
        assert!(matches!(err, Error::Solvability(ref m) if m.contains("mass")), "{err}");
        assert!(solve_chemoattractant(&n, 0.5).is_ok());
    }

    #[test]
    fn single_mode_velocities() {
        let v = Complex64::new(0.3, 0.1);
        let (u1, u2) = velocity_from_vorticity(&single(1, 0, v)).unwrap();
        assert_eq!(u1.mode(1, 0), Complex64::new(0.0, 0.0));
        assert!((u2.mode(1, 0) - Complex64::new(0.0, 1.0) * v).norm() < 1e-16);
        let (u1, u2) = velocity_from_vorticity(&single(0, 1, v)).unwrap();
        assert_eq!(u2.mode(0, 1), Complex64::new(0.0, 0.0));
        assert!((u1.mode(0, 1) + Complex64::new(0.0, 1.0) * v).norm() < 1e-16);
    }

    #[test]
    fn velocity_is_divergence_free() {
        let g = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut w = forward_transform(&g, &samples).unwrap().with_strain(0.37);
        w.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        let (u1, u2) = velocity_from_vorticity(&w).unwrap();
        let mut div = u1.dx();
        div.axpy(1.0, &u2.dy()).unwrap();
        let worst = div.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-16, "{worst}");
    }
}
