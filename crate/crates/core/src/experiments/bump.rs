use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{forward_transform, GridSpec, SpectralField};

/// Bump width as a fraction of `lx`.
pub const BUMP_WIDTH_FRACTION: f64 = 1.0 / 32.0;

/// `(M/2πσ²)·exp(−|x − x₀|²/2σ²)` centred in the box with `σ = lx/32`,
/// projected to the dealiased band. The mean is then set so that the
/// discrete mass is exactly `M`.
pub fn gaussian_bump(grid: &GridSpec, mass: f64) -> Result<SpectralField> {
    grid.validate()?;
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::param(format!("bump mass must be finite and >= 0, got {mass}")));
    }
    let sigma = grid.lx * BUMP_WIDTH_FRACTION;
    let (x0, y0) = (0.5 * grid.lx, 0.5 * grid.ly);
    let peak = mass / (2.0 * PI * sigma * sigma);
    let mut samples = vec![0.0; grid.len()];
    for i in 0..grid.nx {
        let dx = grid.x(i) - x0;
        for j in 0..grid.ny {
            let dy = grid.y(j) - y0;
            samples[i * grid.ny + j] = peak * (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
        }
    }
    let mut f = forward_transform(grid, &samples)?.dealiased();
    f.coeffs_mut()[0] = Complex64::new(mass / grid.area(), 0.0);
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::inverse_transform;

    #[test]
    fn mass_is_exact_and_peak_is_centred() {
        let g = GridSpec::new(64, 64, 32.0, 32.0).unwrap();
        let f = gaussian_bump(&g, 8.0 * PI).unwrap();
        assert!((f.mean() * g.area() - 8.0 * PI).abs() < 1e-12);
        let v = inverse_transform(&f);
        let (imax, _) = v.iter().enumerate().fold((0, f64::MIN), |a, (i, x)| if *x > a.1 { (i, *x) } else { a });
        assert_eq!(imax, 32 * 64 + 32);
        assert!(f.hermitian_defect() == 0.0);
    }
}
