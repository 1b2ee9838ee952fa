/// `∫₀^{dt} (k² + (a + bτ)²) dτ`, written so that it stays accurate when the
/// sheared wavenumber is large compared to its change over the step.
#[inline]
pub fn heat_integral(k: f64, a: f64, b: f64, dt: f64) -> f64 {
    let mid = a + 0.5 * b * dt;
    dt * (k * k + mid * mid + b * b * dt * dt / 12.0)
}

/// Decay of mode `(k, ξ₀)` over `[s, s + dt]` under `y∂_x − Δ/A`, with the
/// wavenumber following `ξ₀ + k(s + τ)`:
/// `exp(−(1/A)∫₀^{dt} (k² + (ξ₀ + k(s+τ))²) dτ)`.
pub fn linear_propagator(k: f64, xi0: f64, s: f64, dt: f64, amplitude: f64) -> f64 {
    (-heat_integral(k, xi0 + k * s, k, dt) / amplitude).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_heat_mode() {
        assert_eq!(linear_propagator(0.0, 1.0, 3.0, 1.0, 1.0), (-1.0f64).exp());
    }

    #[test]
    fn enhanced_dissipation_signature() {
        for (t, a) in [(1.0, 1.0), (4.0, 100.0), (0.3, 7.0)] {
            let got = linear_propagator(1.0, 0.0, 0.0, t, a);
            let want = (-(t + t * t * t / 3.0) / a).exp();
            assert!(((got - want) / want).abs() < 1e-14);
        }
    }

    #[test]
    fn agrees_with_cubic_difference() {
        let (k, xi0, s, dt, a): (f64, f64, f64, f64, f64) = (2.0, -1.5, 0.7, 0.4, 3.0);
        let cubic = k * k * dt + ((xi0 + k * (s + dt)).powi(3) - (xi0 + k * s).powi(3)) / (3.0 * k);
        let want = (-cubic / a).exp();
        assert!((linear_propagator(k, xi0, s, dt, a) - want).abs() < 1e-15);
    }

    #[test]
    fn small_step_slope() {
        let (k, xi0, s, a) = (1.5, 0.3, 2.0, 10.0);
        let dt = 1e-7;
        let slope = (linear_propagator(k, xi0, s, dt, a) - 1.0) / dt;
        let want = -(k * k + (xi0 + k * s).powi(2)) / a;
        assert!((slope - want).abs() < 1e-6);
    }
}
