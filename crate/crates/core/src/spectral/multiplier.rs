use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::threshold::NormParams;

/// Enhanced-dissipation multiplier `arctan(A^{-1/3}|k|^{-1/3} sgn(k) ξ) + π/2`,
/// equal to `π/2` at `k = 0`.
pub fn multiplier_m1(k: f64, xi: f64, amplitude: f64) -> f64 {
    if k == 0.0 {
        return FRAC_PI_2;
    }
    (amplitude.cbrt().recip() * k.abs().cbrt().recip() * k.signum() * xi).atan() + FRAC_PI_2
}

/// Inviscid-damping multiplier `arctan(ξ/k) + π/2`, equal to `π/2` at `k = 0`.
pub fn multiplier_m2(k: f64, xi: f64) -> f64 {
    if k == 0.0 {
        return FRAC_PI_2;
    }
    (xi / k).atan() + FRAC_PI_2
}

/// `M = Ξ(M₁ + M₂)/2π + 1`, so that `1 ≤ M ≤ 1 + Ξ`.
pub fn multiplier_m(k: f64, xi: f64, amplitude: f64, p: &NormParams) -> f64 {
    p.xi * (multiplier_m1(k, xi, amplitude) + multiplier_m2(k, xi)) / (2.0 * PI) + 1.0
}

/// Both sides of the pointwise ghost-weight inequality
/// `2πΞ⁻¹ k∂_ξM ≥ θ₁A^{-1/3}|k|^{2/3} − θ₂ξ²/A + k²/(k²+ξ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Rounding scale of the two sides.
    pub scale: f64,
}

impl SymbolCheck {
    /// `lhs ≥ rhs` up to a few ulps of the terms involved. Near `ξ = 0` the
    /// two sides agree to fourth order and differ only by rounding.
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - 1e-14 * self.scale
    }
}

pub fn dissipation_symbol_check(k: f64, xi: f64, amplitude: f64, p: &NormParams) -> SymbolCheck {
    let u = amplitude.cbrt().recip() * (k * k).cbrt();
    let damping = if k == 0.0 { 0.0 } else { k * k / (k * k + xi * xi) };
    let ed = if k == 0.0 {
        0.0
    } else {
        let z = xi / (amplitude.cbrt() * k.abs().cbrt());
        u / (1.0 + z * z)
    };
    let vertical = xi * xi / amplitude;
    let lhs = ed + damping;
    let rhs = p.theta1 * u - p.theta2 * vertical + damping;
    SymbolCheck { lhs, rhs, scale: lhs.abs() + u + vertical + damping }
}
