use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight exponents, exponential rate and multiplier coefficients of the
/// anisotropic energy method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    /// High-frequency exponent `m` of `⟨D_x⟩^m`.
    pub m: f64,
    /// Low-frequency exponent `ε` of `⟨1/D_x⟩^ε`.
    pub eps: f64,
    /// Rate `a` of the weight `exp(a A^{-1/3} |D_x|^{2/3} t)`.
    pub a: f64,
    /// Multiplier scale `Ξ`.
    pub xi: f64,
    pub theta1: f64,
    pub theta2: f64,
}

/// Chemoattractant decay rate and whether the fluid is coupled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelCase {
    pub alpha: f64,
    pub coupled: bool,
}

impl ModelCase {
    pub fn new(alpha: f64, coupled: bool) -> Result<Self> {
        let case = ModelCase { alpha, coupled };
        case.validate()?;
        Ok(case)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        Ok(())
    }
}

impl NormParams {
    /// `a = 1/(2000π)`, `Ξ = θ₁ = θ₂ = 1`, with `(ε, m) = (1/4, 9/10)` when
    /// `α > 0` and `(5/12, 7/10)` when `α = 0`.
    pub fn reference(alpha: f64) -> Self {
        let (eps, m) = if alpha > 0.0 { (0.25, 0.9) } else { (5.0 / 12.0, 0.7) };
        NormParams { m, eps, a: 1.0 / (2000.0 * PI), xi: 1.0, theta1: 1.0, theta2: 1.0 }
    }

    /// True when the parameters coincide with [`NormParams::reference`] for
    /// the given `α` branch.
    pub fn is_reference(&self, alpha: f64) -> bool {
        let r = NormParams::reference(alpha);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-14 * y.abs().max(1e-300);
        close(self.m, r.m)
            && close(self.eps, r.eps)
            && close(self.a, r.a)
            && close(self.xi, r.xi)
            && close(self.theta1, r.theta1)
            && close(self.theta2, r.theta2)
    }

    /// Positivity conditions on `(θ₁, θ₂, Ξ, a)` and the exponent window
    /// `0 < ε < 1/2 < m`.
    pub fn validate(&self) -> Result<()> {
        let NormParams { m, eps, a, xi, theta1, theta2 } = *self;
        for (name, v) in [("m", m), ("eps", eps), ("a", a), ("xi", xi), ("theta1", theta1), ("theta2", theta2)] {
            if !v.is_finite() {
                return Err(Error::param(format!("{name} must be finite, got {v}")));
            }
        }
        if !(theta1 > 0.0 && theta1 <= 1.0) {
            return Err(Error::param(format!("0 < theta1 <= 1 violated (theta1 = {theta1})")));
        }
        if !(theta2 > 0.0 && theta2 <= 1.0) {
            return Err(Error::param(format!("0 < theta2 <= 1 violated (theta2 = {theta2})")));
        }
        // Small slack: θ₁ = 2√θ₂ − θ₂ is the equality case (θ₁ = θ₂ = 1).
        if theta1 > 2.0 * theta2.sqrt() - theta2 + 1e-15 {
            return Err(Error::param(format!(
                "theta1 <= 2*sqrt(theta2) - theta2 violated ({theta1} > {})",
                2.0 * theta2.sqrt() - theta2
            )));
        }
        if !(theta2 * xi > 0.0 && theta2 * xi < 4.0 * PI) {
            return Err(Error::param(format!("0 < theta2*xi < 4*pi violated (theta2*xi = {})", theta2 * xi)));
        }
        if !(4.0 * PI * a > 0.0 && 4.0 * PI * a < theta1 * xi) {
            return Err(Error::param(format!(
                "0 < 4*pi*a < theta1*xi violated (4*pi*a = {}, theta1*xi = {})",
                4.0 * PI * a,
                theta1 * xi
            )));
        }
        if !(eps > 0.0 && eps < 0.5) {
            return Err(Error::param(format!("0 < eps < 1/2 violated (eps = {eps})")));
        }
        if !(m > 0.5) {
            return Err(Error::param(format!("m > 1/2 violated (m = {m})")));
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus `ε > 1/3` when `α = 0`.
    pub fn validate_for(&self, case: &ModelCase) -> Result<()> {
        case.validate()?;
        self.validate()?;
        if case.alpha == 0.0 && self.eps <= 1.0 / 3.0 {
            return Err(Error::param(format!("eps > 1/3 is required when alpha = 0 (eps = {})", self.eps)));
        }
        Ok(())
    }

    /// `θ₁Ξ/2π − 2a`, the enhanced-dissipation coefficient of the X norm.
    pub fn ed_coefficient(&self) -> f64 {
        self.theta1 * self.xi / (2.0 * PI) - 2.0 * self.a
    }

    /// `2 − θ₂Ξ/2π`, the vertical-dissipation coefficient of the X norm.
    pub fn vertical_coefficient(&self) -> f64 {
        2.0 - self.theta2 * self.xi / (2.0 * PI)
    }

    /// `Ξ/2π`, the inviscid-damping coefficient of the X norm.
    pub fn damping_coefficient(&self) -> f64 {
        self.xi / (2.0 * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_parameters_are_admissible() {
        for alpha in [0.0, 1.0] {
            let p = NormParams::reference(alpha);
            p.validate_for(&ModelCase { alpha, coupled: false }).unwrap();
            assert!(p.is_reference(alpha));
        }
    }

    #[test]
    fn rejects_each_violation() {
        let base = NormParams::reference(1.0);
        let bad = [
            NormParams { theta1: 0.0, ..base },
            NormParams { theta2: 1.5, ..base },
            NormParams { theta1: 1.0, theta2: 0.25, ..base },
            NormParams { xi: 20.0, ..base },
            NormParams { a: 1.0, ..base },
            NormParams { eps: 0.5, ..base },
            NormParams { m: 0.5, ..base },
        ];
        for p in bad {
            assert!(matches!(p.validate(), Err(Error::Parameter(_))), "{p:?}");
        }
    }

    #[test]
    fn alpha_zero_needs_eps_above_one_third() {
        let p = NormParams { eps: 0.3, ..NormParams::reference(0.0) };
        let err = p.validate_for(&ModelCase { alpha: 0.0, coupled: false }).unwrap_err();
        assert!(err.to_string().contains("eps > 1/3"));
        p.validate_for(&ModelCase { alpha: 0.5, coupled: false }).unwrap();
    }
}
