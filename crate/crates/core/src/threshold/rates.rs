use serde::Serialize;

use super::params::{ModelCase, NormParams};
use super::special::beta_function;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RateKind {
    /// Uncoupled, `α > 0`.
    R1,
    /// `α = 0`, either model.
    R2,
    /// Coupled, `α > 0`.
    R3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFactor {
    pub kind: RateKind,
    /// `2^m (3/2)^ε max{√B(1/2−ε, m−1/2), √B(ε', m−1/2)}` with `ε' = ε` or
    /// `ε − 1/3` when `α = 0`.
    pub base: f64,
    /// Multiplier carrying the `α` dependence: `α^{-1/4}` for `r₁`,
    /// `max{1, α^{-1/4}}` for `r₃`, and 1 for `r₂`.
    pub alpha_factor: f64,
    pub value: f64,
}

/// `r₁`, `r₂` or `r₃` depending on the model case.
pub fn rate_factor(p: &NormParams, case: &ModelCase) -> Result<RateFactor> {
    case.validate()?;
    p.validate()?;
    let second = if case.alpha == 0.0 { p.eps - 1.0 / 3.0 } else { p.eps };
    if second <= 0.0 {
        return Err(Error::domain(format!(
            "alpha = 0 requires eps > 1/3 (Beta argument eps - 1/3 = {second})"
        )));
    }
    let b1 = beta_function(0.5 - p.eps, p.m - 0.5)?;
    let b2 = beta_function(second, p.m - 0.5)?;
    let base = 2f64.powf(p.m) * 1.5f64.powf(p.eps) * b1.max(b2).sqrt();
    let (kind, alpha_factor) = match (case.alpha > 0.0, case.coupled) {
        (false, _) => (RateKind::R2, 1.0),
        (true, false) => (RateKind::R1, case.alpha.powf(-0.25)),
        (true, true) => (RateKind::R3, case.alpha.powf(-0.25).max(1.0)),
    };
    Ok(RateFactor { kind, base, alpha_factor, value: base * alpha_factor })
}
