use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::params::ModelCase;
use crate::error::{Error, Result};

/// Norms of the initial data entering the bootstrap sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InitialNorms {
    /// `‖n_in‖_Y`.
    pub y_n: f64,
    /// `‖|D_x|^{1/3} n_in‖_Y`, used by the coupled model only.
    #[serde(default)]
    pub y_dx13_n: f64,
    /// `‖ω_in‖_Y`, used by the coupled model only.
    #[serde(default)]
    pub y_w: f64,
    pub mass: f64,
    pub linf: f64,
}

/// `Q, Q∞` for the uncoupled model or `K, K∞` for the coupled one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapSizes {
    pub coupled: bool,
    pub size: f64,
    pub size_inf: f64,
}

pub fn bootstrap_sizes(norms: &InitialNorms, case: &ModelCase) -> Result<BootstrapSizes> {
    case.validate()?;
    let InitialNorms { y_n, y_dx13_n, y_w, mass, linf } = *norms;
    for (name, v) in [("y_n", y_n), ("y_dx13_n", y_dx13_n), ("y_w", y_w), ("mass", mass), ("linf", linf)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    let size = if case.coupled {
        (y_w * y_w + y_n * y_n + y_dx13_n * y_dx13_n + 1.0).sqrt()
    } else {
        (y_n * y_n + 1.0).sqrt()
    };
    let s = 1.01 * size;
    let bracket = if case.alpha > 0.0 {
        (2.0 * PI * case.alpha).powf(-0.5) * s * s + 1.0
    } else {
        let riesz = 3.0 + 2.0 * 2f64.sqrt();
        4.0 / (PI * PI) * riesz * riesz * (s + mass).powi(2) + 1.0
    };
    let size_inf = 128.0 * bracket * (s + mass + linf + 1.0);
    Ok(BootstrapSizes { coupled: case.coupled, size, size_inf })
}
