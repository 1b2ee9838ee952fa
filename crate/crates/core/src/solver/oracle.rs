use serde::Serialize;

use super::config::SimConfig;
use super::propagator::linear_propagator;
use super::run::run;
use crate::error::{Error, Result};
use crate::fmt::ser_sig;
use crate::spectral::{GridSpec, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub k: i64,
    #[serde(rename = "A", serialize_with = "ser_sig")]
    pub amplitude: f64,
    #[serde(serialize_with = "ser_sig")]
    pub t: f64,
    #[serde(serialize_with = "ser_sig")]
    pub dt: f64,
    pub steps: u64,
    pub remaps: usize,
    pub labels: Vec<(i64, i64)>,
    #[serde(serialize_with = "ser_sig")]
    pub max_rel_error: f64,
}

/// Runs the linear flow on a 2π box from unit modes `(k, 0)`, `(k, 1)`,
/// `(k, −2)`, `(0, 1)` and compares every sample with the closed form.
pub fn oracle_check(k: i64, amplitude: f64, t_end: f64, dt: f64) -> Result<OracleReport> {
    if k == 0 {
        return Err(Error::param("oracle needs k != 0"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::param(format!("t must be > 0, got {t_end}")));
    }
    let ka = k.unsigned_abs() as usize;
    let nx = (4 * ka).next_power_of_two().max(8);
    let reach = ka * (t_end.ceil() as usize + 1) + 2;
    let ny = (3 * reach).next_power_of_two().max(16);
    let two_pi = 2.0 * std::f64::consts::PI;
    let grid = GridSpec::new(nx, ny, two_pi, two_pi)?;
    let labels = vec![(k, 0), (k, 1), (k, -2), (0, 1)];
    let config = SimConfig {
        amplitude,
        grid,
        dt,
        t_end,
        nonlinear: false,
        sample_every: 1,
        track_modes: labels.clone(),
        ..Default::default()
    };
    config.validate()?;
    let mut n0 = SpectralField::zeros(grid);
    // A positive mean keeps the density nonnegative; it is not compared.
    n0.set_mode(0, 0, 5.0.into())?;
    for &(kx, ky) in &labels {
        n0.set_mode(kx, ky, 1.0.into())?;
    }
    let result = run(&config, n0, None)?;
    let mut worst = 0.0f64;
    for s in &result.samples {
        for (&(kx, ky), got) in labels.iter().zip(&s.modes) {
            // Labels move as η − kσ; the closed form is written for ξ₀ + kσ.
            let want = linear_propagator(-(kx as f64), ky as f64, 0.0, s.t, amplitude);
            if want > 1e-250 {
                worst = worst.max((got - want).abs() / want);
            }
        }
    }
    Ok(OracleReport {
        k,
        amplitude,
        t: result.final_state.t,
        dt,
        steps: result.summary.steps,
        remaps: result.summary.remaps,
        labels,
        max_rel_error: worst,
    })
}
