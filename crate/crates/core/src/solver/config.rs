use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::GridSpec;
use crate::threshold::NormParams;

/// Units of time and of the shear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TimeScale {
    /// `∂_t f + y∂_x f − Δf/A = −(1/A)(…)`: unit shear, `1/A` diffusion.
    #[default]
    Rescaled,
    /// `∂_t f + Ay∂_x f − Δf = −(…)`. `A = 0` switches the flow off.
    Physical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Shear amplitude `A`.
    pub amplitude: f64,
    pub alpha: f64,
    pub coupled: bool,
    pub time_scale: TimeScale,
    pub grid: GridSpec,
    /// Base time step; halved when the drift CFL bound requires it.
    pub dt: f64,
    pub t_end: f64,
    /// Courant number for the chemotactic and fluid drift.
    pub cfl: f64,
    pub blowup_linf: f64,
    pub blowup_tail: f64,
    pub norm_params: NormParams,
    pub sample_every: usize,
    /// Test hook: with `false` only the linear part is stepped.
    pub nonlinear: bool,
    /// Comoving labels `(i, j)` whose amplitude is recorded.
    pub track_modes: Vec<(i64, i64)>,
    /// `min n` below `-negativity_warn · max(1, ‖n‖∞)` is logged.
    pub negativity_warn: f64,
    /// `min n` below `-negativity_fail · max(1, ‖n‖∞)` ends the run.
    pub negativity_fail: f64,
}

pub const MAX_HALVINGS: u32 = 10;

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            amplitude: 100.0,
            alpha: 0.0,
            coupled: false,
            time_scale: TimeScale::Rescaled,
            grid: GridSpec::default(),
            dt: 0.01,
            t_end: 1.0,
            cfl: 0.5,
            blowup_linf: 1e3,
            blowup_tail: 0.1,
            norm_params: NormParams::reference(0.0),
            sample_every: 10,
            nonlinear: true,
            track_modes: vec![(1, 0)],
            negativity_warn: 1e-8,
            negativity_fail: 1e-4,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        let physical = self.time_scale == TimeScale::Physical;
        let amp_ok = if physical { self.amplitude >= 0.0 } else { self.amplitude > 0.0 };
        if !(amp_ok && self.amplitude.is_finite()) {
            return Err(Error::param(format!(
                "amplitude must be {} and finite, got {}",
                if physical { ">= 0" } else { "> 0" },
                self.amplitude
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::param(format!("t_end must be > 0, got {}", self.t_end)));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::param(format!("cfl must be > 0, got {}", self.cfl)));
        }
        if !(self.blowup_linf > 0.0) || !(self.blowup_tail > 0.0 && self.blowup_tail <= 1.0) {
            return Err(Error::param("blowup_linf must be > 0 and blowup_tail in (0, 1]"));
        }
        if self.sample_every == 0 {
            return Err(Error::param("sample_every must be >= 1"));
        }
        if !(self.negativity_warn >= 0.0 && self.negativity_fail >= self.negativity_warn) {
            return Err(Error::param("need 0 <= negativity_warn <= negativity_fail"));
        }
        self.norm_params.validate()?;
        Ok(())
    }

    /// Shear rate `S` of the `S y ∂_x` term.
    pub fn shear_rate(&self) -> f64 {
        match self.time_scale {
            TimeScale::Rescaled => 1.0,
            TimeScale::Physical => self.amplitude,
        }
    }

    /// Diffusivity and flux prefactor `1/A` or 1.
    pub fn diffusivity(&self) -> f64 {
        match self.time_scale {
            TimeScale::Rescaled => 1.0 / self.amplitude,
            TimeScale::Physical => 1.0,
        }
    }

    /// Factor turning solver time into the rescaled time of the X norm.
    pub fn rescaled_time_factor(&self) -> f64 {
        match self.time_scale {
            TimeScale::Physical if self.amplitude > 0.0 => self.amplitude,
            _ => 1.0,
        }
    }

    /// Amplitude used by the norm weights (1 when the flow is off).
    pub fn norm_amplitude(&self) -> f64 {
        if self.amplitude > 0.0 {
            self.amplitude
        } else {
            1.0
        }
    }
}
