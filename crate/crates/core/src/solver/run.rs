use std::fmt::Write as _;
use std::io::Write;

use log::warn;
use serde::Serialize;

use super::config::SimConfig;
use super::state::{step, Forcing, SimState, StepError};
use crate::error::Result;
use crate::experiments::moser_bound_monitor;
use crate::fmt::{ser_sig, sig};
use crate::physics::{physical, solve_chemoattractant};
use crate::spectral::SpectralField;

/// Labels beyond this fraction of the retained band count as the tail.
pub const TAIL_BAND: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    Blowup { t: f64, criterion: String },
    NumericalFailure { t: f64, reason: String },
}

impl RunStatus {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Completed => 0,
            RunStatus::Blowup { .. } => 3,
            RunStatus::NumericalFailure { .. } => 4,
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, RunStatus::Blowup { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    #[serde(serialize_with = "ser_sig")]
    pub t: f64,
    #[serde(serialize_with = "ser_sig")]
    pub mass: f64,
    #[serde(serialize_with = "ser_sig")]
    pub linf: f64,
    #[serde(serialize_with = "ser_sig")]
    pub min_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub l2_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub l2_w: f64,
    #[serde(serialize_with = "ser_sig")]
    pub tail_fraction: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_dx13_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_w: f64,
    #[serde(serialize_with = "ser_sig")]
    pub moser_margin: f64,
    #[serde(serialize_with = "ser_sig")]
    pub strain: f64,
    pub remaps: usize,
    pub modes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    #[serde(serialize_with = "ser_sig")]
    pub t_final: f64,
    #[serde(serialize_with = "ser_sig")]
    pub mass_drift: f64,
    #[serde(serialize_with = "ser_sig")]
    pub max_linf: f64,
    #[serde(serialize_with = "ser_sig")]
    pub min_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub dropped_energy: f64,
    pub remaps: usize,
    pub steps: u64,
    pub halvings: u64,
    pub negativity_warnings: u64,
    #[serde(serialize_with = "ser_sig")]
    pub x_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_dx13_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_w: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub config: SimConfig,
    pub status: RunStatus,
    pub summary: RunSummary,
    pub tracked_labels: Vec<(i64, i64)>,
    pub samples: Vec<Sample>,
    #[serde(skip)]
    pub final_state: SimState,
}

impl RunResult {
    pub fn csv_header(&self) -> String {
        let mut h = String::from("t,mass,linf_n,xnorm_n,xnorm_dx13_n,xnorm_w");
        for (i, j) in &self.tracked_labels {
            let _ = write!(h, ",mode_k{i}_xi{j}_abs");
        }
        h.push_str(",moser_margin,min_n,l2_n,l2_w,tail_fraction,strain,remaps");
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for s in &self.samples {
            let mut row: Vec<String> = [s.t, s.mass, s.linf, s.x_n, s.x_dx13_n, s.x_w].iter().map(|v| sig(*v)).collect();
            row.extend(s.modes.iter().map(|m| sig(*m)));
            row.extend([s.moser_margin, s.min_n, s.l2_n, s.l2_w, s.tail_fraction, s.strain].iter().map(|v| sig(*v)));
            row.push(s.remaps.to_string());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Energy share beyond `TAIL_BAND` of the retained band, relative to all
/// energy except the mean. Shear carries `k ≠ 0` content to large `η` without
/// any loss of resolution, so the `η` band is only inspected on the `k = 0`
/// column; every column counts towards the `k` band.
pub fn tail_fraction(field: &SpectralField) -> f64 {
    let g = field.grid();
    let (ci, cj) = g.retained();
    let (ci, cj) = (ci.max(1) as f64, cj.max(1) as f64);
    let mut tail = 0.0;
    let mut total = 0.0;
    for i in 0..g.nx {
        let outer_x = g.mode_x(i).abs() as f64 / ci > TAIL_BAND;
        for j in 0..g.ny {
            if i == 0 && j == 0 {
                continue;
            }
            let e = field.at(i, j).norm_sqr();
            total += e;
            if outer_x || (i == 0 && g.mode_y(j).abs() as f64 / cj > TAIL_BAND) {
                tail += e;
            }
        }
    }
    if total > 0.0 {
        tail / total
    } else {
        0.0
    }
}

fn l4(samples: &[f64], cell: f64) -> f64 {
    (samples.iter().map(|v| v.powi(4)).sum::<f64>() * cell).powf(0.25)
}

fn take_sample(state: &mut SimState, config: &SimConfig) -> Result<Sample> {
    let g = *state.n.grid();
    let n_phys = physical(&state.n);
    let linf = n_phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_n = n_phys.iter().cloned().fold(f64::INFINITY, f64::min);

    let mut source = state.n.clone();
    if config.alpha == 0.0 {
        source.coeffs_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    }
    let c = solve_chemoattractant(&source, config.alpha)?;
    let cx = physical(&c.dx());
    let cy = physical(&c.dy());
    let grad: Vec<f64> = cx.iter().zip(&cy).map(|(a, b)| a.hypot(*b)).collect();
    let l2_n = state.n.l2_norm();
    state.moser.sup_grad_c_l4 = state.moser.sup_grad_c_l4.max(l4(&grad, g.cell_area()));
    state.moser.sup_n_l2 = state.moser.sup_n_l2.max(l2_n);

    Ok(Sample {
        t: state.t,
        mass: state.mass(),
        linf,
        min_n,
        l2_n,
        l2_w: state.w.as_ref().map_or(0.0, |w| w.l2_norm()),
        tail_fraction: tail_fraction(&state.n),
        x_n: state.acc_n.x_norm(),
        x_dx13_n: state.acc_dx13_n.x_norm(),
        x_w: state.acc_w.as_ref().map_or(0.0, |a| a.x_norm()),
        moser_margin: moser_bound_monitor(&state.moser, state.initial_mass.abs(), state.initial_linf, linf),
        strain: state.strain(),
        remaps: state.remaps,
        modes: state.tracked.iter().map(|m| state.tracked_amplitude(m)).collect(),
    })
}

/// Integrates `config` from `(n0, w0)` to `t_end`. Errors only for invalid
/// input; blow-up and numerical trouble are reported in the status.
pub fn run(config: &SimConfig, n0: SpectralField, w0: Option<SpectralField>) -> Result<RunResult> {
    run_with_forcing(config, n0, w0, None)
}

pub fn run_with_forcing(
    config: &SimConfig,
    n0: SpectralField,
    w0: Option<SpectralField>,
    forcing: Option<Forcing>,
) -> Result<RunResult> {
    let mut state = SimState::new(config, n0, w0)?;
    let mut samples = Vec::new();
    let mut max_linf = state.initial_linf;
    let mut min_seen = f64::INFINITY;
    let mut warnings = 0u64;
    // Undershoots from resolution loss precede blow-up detection, so a deep
    // negative minimum only fails runs that would otherwise complete.
    let mut negative_at: Option<(f64, f64)> = None;
    let end_tol = 1e-12 * config.t_end;

    let status = loop {
        if state.steps % config.sample_every as u64 == 0 {
            let s = take_sample(&mut state, config)?;
            max_linf = max_linf.max(s.linf);
            min_seen = min_seen.min(s.min_n);
            samples.push(s);
        }
        if state.t >= config.t_end - end_tol {
            break RunStatus::Completed;
        }
        let t0 = state.t;
        let tail = tail_fraction(&state.n);
        if config.nonlinear && tail > config.blowup_tail {
            break RunStatus::Blowup {
                t: t0,
                criterion: format!("tail fraction {} > {}", sig(tail), sig(config.blowup_tail)),
            };
        }
        let dt_max = config.dt.min(config.t_end - state.t);
        let report = match step(&mut state, config, dt_max, forcing) {
            Ok(Ok(r)) => r,
            Ok(Err(StepError::CflExhausted { dt_needed })) => {
                break RunStatus::NumericalFailure {
                    t: t0,
                    reason: format!("drift CFL needs dt = {} after {} halvings", sig(dt_needed), super::MAX_HALVINGS),
                };
            }
            Err(e) => break RunStatus::NumericalFailure { t: t0, reason: e.to_string() },
        };
        if let Some(p) = &report.probe {
            let linf = p.n_phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let min_n = p.n_phys.iter().cloned().fold(f64::INFINITY, f64::min);
            if !linf.is_finite() {
                break RunStatus::NumericalFailure { t: t0, reason: "non-finite density".into() };
            }
            max_linf = max_linf.max(linf);
            min_seen = min_seen.min(min_n);
            if linf > config.blowup_linf {
                break RunStatus::Blowup { t: t0, criterion: format!("linf {} > {}", sig(linf), sig(config.blowup_linf)) };
            }
            let scale = linf.max(1.0);
            if min_n < -config.negativity_fail * scale && negative_at.is_none() {
                negative_at = Some((t0, min_n));
            }
            if min_n < -config.negativity_warn * scale {
                warnings += 1;
                if warnings == 1 {
                    warn!("density minimum {} at t = {}", sig(min_n), sig(t0));
                }
            }
        }
        if (config.t_end - state.t).abs() <= end_tol {
            state.t = config.t_end;
        }
        if !state.n.is_finite() || state.w.as_ref().is_some_and(|w| !w.is_finite()) {
            break RunStatus::NumericalFailure { t: state.t, reason: "non-finite coefficients".into() };
        }
    };

    if !matches!(status, RunStatus::Completed) || samples.last().map_or(true, |s| s.t != state.t) {
        if let Ok(s) = take_sample(&mut state, config) {
            max_linf = max_linf.max(s.linf);
            min_seen = min_seen.min(s.min_n);
            samples.push(s);
        }
    }
    let status = match status {
        RunStatus::Completed if max_linf > config.blowup_linf => RunStatus::Blowup {
            t: state.t,
            criterion: format!("linf {} > {}", sig(max_linf), sig(config.blowup_linf)),
        },
        RunStatus::Completed if negative_at.is_some() => {
            let (t, min_n) = negative_at.unwrap_or_default();
            RunStatus::NumericalFailure { t, reason: format!("density minimum {} below tolerance", sig(min_n)) }
        }
        s => s,
    };

    let mass0 = state.initial_mass;
    let drift = (state.mass() - mass0).abs() / mass0.abs().max(f64::MIN_POSITIVE);
    let summary = RunSummary {
        t_final: state.t,
        mass_drift: if mass0 == 0.0 { state.mass().abs() } else { drift },
        max_linf,
        min_n: min_seen,
        dropped_energy: state.dropped_energy,
        remaps: state.remaps,
        steps: state.steps,
        halvings: state.halvings,
        negativity_warnings: warnings,
        x_n: state.acc_n.x_norm(),
        x_dx13_n: state.acc_dx13_n.x_norm(),
        x_w: state.acc_w.as_ref().map_or(0.0, |a| a.x_norm()),
    };
    Ok(RunResult {
        config: config.clone(),
        status,
        summary,
        tracked_labels: config.track_modes.clone(),
        samples,
        final_state: state,
    })
}
