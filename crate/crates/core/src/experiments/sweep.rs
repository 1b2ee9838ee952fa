use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gaussian_bump, CRITICAL_MASS};
use crate::error::{Error, Result};
use crate::fmt::{ser_sig, ser_sig_opt, sig};
use crate::solver::{run, RunResult, RunStatus, SimConfig, TimeScale};
use crate::spectral::{y_norm, SpectralField};
use crate::threshold::{constant_report, ModelCase, ThresholdMode};

/// Amplitude list swept over a fixed bump of `mass_scale · 8π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub base: SimConfig,
    pub amplitudes: Vec<f64>,
    pub mass_scale: f64,
    pub horizon: f64,
}

impl Default for SweepPlan {
    fn default() -> Self {
        let grid = crate::spectral::GridSpec::new(128, 512, 32.0, 32.0).expect("valid grid");
        SweepPlan {
            base: SimConfig {
                alpha: 0.0,
                time_scale: TimeScale::Physical,
                grid,
                dt: 0.01,
                sample_every: 50,
                blowup_linf: super::NO_FLOW_LINF_CUTOFF,
                ..Default::default()
            },
            amplitudes: vec![1.0, 10.0, 100.0, 1000.0, 10000.0],
            mass_scale: 1.5,
            horizon: 20.0,
        }
    }
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.amplitudes.is_empty() {
            return Err(Error::param("sweep needs at least one amplitude"));
        }
        if self.amplitudes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::param("amplitudes must be strictly increasing"));
        }
        if !(self.mass_scale > 0.0 && self.mass_scale.is_finite()) {
            return Err(Error::param(format!("mass_scale must be > 0, got {}", self.mass_scale)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::param(format!("horizon must be > 0, got {}", self.horizon)));
        }
        for &a in &self.amplitudes {
            self.config_for(a).validate()?;
        }
        Ok(())
    }

    pub fn config_for(&self, amplitude: f64) -> SimConfig {
        SimConfig { amplitude, t_end: self.horizon, ..self.base.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "ser_sig")]
    pub amplitude: f64,
    pub status: RunStatus,
    #[serde(serialize_with = "ser_sig")]
    pub initial_linf: f64,
    #[serde(serialize_with = "ser_sig")]
    pub max_linf: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_dx13_n: f64,
    #[serde(serialize_with = "ser_sig")]
    pub x_w: f64,
    /// Completed with `‖n‖∞` never above three times its initial value.
    pub suppressed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub plan: SweepPlan,
    pub rows: Vec<SweepRow>,
    /// Smallest suppressed amplitude.
    #[serde(serialize_with = "ser_sig_opt")]
    pub a_star: Option<f64>,
    /// No completed run below an amplitude that blew up.
    pub monotone: bool,
    #[serde(serialize_with = "ser_sig_opt")]
    pub lambda_paper: Option<f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub lambda_sharp: Option<f64>,
    /// `Y_{m,ε}` norm of the `k ≠ 0` part of the initial density.
    #[serde(serialize_with = "ser_sig")]
    pub y_norm_nonzero_k: f64,
}

/// Runs every amplitude on up to `jobs` threads (0 = rayon default).
/// Rows come back in amplitude order regardless of scheduling.
pub fn suppression_sweep(plan: &SweepPlan, jobs: usize) -> Result<(SweepReport, Vec<RunResult>)> {
    plan.validate()?;
    let n0 = gaussian_bump(&plan.base.grid, plan.mass_scale * CRITICAL_MASS)?;
    let w0 = plan.base.coupled.then(|| SpectralField::zeros(plan.base.grid));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let runs: Vec<RunResult> = pool.install(|| {
        plan.amplitudes
            .par_iter()
            .map(|&a| run(&plan.config_for(a), n0.clone(), w0.clone()))
            .collect::<Result<Vec<_>>>()
    })?;

    let rows: Vec<SweepRow> = runs
        .iter()
        .map(|r| {
            let initial_linf = r.final_state.initial_linf;
            let completed = r.status == RunStatus::Completed;
            SweepRow {
                amplitude: r.config.amplitude,
                status: r.status.clone(),
                initial_linf,
                max_linf: r.summary.max_linf,
                x_n: r.summary.x_n,
                x_dx13_n: r.summary.x_dx13_n,
                x_w: r.summary.x_w,
                suppressed: completed && r.summary.max_linf <= 3.0 * initial_linf,
            }
        })
        .collect();
    let a_star = rows.iter().find(|r| r.suppressed).map(|r| r.amplitude);
    let last_blowup = rows.iter().rposition(|r| r.status.is_blowup());
    let first_completed = rows.iter().position(|r| r.status == RunStatus::Completed);
    let monotone = match (first_completed, last_blowup) {
        (Some(c), Some(b)) => c > b,
        _ => true,
    };

    let case = ModelCase { alpha: plan.base.alpha, coupled: plan.base.coupled };
    let report = constant_report(&plan.base.norm_params, &case, ThresholdMode::PaperSplit, None).ok();
    let y = y_norm(&n0, plan.base.norm_params.m, plan.base.norm_params.eps);
    Ok((
        SweepReport {
            plan: plan.clone(),
            rows,
            a_star,
            monotone,
            lambda_paper: report.as_ref().map(|r| r.lambda_paper),
            lambda_sharp: report.as_ref().map(|r| r.lambda_sharp),
            y_norm_nonzero_k: y.value,
        },
        runs,
    ))
}

fn status_cell(s: &RunStatus) -> String {
    match s {
        RunStatus::Completed => "completed".into(),
        RunStatus::Blowup { t, criterion } => format!("blowup at t={} ({criterion})", sig(*t)),
        RunStatus::NumericalFailure { t, reason } => format!("numerical-failure at t={} ({reason})", sig(*t)),
    }
}

/// Writes `plan.json`, `run_{i}.csv`, `summary.csv`, `summary.json` and
/// `report.md` into `dir`.
pub fn write_sweep_dir(dir: &Path, report: &SweepReport, runs: &[RunResult]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("plan.json"), serde_json::to_string_pretty(&report.plan)? + "\n")?;
    for (i, r) in runs.iter().enumerate() {
        fs::write(dir.join(format!("run_{i:02}.csv")), r.to_csv())?;
    }
    let mut csv = String::from("amplitude,status,initial_linf,max_linf,xnorm_n,xnorm_dx13_n,xnorm_w,suppressed\n");
    for r in &report.rows {
        let status = match r.status {
            RunStatus::Completed => "completed",
            RunStatus::Blowup { .. } => "blowup",
            RunStatus::NumericalFailure { .. } => "numerical-failure",
        };
        let _ = writeln!(
            csv,
            "{},{status},{},{},{},{},{},{}",
            sig(r.amplitude),
            sig(r.initial_linf),
            sig(r.max_linf),
            sig(r.x_n),
            sig(r.x_dx13_n),
            sig(r.x_w),
            r.suppressed
        );
    }
    fs::write(dir.join("summary.csv"), csv)?;
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(report)? + "\n")?;

    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), sig);
    let mut md = String::from("# Suppression sweep\n\n");
    let _ = writeln!(
        md,
        "Bump mass {}·8π, horizon {}, grid {}x{} on {}x{}, alpha {}, {}.\n",
        sig(report.plan.mass_scale),
        sig(report.plan.horizon),
        report.plan.base.grid.nx,
        report.plan.base.grid.ny,
        sig(report.plan.base.grid.lx),
        sig(report.plan.base.grid.ly),
        sig(report.plan.base.alpha),
        if report.plan.base.coupled { "coupled" } else { "uncoupled" }
    );
    md.push_str("| A | status | max linf | suppressed |\n|---|---|---|---|\n");
    for r in &report.rows {
        let _ = writeln!(md, "| {} | {} | {} | {} |", sig(r.amplitude), status_cell(&r.status), sig(r.max_linf), r.suppressed);
    }
    md.push_str("\n## Thresholds\n\n");
    let _ = writeln!(md, "- empirical A* (first suppressed amplitude): {}", opt(report.a_star));
    let _ = writeln!(md, "- monotone: {}", report.monotone);
    let _ = writeln!(md, "- analytic Lambda, paper-split: {}", opt(report.lambda_paper));
    let _ = writeln!(md, "- analytic Lambda, sharp: {}", opt(report.lambda_sharp));
    let _ = writeln!(md, "- Y norm of the k != 0 part of the bump: {}", sig(report.y_norm_nonzero_k));
    md.push_str(
        "\nA* is a property of this box, grid and horizon. Lambda is a sufficient bound for the \
         whole plane and is expected to exceed A* by orders of magnitude.\n",
    );
    fs::write(dir.join("report.md"), md)?;
    Ok(())
}
