use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::io::{create_dir, load_field, read_json, read_text, read_toml, resolve, save_field, write_text, Sidecar};
use crate::{ConstantsArgs, NormsArgs, OracleArgs, SolveArgs, SweepArgs};
use pks_core::experiments::{gaussian_bump, suppression_sweep, write_sweep_dir, SweepPlan, CRITICAL_MASS};
use pks_core::fmt::round_sig;
use pks_core::solver::{oracle_check, run};
use pks_core::spectral::{x_norm_instant, y_norm};
use pks_core::threshold::{constant_report, verify_paper_chain, InitialNorms};
use pks_core::{ModelCase, NormParams, SimConfig, SpectralField, ThresholdMode};

/// Version of the `summary.json` layout written by `solve`.
pub const SUMMARY_SCHEMA: u32 = 1;

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn constants(args: &ConstantsArgs) -> CliResult<i32> {
    if args.print_defaults {
        print!("{}", toml_string(&NormParams::reference(args.alpha))?);
        return Ok(0);
    }
    let case = ModelCase::new(args.alpha, args.coupled)?;
    let mut p = match &args.params {
        Some(path) => read_toml::<NormParams>(path)?,
        None => NormParams::reference(args.alpha),
    };
    for (slot, v) in [
        (&mut p.m, args.m),
        (&mut p.eps, args.eps),
        (&mut p.a, args.a),
        (&mut p.xi, args.xi),
        (&mut p.theta1, args.theta1),
        (&mut p.theta2, args.theta2),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    let mode = ThresholdMode::from_str(&args.mode)?;
    let norms: Option<InitialNorms> = args.norms.as_deref().map(read_json).transpose()?;
    let mut report = constant_report(&p, &case, mode, norms.as_ref())?;
    let mut code = 0;
    if args.verify_paper {
        let audit = verify_paper_chain()?;
        for e in &audit.entries {
            eprintln!("{} {}  lhs={} rhs={}", if e.pass { "PASS" } else { "FAIL" }, e.inequality, e.lhs, e.rhs);
        }
        eprintln!("{} checks, {} failures", audit.entries.len(), audit.failures());
        if !audit.all_pass() {
            code = 1;
        }
        report.attach_audit(&audit.entries);
    }
    emit(&(report.to_json()? + "\n"), args.out.as_deref())?;
    Ok(code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Zero,
    #[default]
    Bump,
    Checkpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitSpec {
    pub kind: InitKind,
    /// Bump mass in units of 8π.
    pub mass_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,
    /// Vorticity checkpoint for coupled runs (zero when absent).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vorticity: Option<PathBuf>,
}

impl Default for InitSpec {
    fn default() -> Self {
        InitSpec { kind: InitKind::Bump, mass_scale: 0.5, checkpoint: None, vorticity: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Write the final state as PKSC checkpoints.
    pub checkpoint: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { checkpoint: true }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveFile {
    pub sim: SimConfig,
    pub init: InitSpec,
    pub output: OutputSpec,
}

fn toml_string<T: Serialize>(v: &T) -> CliResult<String> {
    toml::to_string_pretty(v).map_err(|e| CliError::Usage(e.to_string()))
}

fn initial_data(file: &SolveFile, config_path: &Path) -> CliResult<(SpectralField, Option<SpectralField>)> {
    let grid = file.sim.grid;
    let n = match file.init.kind {
        InitKind::Zero => SpectralField::zeros(grid),
        InitKind::Bump => gaussian_bump(&grid, file.init.mass_scale * CRITICAL_MASS)?,
        InitKind::Checkpoint => {
            let p = file
                .init
                .checkpoint
                .as_ref()
                .ok_or_else(|| CliError::Usage("init.kind = \"checkpoint\" needs init.checkpoint".into()))?;
            load_field(&resolve(config_path, p))?
        }
    };
    let w = if file.sim.coupled {
        Some(match &file.init.vorticity {
            Some(p) => load_field(&resolve(config_path, p))?.with_strain(n.strain()),
            None => SpectralField::zeros(grid).with_strain(n.strain()),
        })
    } else {
        None
    };
    Ok((n, w))
}

pub fn solve(args: &SolveArgs) -> CliResult<i32> {
    if args.print_defaults {
        print!("{}", toml_string(&SolveFile::default())?);
        return Ok(0);
    }
    let path = args.config.as_deref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let file: SolveFile = read_toml(path)?;
    file.sim.validate()?;
    let (n0, w0) = initial_data(&file, path)?;
    create_dir(&args.out)?;
    write_text(&args.out.join("config.toml"), &toml_string(&file)?)?;

    let result = run(&file.sim, n0, w0)?;
    write_text(&args.out.join("series.csv"), &result.to_csv())?;
    let summary = json!({
        "schema_version": SUMMARY_SCHEMA,
        "status": result.status,
        "summary": result.summary,
        "tracked_labels": result.tracked_labels,
        "config": result.config,
    });
    write_text(&args.out.join("summary.json"), &pretty(&summary)?)?;
    if file.output.checkpoint {
        let st = &result.final_state;
        let side = Sidecar { strain: st.strain(), t: st.t, config: Some(file.sim.clone()) };
        save_field(&args.out.join("final_n.pksc"), &st.n, &side)?;
        if let Some(w) = &st.w {
            save_field(&args.out.join("final_w.pksc"), w, &side)?;
        }
    }
    eprintln!("{}", serde_json::to_string(&result.status)?);
    Ok(result.status.exit_code())
}

pub fn oracle(args: &OracleArgs) -> CliResult<i32> {
    let report = oracle_check(args.k, args.amplitude, args.t, args.dt)?;
    print!("{}", pretty(&report)?);
    Ok(0)
}

pub fn norms(args: &NormsArgs) -> CliResult<i32> {
    let field = load_field(&args.checkpoint)?;
    let p = NormParams::reference(args.alpha);
    let y = y_norm(&field, p.m, p.eps);
    let x = x_norm_instant(&field, args.t, &p, args.amplitude, false);
    let x13 = x_norm_instant(&field, args.t, &p, args.amplitude, true);
    let r = |v: f64| round_sig(v);
    let out = json!({
        "params": p,
        "strain": r(field.strain()),
        "mean": r(field.mean()),
        "l2": r(field.l2_norm()),
        "y": { "value": r(y.value), "k0_l2": r(y.k0_l2), "singular": y.singular },
        "x_pieces": pieces(&x),
        "x_pieces_dx13": pieces(&x13),
    });
    print!("{}", pretty(&out)?);
    Ok(0)
}

fn pieces(x: &pks_core::spectral::XPieces) -> serde_json::Value {
    json!({
        "energy": round_sig(x.energy),
        "vertical": round_sig(x.vertical),
        "enhanced": round_sig(x.enhanced),
        "horizontal": round_sig(x.horizontal),
        "damping": round_sig(x.damping),
    })
}

pub fn sweep(args: &SweepArgs) -> CliResult<i32> {
    if args.print_defaults {
        print!("{}", pretty(&SweepPlan::default())?);
        return Ok(0);
    }
    let path = args.plan.as_deref().ok_or_else(|| CliError::Usage("--plan is required".into()))?;
    let plan: SweepPlan = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Parse { path: path.into(), message: e.to_string() })?;
    plan.validate()?;
    let (report, runs) = suppression_sweep(&plan, args.jobs)?;
    write_sweep_dir(&args.out, &report, &runs)?;
    let short = json!({
        "a_star": report.a_star.map(round_sig),
        "monotone": report.monotone,
        "lambda_paper": report.lambda_paper.map(round_sig),
        "lambda_sharp": report.lambda_sharp.map(round_sig),
        "rows": report.rows,
    });
    print!("{}", pretty(&short)?);
    Ok(0)
}
