use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::ser_sig;
use crate::solver::{run, RunStatus, SimConfig};
use crate::spectral::{GridSpec, SpectralField};

/// `(k²t + k²t³/3)/A`: the exponent of mode `(k, 0)` under `y∂_x − Δ/A`.
pub fn decay_model(k: f64, amplitude: f64, t: f64) -> f64 {
    k * k * (t + t * t * t / 3.0) / amplitude
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Fitted multiple of the model exponent (1 for the exact flow).
    pub c: f64,
    pub log_a0: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `log|a(t)| = log a₀ − c·decay_model(k, A, t)`.
pub fn decay_rate_fit(series: &[(f64, f64)], k: f64, amplitude: f64) -> Result<DecayFit> {
    if series.len() < 10 {
        return Err(Error::param(format!("decay fit needs at least 10 samples, got {}", series.len())));
    }
    if let Some((t, a)) = series.iter().find(|(_, a)| !(*a > 0.0)) {
        return Err(Error::domain(format!("amplitude {a} at t = {t} is not positive")));
    }
    let xs: Vec<f64> = series.iter().map(|(t, _)| decay_model(k, amplitude, *t)).collect();
    let ys: Vec<f64> = series.iter().map(|(_, a)| a.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("decay fit needs samples at distinct times"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(DecayFit { c: -slope, log_a0: intercept, r_squared })
}

/// First time at which `|a|` drops to `a(0)/e`, interpolating `log|a|`
/// linearly between samples.
pub fn efolding_time(series: &[(f64, f64)]) -> Option<f64> {
    let (_, a0) = *series.first()?;
    if !(a0 > 0.0) {
        return None;
    }
    let target = a0.ln() - 1.0;
    for w in series.windows(2) {
        let ((t0, a), (t1, b)) = (w[0], w[1]);
        let (la, lb) = (a.ln(), b.ln());
        if lb <= target {
            if la == lb {
                return Some(t1);
            }
            return Some(t0 + (t1 - t0) * (la - target) / (la - lb));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdRow {
    #[serde(serialize_with = "ser_sig")]
    pub amplitude: f64,
    /// Lattice index of the mode; its wavenumber is `index · 2π/lx`.
    pub index: i64,
    #[serde(serialize_with = "ser_sig")]
    pub k: f64,
    #[serde(serialize_with = "ser_sig")]
    pub t_e: f64,
    /// `(3A/k²)^{1/3}`.
    #[serde(serialize_with = "ser_sig")]
    pub predicted: f64,
    #[serde(serialize_with = "ser_sig")]
    pub fit_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdScan {
    pub rows: Vec<EdRow>,
    /// Exponents `p, q` of the joint fit `t_e ∝ A^p k^q`.
    #[serde(serialize_with = "ser_sig")]
    pub slope_amplitude: f64,
    #[serde(serialize_with = "ser_sig")]
    pub slope_k: f64,
    #[serde(serialize_with = "ser_sig")]
    pub max_relative_deviation: f64,
}

/// Runs the linear flow for every `(A, index)` pair with a single mode
/// `(index, 0)` and measures its e-folding time.
pub fn enhanced_dissipation_scan(amplitudes: &[f64], indices: &[i64], grid: GridSpec, dt: f64) -> Result<EdScan> {
    let pairs: Vec<(f64, i64)> = amplitudes.iter().flat_map(|&a| indices.iter().map(move |&i| (a, i))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(amplitude, index)| -> Result<EdRow> {
            let k = index as f64 * grid.dkx();
            let predicted = (3.0 * amplitude / (k * k)).cbrt();
            // Each remap (unit strain per lx/ly) moves the label by `index`;
            // stop before it leaves the retained band.
            let (_, cj) = grid.retained();
            let t_band = (cj - 1) as f64 / index.abs() as f64 * grid.remap_strain();
            let t_end = (1.5 * predicted).min(t_band);
            if t_end < 1.1 * predicted {
                return Err(Error::param(format!(
                    "ny = {} is too small to follow mode {index} at A = {amplitude}",
                    grid.ny
                )));
            }
            let config = SimConfig {
                amplitude,
                grid,
                dt,
                t_end,
                nonlinear: false,
                // About 150 samples per run; every sample costs inverse transforms.
                sample_every: ((predicted / (100.0 * dt)).floor() as usize).max(1),
                track_modes: vec![(index, 0)],
                ..Default::default()
            };
            let mut n0 = SpectralField::zeros(grid);
            n0.set_mode(index, 0, Complex64::new(1.0, 0.0))?;
            let res = run(&config, n0, None)?;
            if res.status != RunStatus::Completed {
                return Err(Error::Internal(format!("linear run ended with {:?}", res.status)));
            }
            let series: Vec<(f64, f64)> = res.samples.iter().map(|s| (s.t, s.modes[0])).collect();
            let t_e = efolding_time(&series)
                .ok_or_else(|| Error::Internal(format!("mode {index} did not decay by 1/e at A = {amplitude}")))?;
            let fit = decay_rate_fit(&series, k, amplitude)?;
            Ok(EdRow { amplitude, index, k, t_e, predicted, fit_c: fit.c })
        })
        .collect::<Result<Vec<_>>>()?;

    // log t_e = c₀ + p log A + q log k by normal equations.
    let design: Vec<[f64; 3]> = rows.iter().map(|r| [1.0, r.amplitude.ln(), r.k.ln()]).collect();
    let target: Vec<f64> = rows.iter().map(|r| r.t_e.ln()).collect();
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (row, y) in design.iter().zip(&target) {
        for a in 0..3 {
            atb[a] += row[a] * y;
            for b in 0..3 {
                ata[a][b] += row[a] * row[b];
            }
        }
    }
    let coef = solve3(ata, atb).ok_or_else(|| Error::param("scan needs at least two amplitudes and two modes"))?;
    let max_relative_deviation = rows.iter().map(|r| (r.t_e / r.predicted - 1.0).abs()).fold(0.0, f64::max);
    Ok(EdScan { rows, slope_amplitude: coef[1], slope_k: coef[2], max_relative_deviation })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..3 {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]])
}
