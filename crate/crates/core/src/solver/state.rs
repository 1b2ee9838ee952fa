use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{SimConfig, MAX_HALVINGS};
use super::propagator::heat_integral;
use crate::error::{Error, Result};
use crate::physics::{physical, solve_chemoattractant, spectral, velocity_from_vorticity};
use crate::spectral::{NormAccumulator, SpectralField};

/// External forcing `(F_n, F_ω)` evaluated at solver time `t` on fields of
/// the given strain. Used by manufactured-solution tests.
pub type Forcing<'a> = &'a (dyn Fn(f64, f64) -> (SpectralField, Option<SpectralField>) + Sync);

/// Running sups feeding the `L^∞` bound monitor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MoserTracker {
    pub sup_grad_c_l4: f64,
    pub sup_n_l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedMode {
    /// Label at `t = 0`.
    pub initial: (i64, i64),
    /// Label after the remaps so far.
    pub current: (i64, i64),
}

/// Densities and vorticity in comoving spectral form.
#[derive(Debug, Clone)]
pub struct SimState {
    pub n: SpectralField,
    pub w: Option<SpectralField>,
    pub t: f64,
    /// Time since the last remap.
    pub shear_phase: f64,
    pub acc_n: NormAccumulator,
    pub acc_dx13_n: NormAccumulator,
    pub acc_w: Option<NormAccumulator>,
    pub initial_mass: f64,
    pub initial_linf: f64,
    pub remaps: usize,
    pub dropped_energy: f64,
    pub halvings: u64,
    pub steps: u64,
    pub moser: MoserTracker,
    pub tracked: Vec<TrackedMode>,
}

/// Physical-space quantities of the state at the start of a step.
#[derive(Debug, Clone)]
pub struct Probe {
    pub n_phys: Vec<f64>,
    /// Largest `(|v₁ − σv₂|/Δx + |v₂|/Δy)` of the drift, prefactor included.
    pub drift_rate: f64,
}

#[derive(Debug, Clone)]
pub struct StepReport {
    pub dt: f64,
    pub halvings: u32,
    pub probe: Option<Probe>,
}

impl SimState {
    /// Dealiases the data and records the initial mass and `L^∞`. The frame
    /// strain of `n` is kept (restarts from a checkpoint); `w` adopts it.
    pub fn new(config: &SimConfig, n: SpectralField, w: Option<SpectralField>) -> Result<Self> {
        config.validate()?;
        if n.grid() != &config.grid {
            return Err(Error::Shape("initial density grid differs from the configured grid".into()));
        }
        if config.coupled != w.is_some() {
            return Err(Error::param(if config.coupled {
                "coupled runs need an initial vorticity"
            } else {
                "uncoupled runs take no vorticity"
            }));
        }
        let strain = n.strain();
        if !strain.is_finite() {
            return Err(Error::param("initial strain must be finite"));
        }
        let mut n = n.dealiased();
        n.symmetrize();
        let w = match w {
            Some(w) => {
                if w.grid() != &config.grid {
                    return Err(Error::Shape("initial vorticity grid differs from the configured grid".into()));
                }
                let mut w = w.dealiased().with_strain(strain);
                w.symmetrize();
                velocity_from_vorticity(&w)?;
                Some(w)
            }
            None => None,
        };
        let p = config.norm_params;
        let amp = config.norm_amplitude();
        let n_phys = physical(&n);
        let initial_linf = n_phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let initial_min = n_phys.iter().cloned().fold(f64::INFINITY, f64::min);
        if initial_min < -1e-10 {
            log::warn!("initial density has minimum {initial_min:e}");
        }
        let tracked = config
            .track_modes
            .iter()
            .map(|&m| TrackedMode { initial: m, current: m })
            .collect();
        let mut state = SimState {
            initial_mass: n.mean() * config.grid.area(),
            initial_linf,
            acc_n: NormAccumulator::new(p, amp, false),
            acc_dx13_n: NormAccumulator::new(p, amp, true),
            acc_w: w.as_ref().map(|_| NormAccumulator::new(p, amp, false)),
            n,
            w,
            t: 0.0,
            shear_phase: 0.0,
            remaps: 0,
            dropped_energy: 0.0,
            halvings: 0,
            steps: 0,
            moser: MoserTracker::default(),
            tracked,
        };
        remap_shear(&mut state)?;
        state.remaps = 0;
        let shear = config.shear_rate();
        if shear != 0.0 {
            state.shear_phase = state.strain() / shear;
        }
        Ok(state)
    }

    pub fn strain(&self) -> f64 {
        self.n.strain()
    }

    pub fn mass(&self) -> f64 {
        self.n.mean() * self.n.grid().area()
    }

    /// Current amplitude of a tracked mode.
    pub fn tracked_amplitude(&self, m: &TrackedMode) -> f64 {
        self.n.mode(m.current.0, m.current.1).norm()
    }
}

/// Right-hand side `−κ∇·(n(∇c + u))` and `−κ(∇·(uω) + ∂_x n)`.
pub(crate) fn nonlinear_rhs(
    n: &SpectralField,
    w: Option<&SpectralField>,
    config: &SimConfig,
    want_probe: bool,
) -> Result<(SpectralField, Option<SpectralField>, Option<Probe>)> {
    let kappa = config.diffusivity();
    let mut source = n.clone();
    if config.alpha == 0.0 {
        source.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    }
    let c = solve_chemoattractant(&source, config.alpha)?;
    let n_phys = physical(n);
    let mut v1 = physical(&c.dx());
    let mut v2 = physical(&c.dy());
    let mut fluid = None;
    if let Some(w) = w {
        let (u1, u2) = velocity_from_vorticity(w)?;
        let u1p = physical(&u1);
        let u2p = physical(&u2);
        for (a, b) in v1.iter_mut().zip(&u1p) {
            *a += b;
        }
        for (a, b) in v2.iter_mut().zip(&u2p) {
            *a += b;
        }
        fluid = Some((u1p, u2p));
    }

    let flux = |f: &[f64], a: &[f64], b: &[f64]| -> Result<SpectralField> {
        let fa: Vec<f64> = f.iter().zip(a).map(|(x, y)| x * y).collect();
        let fb: Vec<f64> = f.iter().zip(b).map(|(x, y)| x * y).collect();
        let mut d = spectral(n, &fa)?.dx();
        d.axpy(1.0, &spectral(n, &fb)?.dy())?;
        d.scale(-kappa);
        Ok(d)
    };
    let dn = flux(&n_phys, &v1, &v2)?;
    let dw = match (w, &fluid) {
        (Some(w), Some((u1p, u2p))) => {
            let mut d = flux(&physical(w), u1p, u2p)?;
            d.axpy(-kappa, &n.dx())?;
            Some(d)
        }
        _ => None,
    };

    let probe = want_probe.then(|| {
        let g = n.grid();
        let (hx, hy) = (g.lx / g.nx as f64, g.ly / g.ny as f64);
        let sigma = n.strain();
        let rate = v1
            .par_iter()
            .zip(&v2)
            .map(|(a, b)| (a - sigma * b).abs() / hx + b.abs() / hy)
            .reduce(|| 0.0, f64::max);
        Probe { n_phys, drift_rate: kappa * rate }
    });
    Ok((dn, dw, probe))
}

/// Per-label decay factors over `[σ₀, σ₀ + S·h]` for the first and second
/// half of a step.
fn half_step_factors(field: &SpectralField, config: &SimConfig, h: f64) -> (Vec<f64>, Vec<f64>) {
    let g = *field.grid();
    let nu = config.diffusivity();
    let shear = config.shear_rate();
    let sigma0 = field.strain();
    let half = 0.5 * h;
    let mut first = vec![0.0; g.len()];
    let mut second = vec![0.0; g.len()];
    first
        .par_chunks_mut(g.ny)
        .zip(second.par_chunks_mut(g.ny))
        .enumerate()
        .for_each(|(i, (f, s))| {
            let k = g.kx(i);
            let b = -k * shear;
            for j in 0..g.ny {
                let a = g.ky(j) - k * sigma0;
                f[j] = (-nu * heat_integral(k, a, b, half)).exp();
                s[j] = (-nu * heat_integral(k, a + b * half, b, half)).exp();
            }
        });
    (first, second)
}

fn combine(out: &mut SpectralField, terms: &[(&[f64], f64, &SpectralField)]) {
    // out = Σ factor ⊙ (scalar · field)
    let coeffs = out.coeffs_mut();
    for c in coeffs.iter_mut() {
        *c = Complex64::new(0.0, 0.0);
    }
    for (factor, scalar, field) in terms {
        for ((c, f), v) in coeffs.iter_mut().zip(factor.iter()).zip(field.coeffs()) {
            *c += v * (f * scalar);
        }
    }
}

fn with_strain(f: &SpectralField, strain: f64) -> SpectralField {
    f.clone().with_strain(strain)
}

/// One Lawson (integrating-factor) RK4 step of size `h` from the state's
/// strain. Stage fluxes are evaluated on the stage strain.
fn lawson_rk4(
    state: &mut SimState,
    config: &SimConfig,
    h: f64,
    k1: (SpectralField, Option<SpectralField>),
    forcing: Option<Forcing>,
) -> Result<()> {
    let shear = config.shear_rate();
    let s0 = state.strain();
    let s_mid = s0 + shear * 0.5 * h;
    let s_end = s0 + shear * h;
    let (e1, e2) = half_step_factors(&state.n, config, h);
    let full: Vec<f64> = e1.iter().zip(&e2).map(|(a, b)| a * b).collect();
    let ones = vec![1.0; e1.len()];

    let t0 = state.t;
    let eval = |n: &SpectralField, w: Option<&SpectralField>, t: f64| -> Result<(SpectralField, Option<SpectralField>)> {
        let (mut dn, mut dw) = if config.nonlinear {
            let (dn, dw, _) = nonlinear_rhs(n, w, config, false)?;
            (dn, dw)
        } else {
            (SpectralField::zeros(*n.grid()).with_strain(n.strain()), w.map(|w| SpectralField::zeros(*w.grid()).with_strain(w.strain())))
        };
        if let Some(f) = forcing {
            let (fnn, fw) = f(t, n.strain());
            dn.axpy(1.0, &fnn)?;
            if let (Some(dw), Some(fw)) = (dw.as_mut(), fw) {
                dw.axpy(1.0, &fw)?;
            }
        }
        Ok((dn, dw))
    };

    let n0 = state.n.clone();
    let w0 = state.w.clone();
    let (k1n, k1w) = k1;

    // a = E_h (c0 + h/2 k1)
    let mut an = with_strain(&n0, s_mid);
    combine(&mut an, &[(&e1, 1.0, &n0), (&e1, 0.5 * h, &k1n)]);
    let mut aw = w0.as_ref().map(|w| with_strain(w, s_mid));
    if let (Some(aw), Some(w0), Some(k1w)) = (aw.as_mut(), w0.as_ref(), k1w.as_ref()) {
        combine(aw, &[(&e1, 1.0, w0), (&e1, 0.5 * h, k1w)]);
    }
    let (k2n, k2w) = eval(&an, aw.as_ref(), t0 + 0.5 * h)?;

    // b = E_h c0 + h/2 k2
    let mut bn = with_strain(&n0, s_mid);
    combine(&mut bn, &[(&e1, 1.0, &n0), (&ones, 0.5 * h, &k2n)]);
    let mut bw = w0.as_ref().map(|w| with_strain(w, s_mid));
    if let (Some(bw), Some(w0), Some(k2w)) = (bw.as_mut(), w0.as_ref(), k2w.as_ref()) {
        combine(bw, &[(&e1, 1.0, w0), (&ones, 0.5 * h, k2w)]);
    }
    let (k3n, k3w) = eval(&bn, bw.as_ref(), t0 + 0.5 * h)?;

    // d = E c0 + h E'_h k3
    let mut dn = with_strain(&n0, s_end);
    combine(&mut dn, &[(&full, 1.0, &n0), (&e2, h, &k3n)]);
    let mut dw = w0.as_ref().map(|w| with_strain(w, s_end));
    if let (Some(dw), Some(w0), Some(k3w)) = (dw.as_mut(), w0.as_ref(), k3w.as_ref()) {
        combine(dw, &[(&full, 1.0, w0), (&e2, h, k3w)]);
    }
    let (k4n, k4w) = eval(&dn, dw.as_ref(), t0 + h)?;

    // c1 = E c0 + h/6 (E k1 + 2 E'_h k2 + 2 E'_h k3 + k4)
    let mut n1 = with_strain(&n0, s_end);
    combine(
        &mut n1,
        &[(&full, 1.0, &n0), (&full, h / 6.0, &k1n), (&e2, h / 3.0, &k2n), (&e2, h / 3.0, &k3n), (&ones, h / 6.0, &k4n)],
    );
    state.n = n1;
    if let (Some(w0), Some(k1w), Some(k2w), Some(k3w), Some(k4w)) = (w0.as_ref(), k1w.as_ref(), k2w.as_ref(), k3w.as_ref(), k4w.as_ref()) {
        let mut w1 = with_strain(w0, s_end);
        combine(
            &mut w1,
            &[(&full, 1.0, w0), (&full, h / 6.0, k1w), (&e2, h / 3.0, k2w), (&e2, h / 3.0, k3w), (&ones, h / 6.0, k4w)],
        );
        state.w = Some(w1);
    }
    Ok(())
}

/// Relabels `η → η − k·W` per window crossed so that `|σ| < W`. Returns the
/// energy of labels pushed out of the retained band.
pub fn remap_shear(state: &mut SimState) -> Result<f64> {
    let window = state.n.grid().remap_strain();
    let mut dropped = 0.0;
    while state.strain().abs() >= window * (1.0 - 1e-12) {
        let dir: i64 = if state.strain() > 0.0 { 1 } else { -1 };
        let new_strain = state.strain() - dir as f64 * window;
        dropped += shift_labels(&mut state.n, dir, new_strain)?;
        if let Some(w) = state.w.as_mut() {
            dropped += shift_labels(w, dir, new_strain)?;
        }
        for m in &mut state.tracked {
            m.current.1 -= dir * m.current.0;
        }
        state.remaps += 1;
    }
    state.dropped_energy += dropped;
    Ok(dropped)
}

/// Moves `c(i, j)` to `c(i, j − dir·i)` and sets the strain.
pub(crate) fn shift_labels(field: &mut SpectralField, dir: i64, new_strain: f64) -> Result<f64> {
    let g = *field.grid();
    let (ci, cj) = g.retained();
    let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut dropped = 0.0;
    for i in 0..g.nx {
        let kx = g.mode_x(i);
        for j in 0..g.ny {
            let c = field.at(i, j);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ky = g.mode_y(j) - dir * kx;
            if kx.abs() <= ci && ky.abs() <= cj {
                let jj = g.index_y(ky).ok_or_else(|| Error::Internal(format!("label {ky} off the lattice")))?;
                out[i * g.ny + jj] = c;
            } else {
                dropped += g.area() * c.norm_sqr();
            }
        }
    }
    *field = SpectralField::from_coeffs(g, out)?.with_strain(new_strain);
    Ok(dropped)
}

/// Outcome of [`step`] beyond the state update.
#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    /// The drift bound stayed below `dt / 2^MAX_HALVINGS`.
    CflExhausted { dt_needed: f64 },
}

/// Advances by at most `dt_max` (the base step, or less near a sample or
/// the end time), halving while the drift CFL bound is violated.
pub fn step(state: &mut SimState, config: &SimConfig, dt_max: f64, forcing: Option<Forcing>) -> Result<std::result::Result<StepReport, StepError>> {
    let (k1, probe) = if config.nonlinear {
        let (dn, dw, probe) = nonlinear_rhs(&state.n, state.w.as_ref(), config, true)?;
        ((dn, dw), probe)
    } else {
        let z = SpectralField::zeros(config.grid).with_strain(state.strain());
        ((z.clone(), state.w.as_ref().map(|_| z)), None)
    };
    let (mut k1n, mut k1w) = k1;
    if let Some(f) = forcing {
        let (fnn, fw) = f(state.t, state.strain());
        k1n.axpy(1.0, &fnn)?;
        if let (Some(k), Some(fw)) = (k1w.as_mut(), fw) {
            k.axpy(1.0, &fw)?;
        }
    }

    let mut h = dt_max;
    let mut halvings = 0u32;
    if let Some(p) = &probe {
        let limit = if p.drift_rate > 0.0 { config.cfl / p.drift_rate } else { f64::INFINITY };
        while h > limit {
            if halvings == MAX_HALVINGS {
                return Ok(Err(StepError::CflExhausted { dt_needed: limit }));
            }
            h *= 0.5;
            halvings += 1;
        }
    }

    let factor = config.rescaled_time_factor();
    let tr = state.t * factor;
    let hr = h * factor;
    state.acc_n.accumulate(&state.n, tr, hr)?;
    state.acc_dx13_n.accumulate(&state.n, tr, hr)?;
    if let (Some(acc), Some(w)) = (state.acc_w.as_mut(), state.w.as_ref()) {
        acc.accumulate(w, tr, hr)?;
    }

    lawson_rk4(state, config, h, (k1n, k1w), forcing)?;
    state.t += h;
    state.steps += 1;
    state.halvings += halvings as u64;
    remap_shear(state)?;
    let shear = config.shear_rate();
    state.shear_phase = if shear != 0.0 { state.strain() / shear } else { state.shear_phase + h };
    Ok(Ok(StepReport { dt: h, halvings, probe }))
}
