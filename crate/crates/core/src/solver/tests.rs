use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{nonlinear_rhs, shift_labels};
use super::*;
use crate::spectral::{inverse_transform, GridSpec, SpectralField};

/// Hermitian field with random coefficients on `|kx| ≤ bx`, `|ky| ≤ by`.
fn random_band(grid: GridSpec, bx: i64, by: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    for kx in -bx..=bx {
        for ky in -by..=by {
            if (kx, ky) == (0, 0) {
                continue;
            }
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set_mode(kx, ky, v).unwrap();
        }
    }
    f
}

fn quiet(mut c: SimConfig) -> SimConfig {
    c.negativity_warn = 1e30;
    c.negativity_fail = 1e30;
    c.blowup_linf = 1e30;
    c.blowup_tail = 1.0;
    c
}

#[test]
fn linear_scheme_is_exact_over_a_thousand_steps() {
    let grid = GridSpec::new(8, 256, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    let amp = 50.0;
    let cfg = quiet(SimConfig {
        amplitude: amp,
        grid,
        dt: 0.02,
        t_end: 20.0,
        nonlinear: false,
        sample_every: 1000,
        ..Default::default()
    });
    let n0 = random_band(grid, 2, 6, 1);
    let res = run(&cfg, n0.clone(), None).unwrap();
    assert_eq!(res.status, RunStatus::Completed);
    assert_eq!(res.summary.steps, 1000);
    let fin = &res.final_state;
    let remaps = fin.remaps as i64;
    assert_eq!(remaps, 20);
    let t = fin.t;
    let scale = n0.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for kx in -2i64..=2 {
        for ky in -6i64..=6 {
            let c0 = n0.mode(kx, ky);
            let k = kx as f64 * grid.dkx();
            let eta = ky as f64 * grid.dky();
            // ∫₀ᵗ k² + (η − kτ)² dτ
            let integral = if kx == 0 {
                (k * k + eta * eta) * t
            } else {
                k * k * t + (eta.powi(3) - (eta - k * t).powi(3)) / (3.0 * k)
            };
            let want = c0 * (-integral / amp).exp();
            let got = fin.n.mode(kx, ky - remaps * kx);
            worst = worst.max((got - want).norm() / scale);
        }
    }
    assert!(worst < 1e-13, "worst {worst:e}");
}

#[test]
fn remap_leaves_the_physical_field_unchanged() {
    let grid = GridSpec::new(32, 32, 4.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI).unwrap();
    let w = grid.remap_strain();
    let before = random_band(grid, 3, 6, 7).with_strain(w);
    let mut after = before.clone();
    let dropped = shift_labels(&mut after, 1, 0.0).unwrap();
    assert_eq!(dropped, 0.0);
    let a = inverse_transform(&before);
    let b = inverse_transform(&after);
    let mut worst = 0.0f64;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let ii = (i + j * grid.nx / grid.ny) % grid.nx;
            worst = worst.max((a[i * grid.ny + j] - b[ii * grid.ny + j]).abs());
        }
    }
    assert!(worst < 1e-11, "worst {worst:e}");
}

#[test]
fn single_mode_moves_to_the_shifted_label() {
    let grid = GridSpec::new(16, 16, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    let mut f = SpectralField::zeros(grid).with_strain(1.0);
    f.set_mode(2, 1, Complex64::new(0.5, 0.25)).unwrap();
    shift_labels(&mut f, 1, 0.0).unwrap();
    assert_eq!(f.mode(2, -1), Complex64::new(0.5, 0.25));
    assert_eq!(f.mode(2, 1), Complex64::new(0.0, 0.0));
}

#[test]
fn two_remaps_compose() {
    let grid = GridSpec::new(16, 64, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    let f = random_band(grid, 2, 4, 3).with_strain(2.0);
    let mut twice = f.clone();
    shift_labels(&mut twice, 1, 1.0).unwrap();
    shift_labels(&mut twice, 1, 0.0).unwrap();
    let mut once = SpectralField::zeros(grid);
    for kx in -2i64..=2 {
        for ky in -4i64..=4 {
            once.set_mode(kx, ky - 2 * kx, f.mode(kx, ky)).unwrap();
        }
    }
    for (a, b) in twice.coeffs().iter().zip(once.coeffs()) {
        assert_eq!(a, b);
    }
    assert_eq!(twice.strain(), 0.0);
}

#[test]
fn remap_reports_energy_leaving_the_band() {
    let grid = GridSpec::new(16, 16, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    let mut f = SpectralField::zeros(grid).with_strain(1.0);
    f.set_mode(3, -4, Complex64::new(1.0, 0.0)).unwrap();
    let dropped = shift_labels(&mut f, 1, 0.0).unwrap();
    assert!((dropped - 2.0 * grid.area()).abs() < 1e-9);
    assert_eq!(f.l2_norm(), 0.0);
}

#[test]
fn zero_data_stays_zero() {
    let cfg = SimConfig {
        grid: GridSpec::new(32, 32, 32.0, 32.0).unwrap(),
        t_end: 0.5,
        sample_every: 5,
        ..Default::default()
    };
    let res = run(&cfg, SpectralField::zeros(cfg.grid), None).unwrap();
    assert_eq!(res.status, RunStatus::Completed);
    for s in &res.samples {
        assert_eq!((s.mass, s.linf, s.l2_n, s.x_n, s.x_dx13_n), (0.0, 0.0, 0.0, 0.0, 0.0));
        assert!(s.modes.iter().all(|m| *m == 0.0));
    }
}

fn bump(grid: GridSpec, mass: f64) -> SpectralField {
    crate::experiments::gaussian_bump(&grid, mass).unwrap()
}

#[test]
fn mass_is_conserved_by_nonlinear_runs() {
    for (alpha, coupled) in [(0.0, false), (1.0, false), (0.0, true)] {
        let grid = GridSpec::new(128, 128, 32.0, 32.0).unwrap();
        let cfg = SimConfig {
            amplitude: 5.0,
            alpha,
            coupled,
            grid,
            dt: 0.05,
            t_end: 3.0,
            ..Default::default()
        };
        let n0 = bump(grid, 0.5 * 8.0 * std::f64::consts::PI);
        let w0 = coupled.then(|| random_band(grid, 2, 2, 9));
        let res = run(&cfg, n0, w0).unwrap();
        assert_eq!(res.status, RunStatus::Completed, "{alpha} {coupled}");
        assert!(res.summary.mass_drift < 1e-10, "drift {:e}", res.summary.mass_drift);
        assert!(res.final_state.n.hermitian_defect() < 1e-12);
    }
}

#[test]
fn small_data_deviates_quadratically_from_the_linear_flow() {
    let grid = GridSpec::new(32, 32, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    let base = quiet(SimConfig {
        amplitude: 1e6,
        alpha: 1.0,
        grid,
        dt: 0.01,
        t_end: 1.0,
        sample_every: 1000,
        ..Default::default()
    });
    let profile = random_band(grid, 2, 2, 11);
    let deviation = |eps: f64| {
        let mut f = profile.clone();
        f.scale(eps);
        let nl = run(&base, f.clone(), None).unwrap().final_state.n;
        let lin = run(&SimConfig { nonlinear: false, ..base.clone() }, f, None).unwrap().final_state.n;
        let mut d = nl;
        d.axpy(-1.0, &lin).unwrap();
        d.l2_norm()
    };
    let ratio = deviation(0.2) / deviation(0.1);
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn manufactured_solution_converges_at_fourth_order() {
    let grid = GridSpec::new(32, 32, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap();
    let cfg = quiet(SimConfig {
        amplitude: 1.0,
        alpha: 1.0,
        grid,
        t_end: 0.8,
        sample_every: 100_000,
        track_modes: vec![],
        ..Default::default()
    });
    let b0 = random_band(grid, 2, 2, 21);
    let b1 = random_band(grid, 2, 2, 22);
    let nu = cfg.diffusivity();
    let shear = cfg.shear_rate();
    // n*(t) = P(t) ⊙ (b0 + sin(2t) b1) with P the exact linear propagator.
    let exact = |t: f64, deriv: bool| {
        let mut out = SpectralField::zeros(grid).with_strain(shear * t);
        let (s, c) = (2.0 * t).sin_cos();
        for i in 0..grid.nx {
            let k = grid.kx(i);
            for j in 0..grid.ny {
                let p = (-nu * heat_integral(k, grid.ky(j), -k * shear, t)).exp();
                let idx = i * grid.ny + j;
                let v = if deriv { b1.coeffs()[idx] * (2.0 * c) } else { b0.coeffs()[idx] + b1.coeffs()[idx] * s };
                out.coeffs_mut()[idx] = v * p;
            }
        }
        out
    };
    let forcing = |t: f64, strain: f64| {
        assert!((strain - shear * t).abs() < 1e-12);
        let star = exact(t, false);
        let (nl, _, _) = nonlinear_rhs(&star, None, &cfg, false).unwrap();
        let mut f = exact(t, true);
        f.axpy(-1.0, &nl).unwrap();
        (f, None)
    };
    let mut errors = Vec::new();
    for dt in [0.02, 0.01, 0.005, 0.0025] {
        let c = SimConfig { dt, ..cfg.clone() };
        let res = run_with_forcing(&c, b0.clone(), None, Some(&forcing)).unwrap();
        assert_eq!(res.status, RunStatus::Completed);
        let mut d = res.final_state.n.clone();
        // t is snapped to t_end; the accumulated strain differs by round-off only.
        let want = exact(res.final_state.t, false).with_strain(d.strain());
        d.axpy(-1.0, &want).unwrap();
        errors.push(d.l2_norm());
    }
    for w in errors.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!((slope - 4.0).abs() < 0.3, "slopes from {errors:?}");
    }
}

#[test]
fn tail_energy_trips_the_detector() {
    let grid = GridSpec::new(128, 128, 32.0, 32.0).unwrap();
    let mut f = SpectralField::zeros(grid);
    f.set_mode(1, 0, Complex64::new(2.0f64.sqrt(), 0.0)).unwrap();
    f.set_mode(40, 0, Complex64::new(0.5, 0.0)).unwrap();
    // 0.25 / (2 + 0.25) of the energy sits beyond 2/3 of the band.
    let frac = tail_fraction(&f);
    assert!((frac - 0.25 / 2.25).abs() < 1e-14);
    assert!(frac > 0.1);
    let smooth = bump(grid, 1.0);
    assert!(tail_fraction(&smooth) < 1e-3);
    // Sheared content at large η with small k is not tail.
    let mut sheared = SpectralField::zeros(grid);
    sheared.set_mode(1, 40, Complex64::new(1.0, 0.0)).unwrap();
    assert_eq!(tail_fraction(&sheared), 0.0);
    sheared.set_mode(0, 40, Complex64::new(1.0, 0.0)).unwrap();
    assert!((tail_fraction(&sheared) - 0.5).abs() < 1e-14);
}

#[test]
fn supercritical_mass_without_flow_blows_up() {
    let grid = GridSpec::new(128, 128, 32.0, 32.0).unwrap();
    let cfg = SimConfig {
        amplitude: 0.0,
        time_scale: TimeScale::Physical,
        grid,
        dt: 0.01,
        t_end: 20.0,
        ..Default::default()
    };
    let res = run(&cfg, bump(grid, 1.5 * 8.0 * std::f64::consts::PI), None).unwrap();
    assert!(res.status.is_blowup(), "{:?}", res.status);
}

#[test]
fn csv_has_documented_header() {
    let cfg = SimConfig { grid: GridSpec::new(16, 16, 32.0, 32.0).unwrap(), t_end: 0.1, ..Default::default() };
    let res = run(&cfg, bump(cfg.grid, 1.0), None).unwrap();
    let csv = res.to_csv();
    assert!(csv.starts_with("t,mass,linf_n,xnorm_n,xnorm_dx13_n,xnorm_w,mode_k1_xi0_abs,moser_margin,"));
    assert_eq!(csv.lines().count(), res.samples.len() + 1);
}
