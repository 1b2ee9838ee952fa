use super::elliptic::velocity_from_vorticity;
use crate::error::Result;
use crate::spectral::{forward_transform, inverse_transform, SpectralField};

/// Right-hand-side fluxes before the `1/A` factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSet {
    /// `−∇·(n∇c)`.
    pub chemotaxis: SpectralField,
    /// `−u·∇n`, assembled as `−∇·(un)`.
    pub advect_n: Option<SpectralField>,
    /// `−u·∇ω`, assembled as `−∇·(uω)`.
    pub advect_w: Option<SpectralField>,
    /// `−∂_x n`.
    pub buoyancy: Option<SpectralField>,
}

pub(crate) fn physical(f: &SpectralField) -> Vec<f64> {
    inverse_transform(&f.clone().dealiased())
}

pub(crate) fn spectral(template: &SpectralField, samples: &[f64]) -> Result<SpectralField> {
    let mut out = forward_transform(template.grid(), samples)?.with_strain(template.strain());
    out.dealias();
    Ok(out)
}

fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Dealiased product `ab`; both factors are truncated to the retained band
/// first, so the result equals the exact convolution on that band.
pub fn product(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    a.check_compatible(b)?;
    spectral(a, &multiply(&physical(a), &physical(b)))
}

/// `−∇·(f v)` from physical samples of `f`, `v₁`, `v₂`.
fn neg_divergence(template: &SpectralField, f: &[f64], v1: &[f64], v2: &[f64]) -> Result<SpectralField> {
    let mut div = spectral(template, &multiply(f, v1))?.dx();
    div.axpy(1.0, &spectral(template, &multiply(f, v2))?.dy())?;
    div.scale(-1.0);
    Ok(div)
}

/// All quadratic fluxes. With `w` present the velocity is reconstructed
/// from it unless `u` is supplied.
pub fn nonlinear_fluxes(
    n: &SpectralField,
    c: &SpectralField,
    w: Option<&SpectralField>,
    u: Option<(&SpectralField, &SpectralField)>,
) -> Result<FluxSet> {
    n.check_compatible(c)?;
    let n_phys = physical(n);
    let cx = physical(&c.dx());
    let cy = physical(&c.dy());
    let chemotaxis = neg_divergence(n, &n_phys, &cx, &cy)?;

    let owned;
    let velocity = match (u, w) {
        (Some(u), _) => Some(u),
        (None, Some(w)) => {
            owned = velocity_from_vorticity(w)?;
            Some((&owned.0, &owned.1))
        }
        (None, None) => None,
    };
    let (mut advect_n, mut advect_w, mut buoyancy) = (None, None, None);
    if let Some((u1, u2)) = velocity {
        n.check_compatible(u1)?;
        n.check_compatible(u2)?;
        let u1p = physical(u1);
        let u2p = physical(u2);
        advect_n = Some(neg_divergence(n, &n_phys, &u1p, &u2p)?);
        if let Some(w) = w {
            n.check_compatible(w)?;
            advect_w = Some(neg_divergence(n, &physical(w), &u1p, &u2p)?);
        }
    }
    if w.is_some() {
        let mut b = n.dx();
        b.scale(-1.0);
        buoyancy = Some(b);
    }
    Ok(FluxSet { chemotaxis, advect_n, advect_w, buoyancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::solve_chemoattractant;
    use crate::spectral::GridSpec;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_band(g: GridSpec, rng: &mut ChaCha8Rng, strain: f64) -> SpectralField {
        let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        forward_transform(&g, &samples).unwrap().dealiased().with_strain(strain)
    }

    /// `−∇·(n∇c)` by direct double sum over retained modes.
    fn convolution_oracle(n: &SpectralField, c: &SpectralField) -> Vec<Complex64> {
        let g = *n.grid();
        let (ci, cj) = g.retained();
        let strain = n.strain();
        let lab = |p: i64, q: i64| {
            let k = p as f64 * g.dkx();
            (k, q as f64 * g.dky() - k * strain)
        };
        let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
        for p in -ci..=ci {
            for q in -cj..=cj {
                let (k, xi) = lab(p, q);
                let mut fx = Complex64::new(0.0, 0.0);
                let mut fy = Complex64::new(0.0, 0.0);
                for p2 in -ci..=ci {
                    for q2 in -cj..=cj {
                        let (p1, q1) = (p - p2, q - q2);
                        if p1.abs() > ci || q1.abs() > cj {
                            continue;
                        }
                        let (k2, xi2) = lab(p2, q2);
                        let term = n.mode(p1, q1) * c.mode(p2, q2);
                        fx += term * Complex64::new(0.0, k2);
                        fy += term * Complex64::new(0.0, xi2);
                    }
                }
                let v = -(Complex64::new(0.0, k) * fx + Complex64::new(0.0, xi) * fy);
                out[g.index_x(p).unwrap() * g.ny + g.index_y(q).unwrap()] = v;
            }
        }
        out
    }

    #[test]
    fn matches_convolution_oracle() {
        let g = GridSpec::new(8, 8, 2.0 * PI, 3.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for strain in [0.0, 0.8] {
            let n = random_band(g, &mut rng, strain);
            let c = random_band(g, &mut rng, strain);
            let f = nonlinear_fluxes(&n, &c, None, None).unwrap();
            let oracle = convolution_oracle(&n, &c);
            for (a, b) in f.chemotaxis.coeffs().iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn single_mode_product() {
        let g = GridSpec::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let mut n = SpectralField::zeros(g);
        n.set_mode(1, 0, Complex64::new(0.5, 0.0)).unwrap();
        let mut c = SpectralField::zeros(g);
        c.set_mode(0, 1, Complex64::new(0.0, 0.5)).unwrap();
        let f = nonlinear_fluxes(&n, &c, None, None).unwrap();
        let oracle = convolution_oracle(&n, &c);
        for (a, b) in f.chemotaxis.coeffs().iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_density_reduces_to_laplacian() {
        let g = GridSpec::new(32, 32, 2.0 * PI, 2.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_band(g, &mut rng, 0.0);
        let mut n = SpectralField::zeros(g);
        n.set_mode(0, 0, Complex64::new(2.5, 0.0)).unwrap();
        let f = nonlinear_fluxes(&n, &c, None, None).unwrap();
        // −n Δc with constant n.
        let expect = c.map_symbol(|k, xi| Complex64::new(2.5 * (k * k + xi * xi), 0.0));
        for (a, b) in f.chemotaxis.coeffs().iter().zip(expect.coeffs()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn divergence_form_conserves_mass() {
        let g = GridSpec::new(32, 32, 20.0, 20.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for strain in [0.0, 0.4] {
            let n = random_band(g, &mut rng, strain);
            let mut w = random_band(g, &mut rng, strain);
            w.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            let c = solve_chemoattractant(&n, 1.0).unwrap();
            let f = nonlinear_fluxes(&n, &c, Some(&w), None).unwrap();
            assert!(f.chemotaxis.coeffs()[0].norm() < 1e-13);
            assert!(f.advect_n.as_ref().unwrap().coeffs()[0].norm() < 1e-13);
            assert!(f.advect_w.as_ref().unwrap().coeffs()[0].norm() < 1e-13);
            assert!(f.chemotaxis.hermitian_defect() < 1e-13);
        }
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = SpectralField::zeros(GridSpec::new(8, 8, 7.0, 7.0).unwrap());
        let b = SpectralField::zeros(GridSpec::new(16, 8, 7.0, 7.0).unwrap());
        assert!(matches!(nonlinear_fluxes(&a, &b, None, None), Err(crate::Error::Shape(_))));
    }
}
