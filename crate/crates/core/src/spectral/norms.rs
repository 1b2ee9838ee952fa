use serde::Serialize;

use super::field::SpectralField;
use crate::error::{Error, Result};
use crate::threshold::NormParams;

/// `Y_{m,ε}` norm over the `k ≠ 0` columns, with the `k = 0` column reported
/// separately because its `⟨1/k⟩^ε` weight is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YNorm {
    pub value: f64,
    /// `L²` norm of the `k = 0` column.
    pub k0_l2: f64,
    /// True when `ε > 0` and the `k = 0` column carries content, i.e. the
    /// norm of the full field is `+∞`.
    pub singular: bool,
}

#[inline]
fn base_weight(k: f64, m: f64, eps: f64) -> f64 {
    let k2 = k * k;
    (1.0 + k2).powf(m) * (1.0 + 1.0 / k2).powf(eps)
}

/// Content below this fraction of the field's L² norm counts as absent.
const K0_RELATIVE: f64 = 1e-13;

pub fn y_norm(field: &SpectralField, m: f64, eps: f64) -> YNorm {
    let g = field.grid();
    let ny = g.ny;
    let mut sum = 0.0;
    let mut k0 = 0.0;
    for i in 0..g.nx {
        let k = g.kx(i);
        let row = &field.coeffs()[i * ny..(i + 1) * ny];
        let energy: f64 = row.iter().map(|c| c.norm_sqr()).sum();
        if i == 0 {
            k0 += energy;
        } else {
            sum += base_weight(k, m, eps) * energy;
        }
    }
    let area = g.area();
    let k0_l2 = (area * k0).sqrt();
    let total = field.l2_norm();
    YNorm {
        value: (area * sum).sqrt(),
        k0_l2,
        singular: eps > 0.0 && k0_l2 > K0_RELATIVE * total.max(f64::MIN_POSITIVE),
    }
}

/// Instantaneous squared pieces of the X norm, coefficients included.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct XPieces {
    /// Weighted `L²` norm squared (the `L^∞_t` piece).
    pub energy: f64,
    /// `(2 − θ₂Ξ/2π)/A · ‖… ∂_y f‖²`.
    pub vertical: f64,
    /// `(θ₁Ξ/2π − 2a)/A^{1/3} · ‖… |D_x|^{1/3} f‖²`.
    pub enhanced: f64,
    /// `2/A · ‖… ∂_x f‖²`.
    pub horizontal: f64,
    /// `Ξ/2π · ‖… ∂_x∇Δ⁻¹ f‖²`.
    pub damping: f64,
}

impl XPieces {
    pub fn dissipative_sum(&self) -> f64 {
        self.vertical + self.enhanced + self.horizontal + self.damping
    }
}

/// X-norm integrands at time `t` (rescaled units). With `dx13` the field is
/// additionally weighted by `|D_x|^{1/3}`.
pub fn x_norm_instant(field: &SpectralField, t: f64, p: &NormParams, amplitude: f64, dx13: bool) -> XPieces {
    let g = field.grid();
    let ny = g.ny;
    let a13 = amplitude.cbrt();
    let c_vert = p.vertical_coefficient() / amplitude;
    let c_ed = p.ed_coefficient() / a13;
    let c_hor = 2.0 / amplitude;
    let c_damp = p.damping_coefficient();
    let mut out = XPieces::default();
    for i in 1..g.nx {
        let k = g.kx(i);
        let k23 = (k * k).cbrt();
        let mut w = (2.0 * p.a * k23 * t / a13).exp() * base_weight(k, p.m, p.eps);
        if dx13 {
            w *= k23;
        }
        let (mut e, mut v, mut d) = (0.0, 0.0, 0.0);
        for j in 0..ny {
            let c2 = field.at(i, j).norm_sqr();
            if c2 == 0.0 {
                continue;
            }
            let (_, xi) = field.lab_wavenumbers(i, j);
            e += c2;
            v += xi * xi * c2;
            d += k * k / (k * k + xi * xi) * c2;
        }
        let area_w = g.area() * w;
        out.energy += area_w * e;
        out.vertical += c_vert * area_w * v;
        out.enhanced += c_ed * area_w * k23 * e;
        out.horizontal += c_hor * area_w * k * k * e;
        out.damping += c_damp * area_w * d;
    }
    out
}

/// Running X norm of one field history: sup of the energy piece and
/// left-endpoint time integrals of the four dissipative pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormAccumulator {
    pub params: NormParams,
    pub amplitude: f64,
    /// Apply the extra `|D_x|^{1/3}` weight.
    pub dx13: bool,
    pub running_max_sq: f64,
    /// Vertical, enhanced, horizontal, damping.
    pub integral_terms: [f64; 4],
    pub t_last: f64,
}

impl NormAccumulator {
    pub fn new(params: NormParams, amplitude: f64, dx13: bool) -> Self {
        NormAccumulator { params, amplitude, dx13, running_max_sq: 0.0, integral_terms: [0.0; 4], t_last: 0.0 }
    }

    /// Adds `[t, t + dt]` using the field at `t`.
    pub fn accumulate(&mut self, field: &SpectralField, t: f64, dt: f64) -> Result<XPieces> {
        if !(dt >= 0.0) {
            return Err(Error::Usage(format!("accumulation step must be nonnegative, got {dt}")));
        }
        if t < self.t_last - 1e-9 * self.t_last.abs().max(1.0) {
            return Err(Error::Usage(format!("accumulator time went backwards: {t} < {}", self.t_last)));
        }
        let x = x_norm_instant(field, t, &self.params, self.amplitude, self.dx13);
        self.running_max_sq = self.running_max_sq.max(x.energy);
        for (acc, v) in self.integral_terms.iter_mut().zip([x.vertical, x.enhanced, x.horizontal, x.damping]) {
            *acc += dt * v;
        }
        self.t_last = t + dt;
        Ok(x)
    }

    /// Folds the final state into the sup piece without adding time.
    pub fn observe(&mut self, field: &SpectralField, t: f64) {
        let x = x_norm_instant(field, t, &self.params, self.amplitude, self.dx13);
        self.running_max_sq = self.running_max_sq.max(x.energy);
    }

    pub fn total_sq(&self) -> f64 {
        self.running_max_sq + self.integral_terms.iter().sum::<f64>()
    }

    pub fn x_norm(&self) -> f64 {
        self.total_sq().sqrt()
    }
}
