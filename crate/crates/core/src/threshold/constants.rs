use std::f64::consts::PI;

use serde::Serialize;

use super::params::NormParams;
use crate::error::Result;

/// The nine closed-form constants of the bilinear and trilinear estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    /// Transport by the velocity field, from the space-time estimate.
    pub c_st: f64,
    pub c_ch1: f64,
    pub c_ch2: f64,
    /// `α = 0` variant of `c_ch2`.
    pub c_ch3: f64,
    pub c_fl1: f64,
    pub c_fl2: f64,
    /// `α = 0` variant of `c_fl2`.
    pub c_fl3: f64,
    /// `|D_x|^{1/3}`-weighted transport.
    pub c_hl: f64,
    /// Buoyancy coupling `∂_x n` in the vorticity equation.
    pub c_l: f64,
}

/// Three-decimal upper bounds printed for the reference parameters.
#[derive(Debug, Clone, Copy)]
pub struct PublishedBounds {
    pub c_l: f64,
    pub c_st: f64,
    pub c_hl: f64,
    pub c_ch1: f64,
    pub c_fl1: f64,
    pub c_ch2: f64,
    pub c_fl2: f64,
    pub c_ch3: f64,
    pub c_fl3: f64,
    /// Bound on `r₃` (and `r₁·α^{1/4}`) at `(ε, m) = (1/4, 9/10)`.
    pub r3: f64,
    /// Bound on `r₂` at `(ε, m) = (5/12, 7/10)`.
    pub r2: f64,
}

pub const PUBLISHED_BOUNDS: PublishedBounds = PublishedBounds {
    c_l: 12.592,
    c_st: 12.089,
    c_hl: 13.052,
    c_ch1: 4.111,
    c_fl1: 5.179,
    c_ch2: 3.551,
    c_fl2: 1.472,
    c_ch3: 3.915,
    c_fl3: 1.583,
    r3: 4.977,
    r2: 7.841,
};

impl PublishedBounds {
    pub fn as_constants(&self) -> BoundConstants {
        BoundConstants {
            c_st: self.c_st,
            c_ch1: self.c_ch1,
            c_ch2: self.c_ch2,
            c_ch3: self.c_ch3,
            c_fl1: self.c_fl1,
            c_fl2: self.c_fl2,
            c_fl3: self.c_fl3,
            c_hl: self.c_hl,
            c_l: self.c_l,
        }
    }
}

impl BoundConstants {
    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, f64); 9] {
        [
            ("c_st", self.c_st),
            ("c_ch1", self.c_ch1),
            ("c_ch2", self.c_ch2),
            ("c_ch3", self.c_ch3),
            ("c_fl1", self.c_fl1),
            ("c_fl2", self.c_fl2),
            ("c_fl3", self.c_fl3),
            ("c_hl", self.c_hl),
            ("c_l", self.c_l),
        ]
    }

    /// Every constant rounded up at the third decimal.
    pub fn rounded_up(&self) -> BoundConstants {
        let up = |x: f64| (x * 1000.0).ceil() / 1000.0;
        BoundConstants {
            c_st: up(self.c_st),
            c_ch1: up(self.c_ch1),
            c_ch2: up(self.c_ch2),
            c_ch3: up(self.c_ch3),
            c_fl1: up(self.c_fl1),
            c_fl2: up(self.c_fl2),
            c_fl3: up(self.c_fl3),
            c_hl: up(self.c_hl),
            c_l: up(self.c_l),
        }
    }
}

/// Evaluates the nine constants for an admissible parameter tuple.
pub fn bound_constants(p: &NormParams) -> Result<BoundConstants> {
    p.validate()?;
    let ed = p.ed_coefficient();
    let damp = p.damping_coefficient();
    let vert = p.vertical_coefficient();

    let prefactor = (2.0 * PI).powf(-0.5) * (1.0 + p.xi);
    let s43 = (4.0f64 / 3.0).sqrt();
    let two = 2.0f64;
    let three = 3.0f64;
    let ed34 = ed.powf(-0.75) * two.powf(-0.25);
    let ed12_vert12 = ed.powf(-0.5) * vert.powf(-0.5);
    let damp12_vert12 = damp.powf(-0.5) * vert.powf(-0.5);

    let c_st = prefactor * (two.powf(1.0 / 3.0) * s43 * ed34 + (3.0 + two.sqrt() + s43) * damp12_vert12);
    let c_ch1 = prefactor * two.powf(5.0 / 12.0) * s43 * ed34;
    let c_ch2 = prefactor * two.powf(-0.25) * (s43 + 1.0 + 0.5f64.sqrt()) * ed12_vert12;
    let c_ch3 = prefactor * two.powf(-0.25) * (s43 + 1.0 + 1.0) * ed12_vert12;
    let c_fl1 = prefactor * two.powf(0.75) * s43 * ed34;
    let c_fl2 = prefactor * (two.powf(25.0 / 12.0) + two.powf(-1.0 / 12.0)) / (3.0 * three.sqrt()) * ed12_vert12;
    let c_fl3 = prefactor * (two.powf(25.0 / 12.0) + two.powf(5.0 / 12.0)) / (3.0 * three.sqrt()) * ed12_vert12;
    let c_hl = prefactor
        * (three.powf(1.0 / 3.0) * s43 * ed34
            + (two.powf(1.0 / 3.0) + two.powf(1.0 / 6.0) + three.powf(1.0 / 3.0) * s43 + 1.0 + two.powf(-1.0 / 3.0))
                * damp12_vert12);
    let c_l = (1.0 + p.xi) / ed;

    Ok(BoundConstants { c_st, c_ch1, c_ch2, c_ch3, c_fl1, c_fl2, c_fl3, c_hl, c_l })
}
