use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Collocation grid and box of a shear-periodic field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    #[serde(default = "default_dealias")]
    pub dealias_fraction: f64,
}

fn default_dealias() -> f64 {
    2.0 / 3.0
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { nx: 128, ny: 128, lx: 32.0 * PI, ly: 32.0 * PI, dealias_fraction: 2.0 / 3.0 }
    }
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        let g = GridSpec { nx, ny, lx, ly, dealias_fraction: 2.0 / 3.0 };
        g.validate()?;
        Ok(g)
    }

    pub fn with_dealias(mut self, fraction: f64) -> Result<Self> {
        self.dealias_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n < 4 || !n.is_power_of_two() {
                return Err(Error::param(format!("{name} must be a power of two >= 4, got {n}")));
            }
        }
        for (name, l) in [("lx", self.lx), ("ly", self.ly)] {
            // Tolerate the rounding in 2π itself.
            if !(l.is_finite() && l >= 2.0 * PI * (1.0 - 1e-14)) {
                return Err(Error::param(format!("{name} must be >= 2*pi, got {l}")));
            }
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::param(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Signed mode number of FFT index `i` along x, in `[-nx/2, nx/2)`.
    #[inline]
    pub fn mode_x(&self, i: usize) -> i64 {
        signed(i, self.nx)
    }

    #[inline]
    pub fn mode_y(&self, j: usize) -> i64 {
        signed(j, self.ny)
    }

    #[inline]
    pub fn index_x(&self, mode: i64) -> Option<usize> {
        unsigned(mode, self.nx)
    }

    #[inline]
    pub fn index_y(&self, mode: i64) -> Option<usize> {
        unsigned(mode, self.ny)
    }

    pub fn dkx(&self) -> f64 {
        2.0 * PI / self.lx
    }

    pub fn dky(&self) -> f64 {
        2.0 * PI / self.ly
    }

    /// Wavenumber `k` of FFT index `i`.
    #[inline]
    pub fn kx(&self, i: usize) -> f64 {
        self.mode_x(i) as f64 * self.dkx()
    }

    /// Label wavenumber `η` of FFT index `j`.
    #[inline]
    pub fn ky(&self, j: usize) -> f64 {
        self.mode_y(j) as f64 * self.dky()
    }

    /// Largest retained mode numbers `(|i|, |j|)` under the dealias rule.
    pub fn retained(&self) -> (i64, i64) {
        let f = self.dealias_fraction;
        let cut = |n: usize| {
            let c = (f * n as f64 / 2.0 + 1e-9).floor() as i64;
            c.min(n as i64 / 2 - 1)
        };
        (cut(self.nx), cut(self.ny))
    }

    #[inline]
    pub fn is_retained(&self, i: usize, j: usize) -> bool {
        let (ci, cj) = self.retained();
        self.mode_x(i).abs() <= ci && self.mode_y(j).abs() <= cj
    }

    /// Multiplicative 0/1 mask in coefficient layout.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let (ci, cj) = self.retained();
        let mut mask = vec![false; self.len()];
        for i in 0..self.nx {
            let keep_i = self.mode_x(i).abs() <= ci;
            for j in 0..self.ny {
                mask[i * self.ny + j] = keep_i && self.mode_y(j).abs() <= cj;
            }
        }
        mask
    }

    /// Strain after which every label shift `k σ` is a whole η lattice step.
    pub fn remap_strain(&self) -> f64 {
        self.lx / self.ly
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.lx / self.nx as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.ly / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.lx * self.ly / self.len() as f64
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }
}

#[inline]
fn signed(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[inline]
fn unsigned(mode: i64, n: usize) -> Option<usize> {
    let half = n as i64 / 2;
    if mode < -half || mode >= half {
        None
    } else if mode >= 0 {
        Some(mode as usize)
    } else {
        Some((mode + n as i64) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(12, 16, 7.0, 7.0).is_err());
        assert!(GridSpec::new(16, 16, 6.0, 7.0).is_err());
        assert!(GridSpec::new(16, 16, 2.0 * PI, 2.0 * PI).is_ok());
        assert!(GridSpec::default().with_dealias(1.5).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = GridSpec::new(8, 16, 7.0, 7.0).unwrap();
        for i in 0..8 {
            assert_eq!(g.index_x(g.mode_x(i)), Some(i));
        }
        assert_eq!(g.mode_x(4), -4);
        assert_eq!(g.index_y(8), None);
    }

    #[test]
    fn two_thirds_cut() {
        let g = GridSpec::new(128, 64, 7.0, 7.0).unwrap();
        assert_eq!(g.retained(), (42, 21));
        let full = g.with_dealias(1.0).unwrap();
        assert_eq!(full.retained(), (63, 31));
    }
}
