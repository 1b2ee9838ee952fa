use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Coefficients `c(k, η)` of a real field, `f = Σ c e^{i(k x̃ + η y)}` with
/// `x̃ = x − σ y` the comoving abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    strain: f64,
    coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField { grid, strain: 0.0, coeffs: vec![ZERO; grid.len()] }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients for a {}x{} grid, got {}",
                grid.len(),
                grid.nx,
                grid.ny,
                coeffs.len()
            )));
        }
        Ok(SpectralField { grid, strain: 0.0, coeffs })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn strain(&self) -> f64 {
        self.strain
    }

    pub fn set_strain(&mut self, strain: f64) {
        self.strain = strain;
    }

    pub fn with_strain(mut self, strain: f64) -> Self {
        self.strain = strain;
        self
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs[i * self.grid.ny + j]
    }

    /// Coefficient at signed mode numbers; zero outside the lattice.
    pub fn mode(&self, kx: i64, ky: i64) -> Complex64 {
        match (self.grid.index_x(kx), self.grid.index_y(ky)) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => ZERO,
        }
    }

    /// Sets `c(kx, ky)` and its conjugate partner so the field stays real.
    pub fn set_mode(&mut self, kx: i64, ky: i64, value: Complex64) -> Result<()> {
        let g = self.grid;
        let idx = |a: i64, b: i64| -> Result<usize> {
            match (g.index_x(a), g.index_y(b)) {
                (Some(i), Some(j)) => Ok(i * g.ny + j),
                _ => Err(Error::Shape(format!("mode ({kx}, {ky}) outside the {}x{} lattice", g.nx, g.ny))),
            }
        };
        let p = idx(kx, ky)?;
        let q = idx(-kx, -ky).or_else(|_| idx(kx, ky))?;
        if p == q {
            self.coeffs[p] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[p] = value;
            self.coeffs[q] = value.conj();
        }
        Ok(())
    }

    /// Domain mean, the `(0,0)` coefficient.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Index of the conjugate partner of `(i, j)`.
    #[inline]
    pub fn partner(&self, i: usize, j: usize) -> usize {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        ((nx - i) % nx) * ny + (ny - j) % ny
    }

    /// Largest `|c(−k,−η) − conj c(k,η)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let ny = self.grid.ny;
        let mut worst = 0.0f64;
        for i in 0..self.grid.nx {
            for j in 0..ny {
                let d = (self.coeffs[self.partner(i, j)] - self.coeffs[i * ny + j].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Projects onto Hermitian-symmetric coefficients.
    pub fn symmetrize(&mut self) {
        let ny = self.grid.ny;
        for i in 0..self.grid.nx {
            for j in 0..ny {
                let p = i * ny + j;
                let q = self.partner(i, j);
                if q < p {
                    continue;
                }
                if q == p {
                    self.coeffs[p].im = 0.0;
                } else {
                    let avg = 0.5 * (self.coeffs[p] + self.coeffs[q].conj());
                    self.coeffs[p] = avg;
                    self.coeffs[q] = avg.conj();
                }
            }
        }
    }

    /// Zeros every coefficient outside the retained band.
    pub fn dealias(&mut self) {
        let g = self.grid;
        let (ci, cj) = g.retained();
        for i in 0..g.nx {
            let drop_row = g.mode_x(i).abs() > ci;
            for j in 0..g.ny {
                if drop_row || g.mode_y(j).abs() > cj {
                    self.coeffs[i * g.ny + j] = ZERO;
                }
            }
        }
    }

    pub fn dealiased(mut self) -> Self {
        self.dealias();
        self
    }

    /// Lab-frame wavenumbers `(k, ξ = η − k σ)` of index `(i, j)`.
    #[inline]
    pub fn lab_wavenumbers(&self, i: usize, j: usize) -> (f64, f64) {
        let k = self.grid.kx(i);
        (k, self.grid.ky(j) - k * self.strain)
    }

    /// `‖f‖²_{L²}` over the box, `lx·ly·Σ|c|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.area() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    /// `self += s·other`; both fields must share grid and strain.
    pub fn axpy(&mut self, s: f64, other: &SpectralField) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape(format!(
                "grid mismatch: {}x{} vs {}x{}",
                self.grid.nx, self.grid.ny, other.grid.nx, other.grid.ny
            )));
        }
        if self.strain != other.strain {
            return Err(Error::Shape(format!("strain mismatch: {} vs {}", self.strain, other.strain)));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Applies `f(k, ξ)` multiplicatively using lab wavenumbers.
    pub fn map_symbol(&self, mut f: impl FnMut(f64, f64) -> Complex64) -> SpectralField {
        let mut out = self.clone();
        let ny = self.grid.ny;
        for i in 0..self.grid.nx {
            for j in 0..ny {
                let (k, xi) = self.lab_wavenumbers(i, j);
                out.coeffs[i * ny + j] *= f(k, xi);
            }
        }
        out
    }

    pub fn dx(&self) -> SpectralField {
        self.map_symbol(|k, _| Complex64::new(0.0, k))
    }

    pub fn dy(&self) -> SpectralField {
        self.map_symbol(|_, xi| Complex64::new(0.0, xi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::transform::{forward_transform, inverse_transform};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn set_mode_keeps_field_real() {
        let g = GridSpec::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_mode(1, -2, Complex64::new(0.3, 0.4)).unwrap();
        assert_eq!(f.mode(-1, 2), Complex64::new(0.3, -0.4));
        assert!(f.hermitian_defect() == 0.0);
        assert!(f.set_mode(9, 0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn parseval_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = GridSpec::new(32, 64, 9.0, 13.0).unwrap();
        for _ in 0..100 {
            let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = forward_transform(&g, &samples).unwrap();
            let phys = g.cell_area() * samples.iter().map(|v| v * v).sum::<f64>();
            assert!(((f.l2_norm_sq() - phys) / phys).abs() <= 1e-12);
            assert!(f.hermitian_defect() <= 1e-13);
        }
    }

    #[test]
    fn derivative_of_sine() {
        let g = GridSpec::new(16, 16, 4.0 * PI, 2.0 * PI).unwrap();
        let s: Vec<f64> = (0..g.len()).map(|n| (g.x(n / 16) * 0.5).sin()).collect();
        let d = inverse_transform(&forward_transform(&g, &s).unwrap().dx());
        for (n, v) in d.iter().enumerate() {
            assert!((v - 0.5 * (g.x(n / 16) * 0.5).cos()).abs() < 1e-13);
        }
    }
}
