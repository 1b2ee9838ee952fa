use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::field::SpectralField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

type Plan = Arc<dyn Fft<f64>>;

/// Grids at or above this many points transform rows in parallel. Every row
/// is processed by the same plan, so results do not depend on scheduling.
const PARALLEL_MIN: usize = 64 * 64;

fn plan(n: usize, direction: FftDirection) -> Plan {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, direction == FftDirection::Forward);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

fn rows(data: &mut [Complex64], len: usize, fft: &Plan, parallel: bool) {
    let scratch_len = fft.get_inplace_scratch_len();
    if parallel {
        data.par_chunks_mut(len).for_each_init(
            || vec![Complex64::new(0.0, 0.0); scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    } else {
        let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
        for row in data.chunks_mut(len) {
            fft.process_with_scratch(row, &mut scratch);
        }
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 32;
    for ib in (0..rows).step_by(B) {
        for jb in (0..cols).step_by(B) {
            for i in ib..(ib + B).min(rows) {
                for j in jb..(jb + B).min(cols) {
                    dst[j * rows + i] = src[i * cols + j];
                }
            }
        }
    }
}

/// In-place 2D transform of an `nx × ny` array stored x-major.
pub(crate) fn fft2(grid: &GridSpec, data: &mut [Complex64], direction: FftDirection) {
    let (nx, ny) = (grid.nx, grid.ny);
    let parallel = grid.len() >= PARALLEL_MIN;
    rows(data, ny, &plan(ny, direction), parallel);
    let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
    transpose(data, &mut t, nx, ny);
    rows(&mut t, nx, &plan(nx, direction), parallel);
    transpose(&t, data, ny, nx);
}

/// Physical samples `f(x_i, y_j)` at index `i·ny + j` to coefficients with
/// the `(0,0)` entry equal to the domain mean.
pub fn forward_transform(grid: &GridSpec, samples: &[f64]) -> Result<SpectralField> {
    if samples.len() != grid.len() {
        return Err(Error::Shape(format!(
            "expected {} samples for a {}x{} grid, got {}",
            grid.len(),
            grid.nx,
            grid.ny,
            samples.len()
        )));
    }
    let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(grid, &mut data, FftDirection::Forward);
    let scale = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    let mut field = SpectralField::from_coeffs(*grid, data)?;
    field.symmetrize();
    Ok(field)
}

/// Samples of the field on its own (comoving) collocation grid.
pub fn inverse_transform(field: &SpectralField) -> Vec<f64> {
    let mut data = field.coeffs().to_vec();
    fft2(field.grid(), &mut data, FftDirection::Inverse);
    data.into_iter().map(|c| c.re).collect()
}
