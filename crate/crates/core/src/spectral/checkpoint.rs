//! Binary field checkpoints.
//!
//! Layout, all little-endian:
//!
//! | offset | size | content |
//! |---|---|---|
//! | 0 | 4 | magic `PKSC` |
//! | 4 | 4 | `u32` version (1) |
//! | 8 | 4 | `u32` nx |
//! | 12 | 4 | `u32` ny |
//! | 16 | 8 | `f64` lx |
//! | 24 | 8 | `f64` ly |
//! | 32 | 16·nx·ny | `(re, im)` `f64` pairs, index `i·ny + j` |
//!
//! `i` and `j` are FFT indices (non-negative modes first). The strain of the
//! frame is not part of the file; readers get `σ = 0` and callers that need
//! the phase keep it in a sidecar.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"PKSC";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(mut w: W, field: &SpectralField) -> Result<()> {
    let g = field.grid();
    let mut buf = Vec::with_capacity(32 + 16 * g.len());
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(g.nx as u32).to_le_bytes());
    buf.extend_from_slice(&(g.ny as u32).to_le_bytes());
    buf.extend_from_slice(&g.lx.to_le_bytes());
    buf.extend_from_slice(&g.ly.to_le_bytes());
    for c in field.coeffs() {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<SpectralField> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 32 || &bytes[..4] != CHECKPOINT_MAGIC {
        return Err(Error::Format("not a PKSC checkpoint".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let grid = GridSpec::new(u32_at(8) as usize, u32_at(12) as usize, f64_at(16), f64_at(24))
        .map_err(|e| Error::Format(format!("bad checkpoint header: {e}")))?;
    let expected = 32 + 16 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!("checkpoint has {} bytes, header implies {expected}", bytes.len())));
    }
    let coeffs = (0..grid.len())
        .map(|n| Complex64::new(f64_at(32 + 16 * n), f64_at(40 + 16 * n)))
        .collect();
    SpectralField::from_coeffs(grid, coeffs)
}
