//! Fourier representation of real fields on a shear-periodic box, the ghost
//! multipliers, and the Y and X norm evaluators.
//!
//! Coefficients carry comoving labels `(k, η)`. A field also records the
//! accumulated strain `σ` of its frame, and the lab wavenumber of a label is
//! `ξ = η − k σ`. Fields produced by transforms have `σ = 0` unless the
//! caller says otherwise.

mod checkpoint;
mod field;
mod grid;
mod multiplier;
mod norms;
mod transform;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use field::SpectralField;
pub use grid::GridSpec;
pub use multiplier::{dissipation_symbol_check, multiplier_m, multiplier_m1, multiplier_m2, SymbolCheck};
pub use norms::{x_norm_instant, y_norm, NormAccumulator, XPieces, YNorm};
pub use transform::{forward_transform, inverse_transform};
