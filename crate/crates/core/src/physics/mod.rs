//! Elliptic chemoattractant solve, Biot–Savart velocity, and the quadratic
//! fluxes, all pseudo-spectral on the comoving grid.

mod elliptic;
mod flux;
mod lemma;

pub use elliptic::{solve_chemoattractant, velocity_from_vorticity};
pub use flux::{nonlinear_fluxes, product, FluxSet};
pub(crate) use flux::{physical, spectral};
pub use lemma::{lemma22_residuals, Lemma22Entry, Lemma22Report};
