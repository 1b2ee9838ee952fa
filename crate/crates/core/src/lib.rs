//! Numerical laboratory for chemotactic blow-up suppression by Couette shear.
//!
//! The crate has two halves. [`threshold`] evaluates every explicit constant,
//! rate factor and amplitude threshold of the Patlak–Keller–Segel(–Navier–Stokes)
//! energy method near the Couette flow `(Ay, 0)`, and audits the published
//! numeric chains. [`spectral`], [`physics`] and [`solver`] form a
//! shear-comoving pseudo-spectral simulator for the rescaled systems, and
//! [`experiments`] drives desk-scale studies on top of it.

pub mod error;
pub mod experiments;
pub mod fmt;
pub mod physics;
pub mod solver;
pub mod spectral;
pub mod threshold;

pub use error::{Error, Result};
pub use physics::FluxSet;
pub use solver::{RunResult, RunStatus, SimConfig, SimState, TimeScale};
pub use spectral::{GridSpec, NormAccumulator, SpectralField};
pub use threshold::{ConstantReport, ModelCase, NormParams, ThresholdMode};
