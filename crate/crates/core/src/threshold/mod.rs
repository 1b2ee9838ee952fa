//! Explicit constants, rate factors, bootstrap sizes and amplitude thresholds.
//!
//! Everything here is a pure function of its inputs. The reference parameter
//! choice `a = 1/(2000π)`, `Ξ = θ₁ = θ₂ = 1` is available as
//! [`NormParams::reference`].

mod amplitude;
mod audit;
mod bootstrap;
mod constants;
mod params;
mod rates;
mod report;
pub mod special;

pub use amplitude::{
    solve_amplitude_threshold, threshold_function, PaperSplitBreakdown, ThresholdFunction,
    ThresholdMode, ThresholdSolution, BISECTION_HI, BISECTION_MAX_ITER, SHARP_TOLERANCE,
};
pub use audit::{verify_paper_chain, AuditEntry, AuditReport};
pub use bootstrap::{bootstrap_sizes, BootstrapSizes, InitialNorms};
pub use constants::{bound_constants, BoundConstants, PublishedBounds, PUBLISHED_BOUNDS};
pub use params::{ModelCase, NormParams};
pub use rates::{rate_factor, RateFactor, RateKind};
pub use report::{constant_report, ConstantReport};
pub use special::{beta_function, ln_gamma};
