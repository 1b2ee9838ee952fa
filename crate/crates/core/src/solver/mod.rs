//! Shear-comoving pseudo-spectral time stepper.
//!
//! Fields live on labels `(k, η)` of the comoving frame `x − σy`, where the
//! strain `σ` grows at the shear rate. The linear part (shear plus diffusion)
//! is integrated exactly per label; the nonlinear fluxes use Lawson RK4.
//! Once `σ` reaches `lx/ly` the labels are shifted `η → η − k` and `σ` is
//! reduced, which leaves the physical field unchanged.

mod config;
mod oracle;
mod propagator;
mod run;
mod state;

pub use config::{SimConfig, TimeScale, MAX_HALVINGS};
pub use oracle::{oracle_check, OracleReport};
pub use propagator::{heat_integral, linear_propagator};
pub use run::{run, run_with_forcing, tail_fraction, RunResult, RunStatus, RunSummary, Sample, TAIL_BAND};
pub use state::{remap_shear, step, Forcing, MoserTracker, Probe, SimState, StepError, StepReport, TrackedMode};

#[cfg(test)]
mod tests;
