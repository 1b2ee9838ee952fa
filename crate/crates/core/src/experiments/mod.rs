//! Desk-scale studies built on the solver: decay-rate fits, critical-mass
//! probes, amplitude sweeps and the `L^∞` bound monitor.

mod bump;
mod decay;
mod mass;
mod moser;
mod sweep;

pub use bump::{gaussian_bump, BUMP_WIDTH_FRACTION};
pub use decay::{decay_model, decay_rate_fit, efolding_time, enhanced_dissipation_scan, DecayFit, EdRow, EdScan};
pub use mass::{critical_mass_study, no_flow_template, MassRow, NO_FLOW_LINF_CUTOFF};
pub use moser::moser_bound_monitor;
pub use sweep::{suppression_sweep, write_sweep_dir, SweepPlan, SweepReport, SweepRow};

/// Critical mass `8π` of the two-dimensional system.
pub const CRITICAL_MASS: f64 = 8.0 * std::f64::consts::PI;
