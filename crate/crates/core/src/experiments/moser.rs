use log::warn;

use crate::solver::MoserTracker;

/// `2⁷(sup‖∇c‖²_{L⁴} + 1)(sup‖n‖_{L²} + M + ‖n_in‖_{L^∞} + 1) − ‖n‖_{L^∞}`.
///
/// The bound holds for exact solutions; a negative margin on the grid is
/// logged, not treated as an error.
pub fn moser_bound_monitor(sups: &MoserTracker, mass: f64, initial_linf: f64, linf: f64) -> f64 {
    let g = sups.sup_grad_c_l4;
    let rhs = 128.0 * (g * g + 1.0) * (sups.sup_n_l2 + mass + initial_linf + 1.0);
    let margin = rhs - linf;
    if margin < 0.0 {
        warn!("L-infinity bound margin is negative: {margin}");
    }
    margin
}
