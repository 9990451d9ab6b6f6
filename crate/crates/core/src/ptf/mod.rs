//! The Polaron Thomas-Fermi functional
//! `E(rho) = (3/10)(6 pi^2)^{2/3} int rho^{5/3} - (1/2) int int rho(x) rho(y) / |x - y|`
//! on unit-mass radial densities, and two independent ways to minimize it.

mod functional;
mod gradient;
mod lane_emden;
mod shooting;
mod solution;

pub use functional::{
    best_gaussian_width, ptf_bracket, ptf_energy, ptf_gradient, scaling_check, PtfBracket,
    PtfEnergy, ScalingCheck,
};
pub use gradient::{minimize_direct, DEFAULT_MAX_ITERS, STOP_DECREASE};
pub use lane_emden::{solve_lane_emden, LaneEmdenProfile};
pub use shooting::{minimizer_from_profile, minimizer_on_grid, polytrope_scales, PolytropeScales};
pub use solution::{PtfSolution, SolverMethod, RECORD_FORMAT};
