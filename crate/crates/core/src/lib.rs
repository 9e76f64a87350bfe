//! Steady, radially symmetric compressible Euler flows with swirl in an
//! annulus `r0 < r < r1`.
//!
//! Smooth flows are organised by their conserved quantities: the mass flux,
//! the angular momentum, the Bernoulli constant and the entropy. Transonic
//! shock solutions glue two smooth regions across a circular shock.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gas;
pub mod profile;
mod roots;
pub mod shock;
pub mod smooth;

pub use error::{FlowError, Result};
pub use gas::{entropy_ratio, pressure_ratio, BoundaryState, Direction, FlowInvariants, FlowState, GasModel};
pub use profile::{profile, radius_grid, RadialProfile, Region};
pub use shock::{
    classifier_f1, classify_problem_iii, classify_problem_iv, coincidence_radius, downstream_sonic_test_g,
    exit_pressure_of_shock, exit_state_test_f2, pressure_interval, rh_jump, shock_from_exit_pressure,
    swirl_sonic_radius, verify_shock_inequalities, ExitRegime, PressureInterval, ShockClassifier,
    ShockInequalities, ShockPattern, ShockProblem, ShockRegime, ShockSolution, ShockTransition, SweepRow,
};
pub use smooth::{
    classify_inward, classify_outward, limiting_radius, limiting_radius_lower_bound, mach_derivatives, ode_rhs,
    purely_circulatory, solve_density, solve_state, sonic_radius, Branch, SmoothRegime, SmoothReport,
};
