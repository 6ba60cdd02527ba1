//! Simulation laboratory for competing causal chains.
//!
//! The model is a pair of logistic difference equations (Ricker maps) whose
//! growth exponents are coupled:
//!
//! ```text
//! x[n+1] = x[n] exp(r_x (K_x - x[n] - a_yx y[n]))
//! y[n+1] = y[n] exp(r_y (K_y - y[n] - a_xy x[n]))
//! ```
//!
//! On top of the kernels in [`dynamics`] the crate provides bifurcation
//! sweeps ([`bifurcation`]), seeded parameter shocks ([`perturbation`]) and
//! observational and interventional causal-direction detectors
//! ([`causality`]). [`format`] holds the byte-stable text encodings used by
//! the command-line tool.

pub mod bifurcation;
pub mod causality;
pub mod dynamics;
mod error;
pub mod format;
pub mod perturbation;
pub mod stats;

pub use bifurcation::{attractor_census, sweep, BifurcationDiagram, ParamRule, SweepSpec};
pub use dynamics::{
    integrate_lv, integrate_ode, lyapunov_exponent, simulate, step_coupled_lde, step_lde,
    step_logistic_map, ChainParams, ChainState, LvParams, MapSystem, ParamTarget, Trajectory,
};
pub use error::{Chain, Error, Result};
pub use perturbation::{generate_schedule, simulate_perturbed, PerturbationSchedule};
