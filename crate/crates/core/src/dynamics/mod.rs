//! Deterministic update kernels for the discrete and continuous models.

pub mod lyapunov;
pub mod maps;
pub mod ode;
pub mod params;
pub mod trajectory;

pub use lyapunov::{lyapunov_exponent, MapSystem};
pub use maps::{step_coupled_lde, step_lde, step_logistic_map};
pub use ode::{integrate_lv, integrate_ode};
pub use params::{ChainParams, ChainState, LvParams, ParamTarget};
pub use trajectory::{
    simulate, AppliedEvent, Clamp, ModelKind, ModelParams, Provenance, Trajectory,
};
