//! Discrete-time update kernels.

use crate::dynamics::params::{ChainParams, ChainState};
use crate::error::{Chain, Error, Result};

#[inline]
pub(crate) fn lde(x: f64, r: f64, k: f64) -> f64 {
    x * (r * (k - x)).exp()
}

/// One step of the logistic difference equation `x exp(r (K - x))`.
pub fn step_lde(x: f64, r: f64, k: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::DomainViolation(format!(
            "x must be finite and >= 0, got {x}"
        )));
    }
    if !(r > 0.0 && k > 0.0) {
        return Err(Error::DomainViolation(format!(
            "r and K must be > 0, got r={r}, K={k}"
        )));
    }
    let next = lde(x, r, k);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFinite {
            chain: Chain::X,
            index: 1,
        })
    }
}

/// One step of the logistic map `r x (1 - x)` on `[0, 1]` with `0 < r <= 4`.
pub fn step_logistic_map(x: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainViolation(format!(
            "logistic map needs x in [0, 1], got {x}"
        )));
    }
    if !(r > 0.0 && r <= 4.0) {
        return Err(Error::DomainViolation(format!(
            "logistic map needs r in (0, 4], got {r}"
        )));
    }
    Ok(r * x * (1.0 - x))
}

/// Synchronous coupled update; both chains read the state at `n`.
#[inline]
pub(crate) fn coupled(state: &ChainState, p: &ChainParams) -> Result<ChainState> {
    let x = state.x * (p.r_x * (p.k_x - state.x - p.a_yx * state.y)).exp();
    let y = state.y * (p.r_y * (p.k_y - state.y - p.a_xy * state.x)).exp();
    let n = state.n + 1;
    if !x.is_finite() {
        return Err(Error::NonFinite {
            chain: Chain::X,
            index: n,
        });
    }
    if !y.is_finite() {
        return Err(Error::NonFinite {
            chain: Chain::Y,
            index: n,
        });
    }
    Ok(ChainState { x, y, n })
}

/// One step of the coupled two-chain difference equation.
///
/// Divergence is reported with the chain that overflowed and the index of
/// the iterate that would have been produced.
pub fn step_coupled_lde(state: &ChainState, params: &ChainParams) -> Result<ChainState> {
    state.validate()?;
    coupled(state, params)
}

/// Derivative of the uncoupled LDE, `exp(r (K - x)) (1 - r x)`.
#[inline]
pub(crate) fn lde_derivative(x: f64, r: f64, k: f64) -> f64 {
    (r * (k - x)).exp() * (1.0 - r * x)
}

/// Jacobian of the coupled update at `state`, row-major.
pub(crate) fn coupled_jacobian(state: &ChainState, p: &ChainParams) -> [[f64; 2]; 2] {
    let (x, y) = (state.x, state.y);
    let ex = (p.r_x * (p.k_x - x - p.a_yx * y)).exp();
    let ey = (p.r_y * (p.k_y - y - p.a_xy * x)).exp();
    [
        [ex * (1.0 - p.r_x * x), -p.r_x * p.a_yx * x * ex],
        [-p.r_y * p.a_xy * y * ey, ey * (1.0 - p.r_y * y)],
    ]
}
