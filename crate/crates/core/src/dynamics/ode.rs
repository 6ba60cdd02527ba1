//! Fixed-step classical Runge-Kutta integration of the continuous models.

use crate::dynamics::params::{ChainParams, ChainState, LvParams};
use crate::dynamics::trajectory::{ModelKind, ModelParams, Provenance, Trajectory};
use crate::error::{Chain, Error, Result};

/// Default step size for the continuous models.
pub const DEFAULT_DT: f64 = 1e-3;

#[inline]
fn rk4_step<F>(f: &F, s: [f64; 2], h: f64) -> [f64; 2]
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let k1 = f(s);
    let k2 = f([s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]]);
    let k3 = f([s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]]);
    let k4 = f([s[0] + h * k3[0], s[1] + h * k3[1]]);
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn step_count(dt: f64, t_end: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
    }
    if !(t_end.is_finite() && t_end > dt) {
        return Err(Error::InvalidParams(format!(
            "t_end must exceed dt, got t_end={t_end}, dt={dt}"
        )));
    }
    Ok((t_end / dt).round() as usize)
}

fn integrate<F>(start: [f64; 2], h: f64, n_steps: usize, f: F) -> Result<Vec<ChainState>>
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut s = start;
    states.push(ChainState {
        x: s[0],
        y: s[1],
        n: 0,
    });
    for n in 1..=n_steps {
        s = rk4_step(&f, s, h);
        if !s[0].is_finite() {
            return Err(Error::NonFinite {
                chain: Chain::X,
                index: n,
            });
        }
        if !s[1].is_finite() {
            return Err(Error::NonFinite {
                chain: Chain::Y,
                index: n,
            });
        }
        states.push(ChainState {
            x: s[0],
            y: s[1],
            n,
        });
    }
    Ok(states)
}

/// Integrate `x' = r_x x (K_x - x - a_yx y)`, `y' = r_y y (K_y - y - a_xy x)`
/// up to `t_end`, recording every step.
pub fn integrate_ode(
    initial: ChainState,
    params: &ChainParams,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory> {
    let n_steps = step_count(dt, t_end)?;
    integrate_ode_steps(initial, params, dt, n_steps)
}

pub(crate) fn integrate_ode_steps(
    initial: ChainState,
    params: &ChainParams,
    dt: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    params.validate()?;
    initial.validate()?;
    let p = *params;
    let states = integrate([initial.x, initial.y], dt, n_steps, |[x, y]| {
        [
            p.r_x * x * (p.k_x - x - p.a_yx * y),
            p.r_y * y * (p.k_y - y - p.a_xy * x),
        ]
    })?;
    let mut provenance = Provenance::plain(ModelKind::Ode, ChainState { n: 0, ..initial });
    provenance.dt = Some(dt);
    Ok(Trajectory {
        states,
        params: ModelParams::Chain(p),
        provenance,
    })
}

/// Integrate the Lotka-Volterra system `S1' = a S1 - b S1 S2`,
/// `S2' = c S2 - d S1 S2`. The returned states carry `S1` in `x` and `S2`
/// in `y`.
pub fn integrate_lv(s1: f64, s2: f64, lv: &LvParams, dt: f64, t_end: f64) -> Result<Trajectory> {
    let n_steps = step_count(dt, t_end)?;
    integrate_lv_steps(s1, s2, lv, dt, n_steps)
}

pub(crate) fn integrate_lv_steps(
    s1: f64,
    s2: f64,
    lv: &LvParams,
    dt: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    lv.validate()?;
    if !(s1 > 0.0 && s2 > 0.0 && s1.is_finite() && s2.is_finite()) {
        return Err(Error::DomainViolation(format!(
            "LV populations must be > 0, got ({s1}, {s2})"
        )));
    }
    let c = *lv;
    let states = integrate([s1, s2], dt, n_steps, |[u, v]| {
        [c.a * u - c.b * u * v, c.c * v - c.d * u * v]
    })?;
    let mut provenance = Provenance::plain(ModelKind::LotkaVolterra, ChainState::new(s1, s2));
    provenance.dt = Some(dt);
    Ok(Trajectory {
        states,
        params: ModelParams::LotkaVolterra(c),
        provenance,
    })
}
