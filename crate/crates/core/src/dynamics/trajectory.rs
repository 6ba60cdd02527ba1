//! Trajectories and the deterministic simulation loop shared by plain,
//! perturbed and clamped runs.

use serde::{Deserialize, Serialize};

use crate::dynamics::maps::coupled;
use crate::dynamics::ode;
use crate::dynamics::params::{ChainParams, ChainState, LvParams, ParamTarget};
use crate::error::{Chain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Coupled logistic difference equation.
    Lde,
    /// Coupled logistic ODE integrated with RK4.
    Ode,
    /// Lotka-Volterra ODE integrated with RK4.
    LotkaVolterra,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelParams {
    Chain(ChainParams),
    LotkaVolterra(LvParams),
}

/// A parameter change that took effect at `iteration`: the step from
/// state `iteration` to `iteration + 1` already uses `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppliedEvent {
    pub iteration: usize,
    pub target: ParamTarget,
    pub value: f64,
}

/// do-style intervention: `chain` is held at `value` for the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clamp {
    pub chain: Chain,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: ModelKind,
    pub initial: ChainState,
    /// Step size for ODE models.
    pub dt: Option<f64>,
    /// Seeds of the schedules that produced `events`.
    pub seeds: Vec<u64>,
    pub events: Vec<AppliedEvent>,
    pub clamp: Option<Clamp>,
}

impl Provenance {
    pub(crate) fn plain(model: ModelKind, initial: ChainState) -> Self {
        Self {
            model,
            initial,
            dt: None,
            seeds: Vec::new(),
            events: Vec::new(),
            clamp: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<ChainState>,
    pub params: ModelParams,
    pub provenance: Provenance,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_steps(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn last(&self) -> &ChainState {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }

    pub fn xs(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.y).collect()
    }

    pub fn series(&self, chain: Chain) -> Vec<f64> {
        match chain {
            Chain::X => self.xs(),
            Chain::Y => self.ys(),
        }
    }

    /// Drop the first `n` states, keeping iteration indices as they were.
    pub fn skip(&self, n: usize) -> Trajectory {
        Trajectory {
            states: self.states[n.min(self.states.len())..].to_vec(),
            params: self.params,
            provenance: self.provenance.clone(),
        }
    }

    /// Re-run the model recorded in the provenance.
    pub fn regenerate(&self) -> Result<Trajectory> {
        let p = &self.provenance;
        let n_steps = self.n_steps();
        match (p.model, self.params) {
            (ModelKind::Lde, ModelParams::Chain(params)) => {
                let mut t = run_lde(p.initial, params, n_steps, &p.events, p.clamp)?;
                t.provenance.seeds = p.seeds.clone();
                Ok(t)
            }
            (ModelKind::Ode, ModelParams::Chain(params)) => {
                let dt =
                    p.dt.ok_or_else(|| Error::InvalidParams("ODE provenance without dt".into()))?;
                ode::integrate_ode_steps(p.initial, &params, dt, n_steps)
            }
            (ModelKind::LotkaVolterra, ModelParams::LotkaVolterra(lv)) => {
                let dt =
                    p.dt.ok_or_else(|| Error::InvalidParams("LV provenance without dt".into()))?;
                ode::integrate_lv_steps(p.initial.x, p.initial.y, &lv, dt, n_steps)
            }
            _ => Err(Error::InvalidParams(
                "provenance model does not match parameters".into(),
            )),
        }
    }
}

/// Iterate the coupled LDE for `n_steps` from `initial`.
pub fn simulate(initial: ChainState, params: &ChainParams, n_steps: usize) -> Result<Trajectory> {
    if n_steps < 1 {
        return Err(Error::InvalidParams("n_steps must be >= 1".into()));
    }
    run_lde(initial, *params, n_steps, &[], None)
}

/// Core loop. `events` must be sorted by `(iteration, target)`.
pub(crate) fn run_lde(
    initial: ChainState,
    params: ChainParams,
    n_steps: usize,
    events: &[AppliedEvent],
    clamp: Option<Clamp>,
) -> Result<Trajectory> {
    params.validate()?;
    let mut start = ChainState { n: 0, ..initial };
    if let Some(c) = clamp {
        if !(c.value.is_finite() && c.value >= 0.0) {
            return Err(Error::DomainViolation(format!(
                "clamp value must be finite and >= 0, got {}",
                c.value
            )));
        }
        match c.chain {
            Chain::X => start.x = c.value,
            Chain::Y => start.y = c.value,
        }
    }
    start.validate()?;

    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(start);
    let mut active = params;
    let mut pending = events.iter().peekable();
    let mut s = start;
    for _ in 0..n_steps {
        while let Some(e) = pending.next_if(|e| e.iteration <= s.n) {
            e.target.set(&mut active, e.value);
        }
        s = match clamp {
            None => coupled(&s, &active)?,
            Some(c) => clamped_step(&s, &active, c)?,
        };
        states.push(s);
    }

    let mut provenance = Provenance::plain(ModelKind::Lde, initial);
    provenance.events = events.to_vec();
    provenance.clamp = clamp;
    Ok(Trajectory {
        states,
        params: ModelParams::Chain(params),
        provenance,
    })
}

fn clamped_step(s: &ChainState, p: &ChainParams, clamp: Clamp) -> Result<ChainState> {
    let n = s.n + 1;
    match clamp.chain {
        Chain::X => {
            let y = s.y * (p.r_y * (p.k_y - s.y - p.a_xy * clamp.value)).exp();
            if !y.is_finite() {
                return Err(Error::NonFinite {
                    chain: Chain::Y,
                    index: n,
                });
            }
            Ok(ChainState {
                x: clamp.value,
                y,
                n,
            })
        }
        Chain::Y => {
            let x = s.x * (p.r_x * (p.k_x - s.x - p.a_yx * clamp.value)).exp();
            if !x.is_finite() {
                return Err(Error::NonFinite {
                    chain: Chain::X,
                    index: n,
                });
            }
            Ok(ChainState {
                x,
                y: clamp.value,
                n,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_on_fixed_point_stays_constant() {
        let p = ChainParams::unidirectional(1.2);
        let (x, y) = p.interior_fixed_point().unwrap();
        let t = simulate(ChainState::new(x, y), &p, 100).unwrap();
        assert_eq!(t.len(), 101);
        for s in &t.states {
            assert!((s.x - x).abs() < 1e-14 && (s.y - y).abs() < 1e-14);
        }
    }

    #[test]
    fn indices_increase_by_one() {
        let t = simulate(ChainState::default(), &ChainParams::unidirectional(2.7), 50).unwrap();
        for (i, s) in t.states.iter().enumerate() {
            assert_eq!(s.n, i);
        }
    }

    #[test]
    fn divergence_carries_index() {
        let p = ChainParams::new(1.0, 1.0, 1.0, 1.0, -200.0, 0.0).unwrap();
        let err = simulate(ChainState::new(0.5, 5.0), &p, 10).unwrap_err();
        assert_eq!(
            err,
            Error::NonFinite {
                chain: Chain::X,
                index: 1
            }
        );
    }

    #[test]
    fn zero_steps_rejected() {
        assert!(simulate(ChainState::default(), &ChainParams::unidirectional(1.0), 0).is_err());
    }

    #[test]
    fn regenerate_is_bit_identical() {
        let t = simulate(
            ChainState::new(0.3, 0.8),
            &ChainParams::unidirectional(2.95),
            500,
        )
        .unwrap();
        assert_eq!(t.regenerate().unwrap(), t);
    }
}
