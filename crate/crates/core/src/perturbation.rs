//! Seeded exogenous shocks to the chain parameters.
//!
//! Shock times follow a Poisson process: waiting times are exponential with
//! mean `1 / rate` (inverse CDF on a uniform draw), accumulated in continuous
//! time and mapped to iterations by ceiling. New parameter values are uniform
//! on `[low, high]`.
//!
//! The generator is ChaCha8 (`rand_chacha` 0.9, pinned) seeded with
//! `seed_from_u64`; each event consumes two `f64` draws, waiting time first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::params::{ChainParams, ChainState, ParamTarget};
use crate::dynamics::trajectory::{run_lde, AppliedEvent, Trajectory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockEvent {
    /// Continuous event time.
    pub time: f64,
    pub iteration: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSchedule {
    pub target: ParamTarget,
    pub rate: f64,
    pub low: f64,
    pub high: f64,
    pub seed: u64,
    pub horizon: usize,
    pub events: Vec<ShockEvent>,
}

impl PerturbationSchedule {
    /// Gaps between consecutive continuous event times, starting from 0.
    pub fn waiting_times(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.events
            .iter()
            .map(|e| {
                let w = e.time - prev;
                prev = e.time;
                w
            })
            .collect()
    }

    pub fn applied_events(&self) -> impl Iterator<Item = AppliedEvent> + '_ {
        self.events.iter().map(|e| AppliedEvent {
            iteration: e.iteration,
            target: self.target,
            value: e.value,
        })
    }
}

/// Draw a shock schedule over `[0, horizon)` iterations.
///
/// When two continuous times fall into the same iteration the later event
/// moves to the next free iteration, so iteration indices stay strictly
/// increasing and no draw is lost.
pub fn generate_schedule(
    target: ParamTarget,
    rate: f64,
    low: f64,
    high: f64,
    seed: u64,
    horizon: usize,
) -> Result<PerturbationSchedule> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::InvalidParams(format!(
            "shock rate must be > 0, got {rate}"
        )));
    }
    if !(low.is_finite() && high.is_finite() && low < high) {
        return Err(Error::InvalidParams(format!(
            "shock bounds need low < high, got [{low}, {high}]"
        )));
    }
    if target.requires_positive() && low <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "{target} shocks must stay > 0, got low={low}"
        )));
    }
    if horizon < 1 {
        return Err(Error::InvalidParams("shock horizon must be >= 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::new();
    let mut time = 0.0f64;
    let mut last: Option<usize> = None;
    loop {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        time += -(1.0 - u).ln() / rate;
        if time >= horizon as f64 {
            break;
        }
        let mut iteration = time.ceil() as usize;
        if let Some(prev) = last {
            iteration = iteration.max(prev + 1);
        }
        if iteration >= horizon {
            break;
        }
        last = Some(iteration);
        events.push(ShockEvent {
            time,
            iteration,
            value: (low + v * (high - low)).min(high),
        });
    }
    Ok(PerturbationSchedule {
        target,
        rate,
        low,
        high,
        seed,
        horizon,
        events,
    })
}

/// Merge schedules into one event list ordered by iteration, then by the
/// canonical target order.
pub fn merge_events(schedules: &[PerturbationSchedule]) -> Result<Vec<AppliedEvent>> {
    let mut seen = Vec::new();
    for s in schedules {
        if seen.contains(&s.target) {
            return Err(Error::InvalidParams(format!(
                "two schedules target {}",
                s.target
            )));
        }
        seen.push(s.target);
    }
    let mut events: Vec<AppliedEvent> = schedules.iter().flat_map(|s| s.applied_events()).collect();
    events.sort_by_key(|e| (e.iteration, e.target));
    Ok(events)
}

/// Simulate the coupled map with parameters replaced by scheduled values
/// from each event's iteration onward. Only events that took effect before
/// the end of the run are recorded in the provenance.
pub fn simulate_perturbed(
    initial: ChainState,
    params: &ChainParams,
    schedules: &[PerturbationSchedule],
    n_steps: usize,
) -> Result<Trajectory> {
    let mut events = merge_events(schedules)?;
    simulate_with_events(initial, params, &mut events, n_steps).map(|mut t| {
        t.provenance.seeds = schedules.iter().map(|s| s.seed).collect();
        t
    })
}

/// Like [`simulate_perturbed`] with an explicit event list (for example one
/// read back from an event log).
pub fn simulate_with_events(
    initial: ChainState,
    params: &ChainParams,
    events: &mut Vec<AppliedEvent>,
    n_steps: usize,
) -> Result<Trajectory> {
    if n_steps < 1 {
        return Err(Error::InvalidParams("n_steps must be >= 1".into()));
    }
    events.sort_by_key(|e| (e.iteration, e.target));
    events.retain(|e| e.iteration < n_steps);
    for e in events.iter() {
        let mut p = *params;
        e.target.set(&mut p, e.value);
        p.validate()?;
    }
    run_lde(initial, *params, n_steps, events, None)
}
