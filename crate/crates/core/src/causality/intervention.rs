//! do-operator experiments: clamp one chain and measure how the other
//! chain's long-run distribution moves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bifurcation::quantize;
use crate::dynamics::params::{ChainParams, ChainState};
use crate::dynamics::trajectory::{run_lde, Clamp, Trajectory};
use crate::error::{Chain, Error, Result};

pub const MIN_SHIFT_STEPS: usize = 10_000;

/// Simulate with `clamp.chain` held at `clamp.value` from iteration 0 on.
/// The free chain reads the clamped value in its update.
pub fn intervene(
    params: &ChainParams,
    clamp: Clamp,
    initial: ChainState,
    n_steps: usize,
) -> Result<Trajectory> {
    if n_steps < 1 {
        return Err(Error::InvalidParams("n_steps must be >= 1".into()));
    }
    run_lde(initial, *params, n_steps, &[], Some(clamp))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub clamp_values: Vec<f64>,
    /// Total iterations per run, burn-in included.
    pub n_steps: usize,
    pub burn_in: usize,
    /// Histogram bin width for the total-variation distance.
    pub epsilon: f64,
}

impl ShiftSpec {
    pub fn validate(&self) -> Result<()> {
        if self.clamp_values.is_empty() {
            return Err(Error::InvalidParams(
                "at least one clamp value is required".into(),
            ));
        }
        if let Some(c) = self
            .clamp_values
            .iter()
            .find(|c| !(c.is_finite() && **c >= 0.0))
        {
            return Err(Error::InvalidParams(format!(
                "clamp values must be finite and >= 0, got {c}"
            )));
        }
        if self.n_steps < MIN_SHIFT_STEPS {
            return Err(Error::InvalidParams(format!(
                "shift runs need at least {MIN_SHIFT_STEPS} steps, got {}",
                self.n_steps
            )));
        }
        if self.burn_in >= self.n_steps {
            return Err(Error::InvalidParams(
                "burn-in must be shorter than the run".into(),
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    pub clamped: Chain,
    pub probe: Chain,
    /// Total-variation shift for each clamp value, in input order.
    pub per_clamp: Vec<f64>,
    /// Largest shift over the clamp values.
    pub shift: f64,
}

/// Total-variation distance between the epsilon-binned post-burn-in
/// distribution of `probe` under each clamp of `target` and the unclamped
/// baseline run from the same initial state.
pub fn interventional_shift(
    params: &ChainParams,
    target: Chain,
    probe: Chain,
    initial: ChainState,
    spec: &ShiftSpec,
) -> Result<ShiftResult> {
    spec.validate()?;
    if target == probe {
        return Err(Error::InvalidParams(
            "probe chain must differ from the clamped chain".into(),
        ));
    }
    let baseline = run_lde(initial, *params, spec.n_steps, &[], None)?;
    let base = baseline.series(probe);
    let base = &base[spec.burn_in + 1..];
    let per_clamp = spec
        .clamp_values
        .iter()
        .map(|&value| {
            let run = intervene(
                params,
                Clamp {
                    chain: target,
                    value,
                },
                initial,
                spec.n_steps,
            )?;
            let probed = run.series(probe);
            Ok(tv_distance(base, &probed[spec.burn_in + 1..], spec.epsilon))
        })
        .collect::<Result<Vec<f64>>>()?;
    let shift = per_clamp.iter().copied().fold(0.0, f64::max);
    Ok(ShiftResult {
        clamped: target,
        probe,
        per_clamp,
        shift,
    })
}

/// Total-variation distance between the empirical distributions of `a` and
/// `b` after rounding to multiples of `epsilon`.
pub fn tv_distance(a: &[f64], b: &[f64], epsilon: f64) -> f64 {
    let mut bins: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for &v in a {
        bins.entry(quantize(v, epsilon)).or_default().0 += 1;
    }
    for &v in b {
        bins.entry(quantize(v, epsilon)).or_default().1 += 1;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total: f64 = bins
        .values()
        .map(|&(ca, cb)| (ca as f64 / na - cb as f64 / nb).abs())
        .sum();
    (0.5 * total).clamp(0.0, 1.0)
}
