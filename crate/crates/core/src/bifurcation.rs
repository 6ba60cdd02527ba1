//! Parameter sweeps over the growth rate and attractor census.
//!
//! Each grid cell iterates the coupled map from a fixed initial state,
//! discards `n_burn` transients and records the next `n_keep` iterates of
//! both chains rounded to the nearest multiple of `epsilon`. Cells are
//! independent and evaluated in parallel unless `continuation` is set.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::maps::coupled;
use crate::dynamics::params::{ChainParams, ChainState};
use crate::error::{Chain, Error, Result};

/// Maps a grid value `r` to a full parameter set: growth rates scale with
/// `r`, the remaining fields are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamRule {
    pub r_x_scale: f64,
    pub r_y_scale: f64,
    pub k_x: f64,
    pub k_y: f64,
    pub a_yx: f64,
    pub a_xy: f64,
}

impl ParamRule {
    pub fn params(&self, r: f64) -> ChainParams {
        ChainParams {
            r_x: self.r_x_scale * r,
            r_y: self.r_y_scale * r,
            k_x: self.k_x,
            k_y: self.k_y,
            a_yx: self.a_yx,
            a_xy: self.a_xy,
        }
    }
}

impl Default for ParamRule {
    /// `r_x = r`, `r_y = 0.95 r`, `K_x = 0.95`, `K_y = 1`, `a_yx = -0.1`, `a_xy = 0`.
    fn default() -> Self {
        Self {
            r_x_scale: 1.0,
            r_y_scale: 0.95,
            k_x: 0.95,
            k_y: 1.0,
            a_yx: -0.1,
            a_xy: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_burn: usize,
    pub n_keep: usize,
    pub epsilon: f64,
    pub param_rule: ParamRule,
    /// Start each cell from the final state of the previous one instead of
    /// from the shared initial state. Forces sequential evaluation.
    pub continuation: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            r_min: 1.5,
            r_max: 3.0,
            n_r: 1500,
            n_burn: 1000,
            n_keep: 500,
            epsilon: 1e-4,
            param_rule: ParamRule::default(),
            continuation: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min.is_finite() && self.r_max.is_finite() && self.r_min < self.r_max) {
            return Err(Error::InvalidParams(format!(
                "sweep needs r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.n_r < 2 {
            return Err(Error::InvalidParams(format!(
                "sweep needs n_r >= 2, got {}",
                self.n_r
            )));
        }
        if self.n_keep < 1 {
            return Err(Error::InvalidParams("sweep needs n_keep >= 1".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        self.param_rule.params(self.r_min).validate()?;
        self.param_rule.params(self.r_max).validate()
    }

    /// Evenly spaced grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.r_max - self.r_min) / (self.n_r - 1) as f64;
        (0..self.n_r)
            .map(|i| {
                if i + 1 == self.n_r {
                    self.r_max
                } else {
                    self.r_min + i as f64 * step
                }
            })
            .collect()
    }
}

/// Attractor samples of one grid cell, stored as integer multiples of epsilon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub x: BTreeSet<i64>,
    pub y: BTreeSet<i64>,
    pub diverged: bool,
}

impl Cell {
    pub fn levels(&self, chain: Chain) -> &BTreeSet<i64> {
        match chain {
            Chain::X => &self.x,
            Chain::Y => &self.y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationDiagram {
    pub epsilon: f64,
    pub r: Vec<f64>,
    pub cells: Vec<Cell>,
}

impl BifurcationDiagram {
    /// Attractor values of `chain` at cell `i`, ascending.
    pub fn values(&self, i: usize, chain: Chain) -> impl Iterator<Item = f64> + '_ {
        let eps = self.epsilon;
        self.cells[i]
            .levels(chain)
            .iter()
            .map(move |&k| k as f64 * eps)
    }
}

/// Nearest multiple of `epsilon`, halves rounded away from zero.
pub fn quantize(v: f64, epsilon: f64) -> i64 {
    (v / epsilon).round() as i64
}

fn run_cell(
    params: &ChainParams,
    start: ChainState,
    spec: &SweepSpec,
) -> (Cell, Option<ChainState>) {
    let mut cell = Cell {
        x: BTreeSet::new(),
        y: BTreeSet::new(),
        diverged: false,
    };
    let mut s = ChainState { n: 0, ..start };
    for i in 0..spec.n_burn + spec.n_keep {
        s = match coupled(&s, params) {
            Ok(next) => next,
            Err(_) => {
                cell.x.clear();
                cell.y.clear();
                cell.diverged = true;
                return (cell, None);
            }
        };
        if i >= spec.n_burn {
            cell.x.insert(quantize(s.x, spec.epsilon));
            cell.y.insert(quantize(s.y, spec.epsilon));
        }
    }
    (cell, Some(s))
}

/// One independent grid cell at growth rate `r`, started from `initial`.
pub fn sweep_cell(spec: &SweepSpec, r: f64, initial: ChainState) -> Cell {
    run_cell(&spec.param_rule.params(r), initial, spec).0
}

/// Sweep the growth parameter and collect quantized attractor samples.
///
/// Divergent cells are flagged and left empty.
pub fn sweep(spec: &SweepSpec, initial: ChainState) -> Result<BifurcationDiagram> {
    spec.validate()?;
    initial.validate()?;
    let r = spec.grid();
    let cells = if spec.continuation {
        let mut state = initial;
        r.iter()
            .map(|&ri| {
                let (cell, last) = run_cell(&spec.param_rule.params(ri), state, spec);
                state = last.unwrap_or(initial);
                cell
            })
            .collect()
    } else {
        r.par_iter()
            .map(|&ri| sweep_cell(spec, ri, initial))
            .collect()
    };
    Ok(BifurcationDiagram {
        epsilon: spec.epsilon,
        r,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub x: usize,
    pub y: usize,
    pub diverged: bool,
}

impl Census {
    pub fn get(&self, chain: Chain) -> usize {
        match chain {
            Chain::X => self.x,
            Chain::Y => self.y,
        }
    }
}

/// Number of distinct attractor values per chain in each cell.
pub fn attractor_census(diagram: &BifurcationDiagram) -> Vec<Census> {
    diagram
        .cells
        .iter()
        .map(|c| Census {
            x: c.x.len(),
            y: c.y.len(),
            diverged: c.diverged,
        })
        .collect()
}
