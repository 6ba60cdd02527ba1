use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the two-chain coupled difference equation.
///
/// `a_yx` is the weight with which `y` enters the growth exponent of `x`,
/// `a_xy` the reverse. A nonzero `a_yx` with `a_xy == 0` is a unidirectional
/// chain from `y` to `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainParams {
    pub r_x: f64,
    pub r_y: f64,
    pub k_x: f64,
    pub k_y: f64,
    pub a_yx: f64,
    pub a_xy: f64,
}

impl ChainParams {
    pub fn new(r_x: f64, r_y: f64, k_x: f64, k_y: f64, a_yx: f64, a_xy: f64) -> Result<Self> {
        let params = Self {
            r_x,
            r_y,
            k_x,
            k_y,
            a_yx,
            a_xy,
        };
        params.validate()?;
        Ok(params)
    }

    /// Default one-way setup in which y drives x: `r_x = r`,
    /// `r_y = 0.95 r`, `K_x = 0.95`, `K_y = 1`, `a_yx = -0.1`, `a_xy = 0`.
    pub fn unidirectional(r: f64) -> Self {
        Self {
            r_x: r,
            r_y: 0.95 * r,
            k_x: 0.95,
            k_y: 1.0,
            a_yx: -0.1,
            a_xy: 0.0,
        }
    }

    /// Both chains run the same uncoupled map.
    pub fn uncoupled(r: f64, k: f64) -> Self {
        Self {
            r_x: r,
            r_y: r,
            k_x: k,
            k_y: k,
            a_yx: 0.0,
            a_xy: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("r_x", self.r_x),
            ("r_y", self.r_y),
            ("k_x", self.k_x),
            ("k_y", self.k_y),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("a_yx", self.a_yx), ("a_xy", self.a_xy)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Interior fixed point solving `x = K_x - a_yx y`, `y = K_y - a_xy x`.
    ///
    /// Returns `None` when the linear system is singular or the solution is
    /// not strictly positive.
    pub fn interior_fixed_point(&self) -> Option<(f64, f64)> {
        let det = 1.0 - self.a_yx * self.a_xy;
        if det.abs() < 1e-12 {
            return None;
        }
        let x = (self.k_x - self.a_yx * self.k_y) / det;
        let y = (self.k_y - self.a_xy * self.k_x) / det;
        (x > 0.0 && y > 0.0).then_some((x, y))
    }
}

/// State of both chains at iteration `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub x: f64,
    pub y: f64,
    pub n: usize,
}

impl ChainState {
    /// Initial state at iteration 0.
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y, n: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("x", self.x), ("y", self.y)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::DomainViolation(format!(
                    "state {name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, chain: crate::Chain) -> f64 {
        match chain {
            crate::Chain::X => self.x,
            crate::Chain::Y => self.y,
        }
    }
}

impl Default for ChainState {
    fn default() -> Self {
        Self::new(0.5, 0.5)
    }
}

/// Lotka-Volterra coefficients for `S1' = a S1 - b S1 S2`, `S2' = c S2 - d S1 S2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LvParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LvParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let lv = Self { a, b, c, d };
        lv.validate()?;
        Ok(lv)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "LV coefficient {name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Coexistence equilibrium `(c/d, a/b)`.
    pub fn equilibrium(&self) -> (f64, f64) {
        (self.c / self.d, self.a / self.b)
    }

    /// First integral `d S1 - c ln S1 - b S2 + a ln S2`, constant along exact
    /// orbits of this sign convention (both populations grow alone and
    /// suppress each other through the product term).
    pub fn first_integral(&self, s1: f64, s2: f64) -> f64 {
        self.d * s1 - self.c * s1.ln() - self.b * s2 + self.a * s2.ln()
    }
}

/// Selector for a single field of [`ChainParams`].
///
/// The declaration order is the canonical order in which simultaneous
/// changes are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamTarget {
    RX,
    RY,
    KX,
    KY,
    AYx,
    AXy,
}

impl ParamTarget {
    pub const ALL: [ParamTarget; 6] = [
        ParamTarget::RX,
        ParamTarget::RY,
        ParamTarget::KX,
        ParamTarget::KY,
        ParamTarget::AYx,
        ParamTarget::AXy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamTarget::RX => "r_x",
            ParamTarget::RY => "r_y",
            ParamTarget::KX => "k_x",
            ParamTarget::KY => "k_y",
            ParamTarget::AYx => "a_yx",
            ParamTarget::AXy => "a_xy",
        }
    }

    pub fn get(self, p: &ChainParams) -> f64 {
        match self {
            ParamTarget::RX => p.r_x,
            ParamTarget::RY => p.r_y,
            ParamTarget::KX => p.k_x,
            ParamTarget::KY => p.k_y,
            ParamTarget::AYx => p.a_yx,
            ParamTarget::AXy => p.a_xy,
        }
    }

    pub fn set(self, p: &mut ChainParams, value: f64) {
        match self {
            ParamTarget::RX => p.r_x = value,
            ParamTarget::RY => p.r_y = value,
            ParamTarget::KX => p.k_x = value,
            ParamTarget::KY => p.k_y = value,
            ParamTarget::AYx => p.a_yx = value,
            ParamTarget::AXy => p.a_xy = value,
        }
    }

    /// Growth rates and capacities must stay strictly positive.
    pub fn requires_positive(self) -> bool {
        !matches!(self, ParamTarget::AYx | ParamTarget::AXy)
    }
}

impl std::fmt::Display for ParamTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ParamTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamTarget::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown parameter target {s:?}")))
    }
}
