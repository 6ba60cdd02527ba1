use serde::{Deserialize, Serialize};

use crate::dynamics::params::ChainParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "x->y")]
    XToY,
    #[serde(rename = "y->x")]
    YToX,
    #[serde(rename = "both")]
    Both,
    #[serde(rename = "none")]
    None,
}

impl Direction {
    pub fn from_edges(x_to_y: bool, y_to_x: bool) -> Self {
        match (x_to_y, y_to_x) {
            (true, true) => Direction::Both,
            (true, false) => Direction::XToY,
            (false, true) => Direction::YToX,
            (false, false) => Direction::None,
        }
    }

    pub fn has_x_to_y(self) -> bool {
        matches!(self, Direction::XToY | Direction::Both)
    }

    pub fn has_y_to_x(self) -> bool {
        matches!(self, Direction::YToX | Direction::Both)
    }
}

/// Sign annotation of a causal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feedback {
    /// "-"
    #[serde(rename = "-")]
    SelfLimiting,
    /// "+"
    #[serde(rename = "+")]
    Destabilizing,
    #[serde(rename = "absent")]
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalGraphHypothesis {
    pub direction: Direction,
    pub feedback_x_to_y: Feedback,
    pub feedback_y_to_x: Feedback,
}

impl CausalGraphHypothesis {
    pub fn new(
        direction: Direction,
        feedback_x_to_y: Feedback,
        feedback_y_to_x: Feedback,
    ) -> Result<Self> {
        let edge_ok = |present: bool, fb: Feedback| present == (fb != Feedback::Absent);
        if !edge_ok(direction.has_x_to_y(), feedback_x_to_y)
            || !edge_ok(direction.has_y_to_x(), feedback_y_to_x)
        {
            return Err(Error::InvalidParams(format!(
                "feedback annotations {feedback_x_to_y:?}/{feedback_y_to_x:?} do not match direction {direction:?}"
            )));
        }
        Ok(Self {
            direction,
            feedback_x_to_y,
            feedback_y_to_x,
        })
    }

    /// Ground-truth graph encoded by the coupling coefficients. A negative
    /// coupling raises the receiving chain's growth exponent and is read as
    /// destabilizing ("+"); a positive one as self-limiting ("-").
    pub fn from_params(p: &ChainParams) -> Self {
        let sign = |a: f64| {
            if a == 0.0 {
                Feedback::Absent
            } else if a < 0.0 {
                Feedback::Destabilizing
            } else {
                Feedback::SelfLimiting
            }
        };
        Self {
            direction: Direction::from_edges(p.a_xy != 0.0, p.a_yx != 0.0),
            feedback_x_to_y: sign(p.a_xy),
            feedback_y_to_x: sign(p.a_yx),
        }
    }
}
