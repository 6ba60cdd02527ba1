use std::fmt;

use serde::{Deserialize, Serialize};

/// Which of the two chains a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chain {
    X,
    Y,
}

impl Chain {
    pub fn other(self) -> Chain {
        match self {
            Chain::X => Chain::Y,
            Chain::Y => Chain::X,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Chain::X => "x",
            Chain::Y => "y",
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An update produced an infinite or NaN value.
    #[error("non-finite value in chain {chain} at iteration {index}")]
    NonFinite { chain: Chain, index: usize },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    #[error("insufficient neighbors: library size {library} < {required}")]
    InsufficientNeighbors { library: usize, required: usize },
}

impl Error {
    /// True for errors caused by numerical blow-up of a run.
    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::NonFinite { .. })
    }

    /// True for errors raised by a detector on unusable input data.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSeries(_)
                | Error::SingularDesign(_)
                | Error::InsufficientNeighbors { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
