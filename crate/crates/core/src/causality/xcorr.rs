use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{is_constant, pearson};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagPeak {
    /// Correlation with the largest magnitude over all lags.
    pub peak: f64,
    pub lag: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XcorrResult {
    /// `corr(y[n], x[n-k])`: x leads.
    pub x_to_y: LagPeak,
    /// `corr(x[n], y[n-k])`: y leads.
    pub y_to_x: LagPeak,
}

/// Peak lagged Pearson correlation in each direction for `k = 0..=max_lag`.
/// Ties in magnitude keep the smaller lag.
pub fn lagged_xcorr(x: &[f64], y: &[f64], max_lag: usize) -> Result<XcorrResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() <= 4 * max_lag || x.len() < 3 {
        return Err(Error::InvalidParams(format!(
            "series length {} must exceed 4 * max_lag = {}",
            x.len(),
            4 * max_lag
        )));
    }
    if is_constant(x) || is_constant(y) {
        return Err(Error::DegenerateSeries(
            "cross-correlation of a constant series".into(),
        ));
    }
    Ok(XcorrResult {
        x_to_y: peak(y, x, max_lag)?,
        y_to_x: peak(x, y, max_lag)?,
    })
}

/// Peak of `corr(led[n], leader[n-k])`.
fn peak(led: &[f64], leader: &[f64], max_lag: usize) -> Result<LagPeak> {
    let n = led.len();
    let mut best = LagPeak { peak: 0.0, lag: 0 };
    let mut best_abs = -1.0;
    for k in 0..=max_lag {
        let c = pearson(&led[k..], &leader[..n - k])?;
        if c.abs() > best_abs {
            best_abs = c.abs();
            best = LagPeak { peak: c, lag: k };
        }
    }
    Ok(best)
}
