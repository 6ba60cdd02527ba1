//! Per-method direction calls and the combined report.

use serde::{Deserialize, Serialize};

use crate::causality::ccm::CcmResult;
use crate::causality::granger::GrangerResult;
use crate::causality::hypothesis::Direction;
use crate::causality::intervention::ShiftResult;
use crate::causality::xcorr::XcorrResult;
use crate::error::{Error, Result};
use crate::stats::sig6;

pub const AMBIGUITY_FLAG: &str = "OBSERVATIONALLY-AMBIGUOUS";
pub const SYNCHRONY_FLAG: &str = "CCM-SYNCHRONY";

/// Fixed decision thresholds. Every report carries the values it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Minimum |peak correlation| for a lagged-correlation edge.
    pub xcorr_min: f64,
    /// A direction must be within this margin of the stronger one to count.
    pub xcorr_margin: f64,
    /// Significance level for a Granger edge.
    pub granger_alpha: f64,
    /// Minimum skill at the largest library for a cross-map edge.
    pub ccm_min_skill: f64,
    /// Allowed drop of skill from the smallest to the largest library.
    pub ccm_convergence_tol: f64,
    /// Skill above which both directions count as synchronized.
    pub ccm_synchrony: f64,
    /// Total-variation shift above which a clamp counts as causal influence.
    pub shift: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            xcorr_min: 0.2,
            xcorr_margin: 0.05,
            granger_alpha: 0.01,
            ccm_min_skill: 0.5,
            ccm_convergence_tol: 0.02,
            ccm_synchrony: 0.99,
            shift: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionalResult {
    /// Clamp x, probe y.
    pub x_to_y: ShiftResult,
    /// Clamp y, probe x.
    pub y_to_x: ShiftResult,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectorOutputs {
    pub xcorr: Option<XcorrResult>,
    pub granger: Option<GrangerResult>,
    pub ccm: Option<CcmResult>,
    pub interventional: Option<InterventionalResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub xcorr: Option<Direction>,
    pub granger: Option<Direction>,
    pub ccm: Option<Direction>,
    pub interventional: Option<Direction>,
    /// Interventional call when available, else the unanimous observational
    /// call, else undetermined.
    pub overall: Option<Direction>,
    pub flags: Vec<String>,
}

impl Verdict {
    pub fn ambiguous(&self) -> bool {
        self.flags.iter().any(|f| f == AMBIGUITY_FLAG)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalReport {
    pub xcorr: Option<XcorrResult>,
    pub granger: Option<GrangerResult>,
    pub ccm: Option<CcmResult>,
    pub interventional: Option<InterventionalResult>,
    pub verdict: Verdict,
    pub config: serde_json::Value,
}

impl CausalReport {
    /// Pretty JSON with every float rounded to six significant digits.
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut value);
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }
}

fn round_floats(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(f) = n
                .as_f64()
                .and_then(|f| serde_json::Number::from_f64(sig6(f)))
            {
                *n = f;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn xcorr_call(r: &XcorrResult, t: &Thresholds) -> Direction {
    let (a, b) = (r.x_to_y.peak.abs(), r.y_to_x.peak.abs());
    Direction::from_edges(
        a >= t.xcorr_min && a + t.xcorr_margin >= b,
        b >= t.xcorr_min && b + t.xcorr_margin >= a,
    )
}

pub fn granger_call(r: &GrangerResult, t: &Thresholds) -> Direction {
    Direction::from_edges(
        r.x_to_y.p_value < t.granger_alpha,
        r.y_to_x.p_value < t.granger_alpha,
    )
}

pub fn ccm_call(r: &CcmResult, t: &Thresholds) -> Direction {
    let edge = |curve: &[f64]| match (curve.first(), curve.last()) {
        (Some(&first), Some(&last)) => {
            last >= t.ccm_min_skill && last >= first - t.ccm_convergence_tol
        }
        _ => false,
    };
    Direction::from_edges(edge(&r.x_to_y), edge(&r.y_to_x))
}

fn ccm_synchronized(r: &CcmResult, t: &Thresholds) -> bool {
    let last = |c: &[f64]| c.last().copied().unwrap_or(0.0);
    last(&r.x_to_y) >= t.ccm_synchrony && last(&r.y_to_x) >= t.ccm_synchrony
}

pub fn interventional_call(r: &InterventionalResult, t: &Thresholds) -> Direction {
    Direction::from_edges(r.x_to_y.shift > t.shift, r.y_to_x.shift > t.shift)
}

/// Combine detector outputs into per-method calls and flags.
///
/// The ambiguity flag is raised when the observational calls disagree with
/// each other, when a decisive intervention disagrees with any of them, or
/// when cross mapping is saturated in both directions.
pub fn adjudicate(
    outputs: DetectorOutputs,
    thresholds: &Thresholds,
    config: serde_json::Value,
) -> Result<CausalReport> {
    if outputs.xcorr.is_none() && outputs.granger.is_none() && outputs.ccm.is_none() {
        return Err(Error::InvalidParams(
            "adjudication needs at least one observational method".into(),
        ));
    }
    let xcorr = outputs.xcorr.as_ref().map(|r| xcorr_call(r, thresholds));
    let granger = outputs
        .granger
        .as_ref()
        .map(|r| granger_call(r, thresholds));
    let ccm = outputs.ccm.as_ref().map(|r| ccm_call(r, thresholds));
    let interventional = outputs
        .interventional
        .as_ref()
        .map(|r| interventional_call(r, thresholds));

    let observational: Vec<Direction> = [xcorr, granger, ccm].into_iter().flatten().collect();
    let unanimous = observational.windows(2).all(|w| w[0] == w[1]);
    let synchronized = outputs
        .ccm
        .as_ref()
        .is_some_and(|r| ccm_synchronized(r, thresholds));

    let mut flags = Vec::new();
    let contradicted = interventional
        .is_some_and(|i| i != Direction::None && observational.iter().any(|&o| o != i));
    if !unanimous || contradicted || synchronized {
        flags.push(AMBIGUITY_FLAG.to_string());
    }
    if synchronized {
        flags.push(SYNCHRONY_FLAG.to_string());
    }

    let overall = interventional.or(if unanimous {
        observational.first().copied()
    } else {
        None
    });
    Ok(CausalReport {
        xcorr: outputs.xcorr,
        granger: outputs.granger,
        ccm: outputs.ccm,
        interventional: outputs.interventional,
        verdict: Verdict {
            xcorr,
            granger,
            ccm,
            interventional,
            overall,
            flags,
        },
        config,
    })
}
