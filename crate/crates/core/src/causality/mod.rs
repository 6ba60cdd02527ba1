//! Causal-direction detection between the two chains.
//!
//! Three observational detectors (lagged correlation, Granger, convergent
//! cross mapping) and one interventional one (clamping a chain and
//! measuring the distribution shift of the other) feed [`adjudicate`].
//! In chaotic or synchronized regimes the observational methods are
//! expected to disagree; reports surface that instead of resolving it.

pub mod ccm;
pub mod granger;
pub mod hypothesis;
pub mod intervention;
pub mod report;
pub mod xcorr;

use serde::{Deserialize, Serialize};

pub use ccm::{ccm, cross_map_skill, CcmResult, EmbeddingSpec};
pub use granger::{granger, FTest, GrangerResult};
pub use hypothesis::{CausalGraphHypothesis, Direction, Feedback};
pub use intervention::{intervene, interventional_shift, tv_distance, ShiftResult, ShiftSpec};
pub use report::{
    adjudicate, CausalReport, DetectorOutputs, InterventionalResult, Thresholds, Verdict,
};
pub use xcorr::{lagged_xcorr, LagPeak, XcorrResult};

use crate::dynamics::params::{ChainParams, ChainState};
use crate::dynamics::trajectory::Trajectory;
use crate::error::{Chain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CcmConfig {
    pub e: usize,
    pub tau: usize,
    /// Explicit library sizes; log-spaced defaults when absent.
    pub library_sizes: Option<Vec<usize>>,
    pub library_count: usize,
}

impl Default for CcmConfig {
    fn default() -> Self {
        Self {
            e: ccm::DEFAULT_E,
            tau: ccm::DEFAULT_TAU,
            library_sizes: None,
            library_count: ccm::DEFAULT_LIBRARY_COUNT,
        }
    }
}

impl CcmConfig {
    pub fn embedding(&self, series_len: usize) -> EmbeddingSpec {
        match &self.library_sizes {
            Some(sizes) => EmbeddingSpec {
                e: self.e,
                tau: self.tau,
                library_sizes: sizes.clone(),
            },
            None => EmbeddingSpec::log_spaced(self.e, self.tau, series_len, self.library_count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterventionConfig {
    /// Values x is clamped to; defaults to 0.5, 1 and 1.5 times `K_x`.
    pub clamp_x: Option<Vec<f64>>,
    /// Values y is clamped to; defaults to 0.5, 1 and 1.5 times `K_y`.
    pub clamp_y: Option<Vec<f64>>,
    pub n_steps: usize,
    pub burn_in: usize,
    pub epsilon: f64,
}

impl Default for InterventionConfig {
    fn default() -> Self {
        Self {
            clamp_x: None,
            clamp_y: None,
            n_steps: 10_000,
            burn_in: 1000,
            epsilon: 1e-2,
        }
    }
}

impl InterventionConfig {
    pub fn shift_spec(&self, clamped: Chain, params: &ChainParams) -> ShiftSpec {
        let (explicit, k) = match clamped {
            Chain::X => (&self.clamp_x, params.k_x),
            Chain::Y => (&self.clamp_y, params.k_y),
        };
        ShiftSpec {
            clamp_values: explicit
                .clone()
                .unwrap_or_else(|| vec![0.5 * k, k, 1.5 * k]),
            n_steps: self.n_steps,
            burn_in: self.burn_in,
            epsilon: self.epsilon,
        }
    }
}

/// Settings of a full detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectConfig {
    /// Leading states of the observed trajectory ignored by all detectors.
    pub burn_in: usize,
    pub xcorr_max_lag: usize,
    pub granger_order: usize,
    pub ccm: CcmConfig,
    pub intervention: Option<InterventionConfig>,
    pub thresholds: Thresholds,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            burn_in: 200,
            xcorr_max_lag: 10,
            granger_order: granger::DEFAULT_ORDER,
            ccm: CcmConfig::default(),
            intervention: Some(InterventionConfig::default()),
            thresholds: Thresholds::default(),
        }
    }
}

impl DetectConfig {
    /// Copy with every data-dependent default made explicit.
    pub fn resolved(&self, params: &ChainParams, series_len: usize) -> DetectConfig {
        let mut out = self.clone();
        out.ccm.library_sizes = Some(self.ccm.embedding(series_len).library_sizes);
        if let Some(iv) = out.intervention.as_mut() {
            iv.clamp_x = Some(iv.shift_spec(Chain::X, params).clamp_values);
            iv.clamp_y = Some(iv.shift_spec(Chain::Y, params).clamp_values);
        }
        out
    }
}

/// Run every configured detector on `observed` (and, for interventions, on
/// fresh runs of `params` from `initial`) and adjudicate.
pub fn detect(
    observed: &Trajectory,
    params: &ChainParams,
    initial: ChainState,
    config: &DetectConfig,
) -> Result<CausalReport> {
    let data = observed.skip(config.burn_in.min(observed.len().saturating_sub(1)));
    let (x, y) = (data.xs(), data.ys());
    let resolved = config.resolved(params, x.len());

    let xcorr = lagged_xcorr(&x, &y, config.xcorr_max_lag)?;
    let granger = granger(&x, &y, config.granger_order)?;
    let ccm = ccm(&x, &y, &config.ccm.embedding(x.len()))?;
    let interventional = match &config.intervention {
        Some(iv) => Some(InterventionalResult {
            x_to_y: interventional_shift(
                params,
                Chain::X,
                Chain::Y,
                initial,
                &iv.shift_spec(Chain::X, params),
            )?,
            y_to_x: interventional_shift(
                params,
                Chain::Y,
                Chain::X,
                initial,
                &iv.shift_spec(Chain::Y, params),
            )?,
        }),
        None => None,
    };

    let config_json = serde_json::json!({
        "detect": resolved,
        "params": params,
        "initial": initial,
        "ground_truth": CausalGraphHypothesis::from_params(params),
        "samples": x.len(),
    });
    adjudicate(
        DetectorOutputs {
            xcorr: Some(xcorr),
            granger: Some(granger),
            ccm: Some(ccm),
            interventional,
        },
        &config.thresholds,
        config_json,
    )
}
