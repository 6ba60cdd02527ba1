//! Experiment configuration: one JSON document per run.

use std::path::PathBuf;

use chainlab_core::causality::DetectConfig;
use chainlab_core::dynamics::ode::DEFAULT_DT;
use chainlab_core::{Chain, ChainParams, ChainState, LvParams, ParamTarget, SweepSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    CoupledLde,
    Ode,
    LotkaVolterra,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub x: f64,
    pub y: f64,
}

impl Initial {
    pub fn state(&self) -> ChainState {
        ChainState::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub target: ParamTarget,
    pub rate: f64,
    pub low: f64,
    pub high: f64,
    /// Defaults to the experiment seed plus the schedule's position.
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterveneConfig {
    pub chain: Chain,
    /// Clamp value; defaults to the clamped chain's carrying capacity.
    pub value: Option<f64>,
    pub n_steps: usize,
    pub burn_in: usize,
    pub epsilon: f64,
}

impl Default for InterveneConfig {
    fn default() -> Self {
        Self {
            chain: Chain::Y,
            value: None,
            n_steps: 10_000,
            burn_in: 1000,
            epsilon: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: Model,
    pub params: ChainParams,
    pub lv: LvParams,
    pub initial: Initial,
    /// Iterations of the discrete map.
    pub steps: usize,
    /// Step size and horizon of the continuous models.
    pub dt: f64,
    pub t_end: f64,
    pub sweep: SweepSpec,
    pub perturbations: Vec<PerturbationConfig>,
    /// Explicit `iteration,target,value` event log applied by `perturb`.
    pub events_file: Option<PathBuf>,
    pub detect: DetectConfig,
    pub intervene: InterveneConfig,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: Model::CoupledLde,
            params: ChainParams::unidirectional(3.0),
            lv: LvParams {
                a: 0.3,
                b: 1.0,
                c: 0.2,
                d: 1.0,
            },
            initial: Initial { x: 0.5, y: 0.5 },
            steps: 2000,
            dt: DEFAULT_DT,
            t_end: 20.0,
            sweep: SweepSpec::default(),
            perturbations: Vec::new(),
            events_file: None,
            detect: DetectConfig::default(),
            intervene: InterveneConfig::default(),
            seed: 0,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    /// Check every section before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |e: chainlab_core::Error| CliError::Config(e.to_string());
        self.params.validate().map_err(cfg)?;
        self.lv.validate().map_err(cfg)?;
        self.initial.state().validate().map_err(cfg)?;
        if self.steps < 1 {
            return Err(CliError::Config("steps must be >= 1".into()));
        }
        if !(self.dt > 0.0 && self.t_end > self.dt) {
            return Err(CliError::Config(format!(
                "need 0 < dt < t_end, got dt={}, t_end={}",
                self.dt, self.t_end
            )));
        }
        self.sweep.validate().map_err(cfg)?;
        let mut targets = Vec::new();
        for p in &self.perturbations {
            if targets.contains(&p.target) {
                return Err(CliError::Config(format!(
                    "two perturbations target {}",
                    p.target
                )));
            }
            targets.push(p.target);
            chainlab_core::generate_schedule(p.target, p.rate, p.low, p.high, 0, 1).map_err(cfg)?;
        }
        let iv = &self.intervene;
        if let Some(v) = iv.value {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Config(format!(
                    "intervene.value must be finite and >= 0, got {v}"
                )));
            }
        }
        if iv.n_steps < 1 || iv.burn_in >= iv.n_steps || iv.epsilon.is_nan() || iv.epsilon <= 0.0 {
            return Err(CliError::Config(
                "intervene needs n_steps > burn_in and epsilon > 0".into(),
            ));
        }
        Ok(())
    }

    /// Checks that only matter when the detectors run on the simulated series.
    pub fn validate_detect(&self) -> Result<(), CliError> {
        let cfg = |e: chainlab_core::Error| CliError::Config(e.to_string());
        let d = &self.detect;
        if d.burn_in >= self.steps {
            return Err(CliError::Config(
                "detect.burn_in must be shorter than steps".into(),
            ));
        }
        if let Some(ivc) = &d.intervention {
            for chain in [Chain::X, Chain::Y] {
                ivc.shift_spec(chain, &self.params)
                    .validate()
                    .map_err(cfg)?;
            }
        }
        let series_len = self.steps + 1 - d.burn_in;
        d.ccm
            .embedding(series_len)
            .validate(series_len)
            .map_err(cfg)?;
        Ok(())
    }

    /// Copy with every default made explicit.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        for (i, p) in out.perturbations.iter_mut().enumerate() {
            p.seed.get_or_insert(self.seed.wrapping_add(i as u64));
        }
        let k = match self.intervene.chain {
            Chain::X => self.params.k_x,
            Chain::Y => self.params.k_y,
        };
        out.intervene.value.get_or_insert(k);
        if self.detect.burn_in < self.steps {
            out.detect = self
                .detect
                .resolved(&self.params, self.steps + 1 - self.detect.burn_in);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        assert_eq!(
            ExperimentConfig::parse("{}").unwrap(),
            ExperimentConfig::default()
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::parse(r#"{"stepz": 5}"#).is_err());
        assert!(ExperimentConfig::parse(
            r#"{"params": {"r_x": 1, "r_y": 1, "k_x": 1, "k_y": 1, "a_yx": 0, "a_xy": 0, "q": 1}}"#
        )
        .is_err());
        assert!(ExperimentConfig::parse(r#"{"sweep": {"nr": 5}}"#).is_err());
    }

    #[test]
    fn validation_catches_bad_sections() {
        let mut c = ExperimentConfig::default();
        c.params.r_x = -1.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.sweep.n_r = 1;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.perturbations.push(PerturbationConfig {
            target: ParamTarget::RX,
            rate: 0.1,
            low: 2.0,
            high: 1.0,
            seed: None,
        });
        assert!(c.validate().is_err());
        ExperimentConfig::default().validate().unwrap();
        ExperimentConfig::default().validate_detect().unwrap();
    }

    #[test]
    fn short_runs_are_valid_except_for_detect() {
        let c = ExperimentConfig {
            steps: 50,
            ..ExperimentConfig::default()
        };
        c.validate().unwrap();
        assert!(c.validate_detect().is_err());
        assert_eq!(c.normalized().detect, c.detect);
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut c = ExperimentConfig::default();
        c.perturbations.push(PerturbationConfig {
            target: ParamTarget::KY,
            rate: 0.01,
            low: 0.9,
            high: 1.1,
            seed: None,
        });
        let n = c.normalized();
        assert_eq!(n.perturbations[0].seed, Some(0));
        assert_eq!(n.intervene.value, Some(1.0));
        assert!(n.detect.ccm.library_sizes.is_some());
        assert_eq!(n.normalized(), n);
        assert_eq!(ExperimentConfig::parse(&n.to_json()).unwrap(), n);
    }
}
