//! Scenario files and their translation into gallery scenarios.

use std::path::{Path, PathBuf};

use quadseq::{
    preset, GalleryError, GeneratorSpec, ParameterFrame, Plan, PresetOptions, Rational, RealBasis,
    Scenario, ScriptedStep, SequenceError, StepKind, ValueError, ValueVector,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::CHECKS;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Argmin,
    Scripted,
}

/// An inline plan step; values are dense coefficient lists over the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanStepConfig {
    Monomial {
        dir: usize,
    },
    Rescale {
        #[serde(default)]
        dir: Option<usize>,
        new_values: Vec<Vec<Rational>>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub interval_width: Option<Rational>,
}

/// A scenario file: either a preset with overrides, or an explicit frame
/// with an argmin or scripted plan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub basis: Option<Vec<GeneratorSpec>>,
    #[serde(default)]
    pub frame: Option<Vec<Vec<Rational>>>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub plan: Option<Vec<PlanStepConfig>>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Absent: the preset's default checks. Empty: trace only.
    #[serde(default)]
    pub checks: Option<Vec<String>>,
    /// Window for the switching witness; defaults to `min(steps, 100)`.
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub timings: bool,
}

pub fn default_interval_width() -> Rational {
    Rational::new(1, 1_000_000)
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_preset(name: &str) -> Self {
        ScenarioConfig {
            preset: Some(name.to_string()),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(checks) = &self.checks {
            for c in checks {
                if !CHECKS.iter().any(|k| k.name == c) {
                    return Err(ConfigError::UnknownCheck(c.clone()));
                }
            }
        }
        if let Some(w) = &self.output.interval_width {
            if !w.is_positive() {
                return Err(ConfigError::Invalid(
                    "interval_width must be positive".into(),
                ));
            }
        }
        if self.preset.is_none() && self.frame.is_none() {
            return Err(ConfigError::Invalid(
                "give either a preset or a frame".into(),
            ));
        }
        if self.preset.is_some() && (self.frame.is_some() || self.plan.is_some()) {
            return Err(ConfigError::Invalid(
                "a preset supplies its own frame and plan".into(),
            ));
        }
        Ok(())
    }

    pub fn interval_width(&self) -> Rational {
        self.output
            .interval_width
            .clone()
            .unwrap_or_else(default_interval_width)
    }

    /// The requested checks, or the preset's defaults when none are given.
    pub fn check_names(&self) -> Vec<String> {
        match (&self.checks, &self.preset) {
            (Some(c), _) => c.clone(),
            (None, Some(p)) => default_checks(p).iter().map(|s| s.to_string()).collect(),
            (None, None) => Vec::new(),
        }
    }

    pub fn build(&self) -> Result<Scenario, ConfigError> {
        self.validate()?;
        let mut scenario = match &self.preset {
            Some(name) => preset(
                name,
                &PresetOptions {
                    steps: self.steps,
                    seed: self.seed,
                    dim: self.dimension,
                },
            )?,
            None => self.build_explicit()?,
        };
        if let Some(name) = &self.name {
            scenario.name = name.clone();
        }
        Ok(scenario)
    }

    fn build_explicit(&self) -> Result<Scenario, ConfigError> {
        let specs = self
            .basis
            .clone()
            .unwrap_or_else(|| vec![GeneratorSpec::Named("one".into())]);
        let basis = RealBasis::from_specs(&specs)?;
        let frame_coeffs = self.frame.as_ref().expect("validated");
        if let Some(d) = self.dimension {
            if d != frame_coeffs.len() {
                return Err(ConfigError::Invalid(format!(
                    "dimension {d} but {} frame values",
                    frame_coeffs.len()
                )));
            }
        }
        let values = frame_coeffs
            .iter()
            .map(|c| ValueVector::from_dense(&basis, c))
            .collect::<Result<Vec<_>, _>>()?;
        let frame = ParameterFrame::with_default_names(values)?;
        let mode = self.mode.unwrap_or(if self.plan.is_some() {
            Mode::Scripted
        } else {
            Mode::Argmin
        });
        let plan = match mode {
            Mode::Argmin => {
                if self.plan.is_some() {
                    return Err(ConfigError::Invalid("argmin mode takes no plan".into()));
                }
                Plan::Argmin {
                    steps: self.steps.unwrap_or(100),
                }
            }
            Mode::Scripted => {
                let steps = self
                    .plan
                    .as_ref()
                    .ok_or_else(|| ConfigError::Invalid("scripted mode needs a plan".into()))?
                    .iter()
                    .map(|s| scripted_step(&basis, s))
                    .collect::<Result<Vec<_>, _>>()?;
                Plan::Scripted { steps }
            }
        };
        Ok(Scenario {
            name: "custom".into(),
            frame,
            plan,
            law: None,
            checkpoints: Vec::new(),
            min_term: None,
            expected_starving: None,
        })
    }
}

fn scripted_step(
    basis: &std::sync::Arc<RealBasis>,
    s: &PlanStepConfig,
) -> Result<ScriptedStep, ConfigError> {
    let kind = match s {
        PlanStepConfig::Monomial { dir } => StepKind::Monomial { dir: *dir },
        PlanStepConfig::Rescale { dir, new_values } => StepKind::Rescale {
            dir: *dir,
            new_values: new_values
                .iter()
                .map(|c| ValueVector::from_dense(basis, c))
                .collect::<Result<Vec<_>, _>>()?,
        },
    };
    Ok(ScriptedStep {
        kind,
        m_value: None,
    })
}

/// Checks run for a preset when the scenario names none.
pub fn default_checks(preset: &str) -> &'static [&'static str] {
    match preset {
        "shannon-4.18" => &["series-sum", "eq631", "remark4175"],
        "rr1" => &["series-sum", "switching-witness", "eq631"],
        "gmr-7.13" | "gmr-7.14" => &["series-sum", "eq631"],
        "dvr" => &["series-sum", "bound63"],
        "random" | "random-diagonal" => &[
            "eq631",
            "bound63",
            "switching-witness",
            "prop344",
            "change-of-direction",
            "thm33a",
            "videal-chain",
            "tau-bound",
        ],
        _ => &[],
    }
}
