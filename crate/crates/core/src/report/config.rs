//! Experiment configuration: one JSON document.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::OrbitBudget;
use crate::grid::GridSpec;
use crate::harmonic::HarmonicMap;
use crate::presets::{preset, Preset};
use crate::{Error, Result};

/// Either a preset name or explicit expressions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Preset(String),
    Explicit { h: String, g: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Image,
    OrbitCsv,
    Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub kind: OutputKind,
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub map: MapSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<OrbitBudget>,
    /// Budget for orbit classes and component dynamics. Defaults to `budget`
    /// when that is given, else to the preset's choice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics_budget: Option<OrbitBudget>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
    /// Seeds as `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<Complex64>>,
}

/// A configuration with every default filled in and the map parsed.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub map: HarmonicMap,
    pub window: GridSpec,
    pub budget: OrbitBudget,
    /// Budget for orbit classes and component dynamics.
    pub dynamics_budget: OrbitBudget,
    pub preset: Option<&'static Preset>,
}

pub const DEFAULT_WINDOW: GridSpec = GridSpec {
    re_min: -3.0,
    re_max: 3.0,
    im_min: -3.0,
    im_max: 3.0,
    width: 256,
    height: 256,
};

impl ExperimentConfig {
    pub fn for_preset(name: &str) -> Self {
        ExperimentConfig {
            map: MapSpec::Preset(name.to_string()),
            window: None,
            budget: None,
            dynamics_budget: None,
            outputs: Vec::new(),
            seeds: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<Experiment> {
        let (map, preset) = match &self.map {
            MapSpec::Preset(name) => {
                let p = preset(name)?;
                (p.map(), Some(p))
            }
            MapSpec::Explicit { h, g } => (
                HarmonicMap::parse(h, g).map_err(|e| Error::Config(format!("map: {e}")))?,
                None,
            ),
        };
        let window = self.window.or(preset.map(|p| p.window)).unwrap_or(DEFAULT_WINDOW);
        window.validate().map_err(|e| Error::Config(format!("window: {e}")))?;
        let (budget, dynamics_budget) = match (&self.budget, preset) {
            (Some(b), _) => (b.clone(), b.clone()),
            (None, Some(p)) => (p.budget(), p.dynamics_budget()),
            (None, None) => (OrbitBudget::default(), OrbitBudget::default()),
        };
        let dynamics_budget = self.dynamics_budget.clone().unwrap_or(dynamics_budget);
        budget.validate().map_err(|e| Error::Config(format!("budget: {e}")))?;
        dynamics_budget
            .validate()
            .map_err(|e| Error::Config(format!("dynamics_budget: {e}")))?;
        if let Some(seeds) = &self.seeds {
            if seeds.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Config("seeds: every seed must be finite".into()));
            }
        }
        let config = ExperimentConfig {
            map: self.map.clone(),
            window: Some(window),
            budget: Some(budget.clone()),
            dynamics_budget: Some(dynamics_budget.clone()),
            outputs: self.outputs.clone(),
            seeds: self.seeds.clone(),
        };
        Ok(Experiment {
            config,
            map,
            window,
            budget,
            dynamics_budget,
            preset,
        })
    }
}

impl Experiment {
    pub fn outputs(&self, kind: OutputKind) -> impl Iterator<Item = &Path> {
        self.config
            .outputs
            .iter()
            .filter(move |o| o.kind == kind)
            .map(|o| o.path.as_path())
    }
}
