//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "preset": "het-paper",
//!   "seed": 931,
//!   "multistart": { "num_starts": 200, "seed": 1 },
//!   "methods": [ { "method": "bfgs" }, { "method": "sann", "seed": 7 } ],
//!   "reference_file": "data.json",
//!   "output": { "dataset": "data.csv", "dir": "out" }
//! }
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.

use std::path::{Path, PathBuf};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dgp::DgpConfig;
use crate::error::{Error, Result};
use crate::harness::{MultiStartConfig, PlateauThresholds};
use crate::model::ParamVector;
use crate::optimize::OptimizerSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfigFile {
    /// `het-paper`, `het-gamma6` or `probit-paper`; needs `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Seed for `preset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Full generator settings, as an alternative to `preset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dgp: Option<DgpConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multistart: Option<MultiStartSection>,
    /// Defaults to a single BFGS entry.
    #[serde(default = "default_methods")]
    pub methods: Vec<OptimizerSpec>,
    /// Scoring point for multi-start runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ParamVector>,
    /// JSON file with `beta` and `gamma` arrays, such as a `simulate` sidecar.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_file: Option<PathBuf>,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_methods() -> Vec<OptimizerSpec> {
    vec![OptimizerSpec::bfgs()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct MultiStartSection {
    pub num_starts: usize,
    pub seed: u64,
    #[serde(default = "default_start_box")]
    pub start_box: f64,
    #[serde(default = "default_cluster_radius")]
    pub cluster_radius: f64,
    #[serde(default)]
    pub plateau: PlateauThresholds,
}

fn default_start_box() -> f64 {
    5.0
}

fn default_cluster_radius() -> f64 {
    0.5
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Dataset CSV written by `simulate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    /// Report directory for `multistart` and `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// A config file plus the directory its relative paths refer to.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub file: ExperimentConfigFile,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: ExperimentConfigFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line() as u64,
            message: e.to_string(),
        })?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { file, base_dir })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Generator settings from `dgp` or `preset` + `seed`.
    pub fn dgp(&self) -> Result<Option<DgpConfig>> {
        let f = &self.file;
        match (&f.dgp, &f.preset) {
            (Some(_), Some(_)) => Err(Error::InvalidConfig(
                "give either `dgp` or `preset`, not both".into(),
            )),
            (Some(d), None) => {
                if f.seed.is_some() {
                    return Err(Error::InvalidConfig(
                        "top-level `seed` only applies to `preset`; put it inside `dgp`".into(),
                    ));
                }
                Ok(Some(d.clone()))
            }
            (None, Some(name)) => {
                let seed = f
                    .seed
                    .ok_or_else(|| Error::InvalidConfig(format!("preset `{name}` needs a `seed`")))?;
                DgpConfig::preset(name, seed)
                    .map(Some)
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown preset `{name}`")))
            }
            (None, None) => Ok(None),
        }
    }

    /// Reference point from `reference` or `reference_file`.
    pub fn reference(&self) -> Result<Option<ParamVector>> {
        let f = &self.file;
        match (&f.reference, &f.reference_file) {
            (Some(_), Some(_)) => Err(Error::InvalidConfig(
                "give either `reference` or `reference_file`, not both".into(),
            )),
            (Some(p), None) => Ok(Some(p.clone())),
            (None, Some(path)) => read_params(&self.resolve(path)).map(Some),
            (None, None) => Ok(None),
        }
    }

    pub fn multistart(&self, reference: ParamVector) -> Result<MultiStartConfig> {
        let m = self
            .file
            .multistart
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("missing `multistart` section".into()))?;
        Ok(MultiStartConfig {
            num_starts: m.num_starts,
            start_box: m.start_box,
            seed: m.seed,
            methods: self.file.methods.clone(),
            reference,
            plateau: m.plateau,
            cluster_radius: m.cluster_radius,
        })
    }
}

#[derive(Deserialize)]
struct ParamsOnly {
    beta: Vec<f64>,
    #[serde(default)]
    gamma: Vec<f64>,
}

/// Reads `beta` and `gamma` from a JSON object, ignoring other keys.
pub fn read_params(path: &Path) -> Result<ParamVector> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let p: ParamsOnly = serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    let p = ParamVector::new(p.beta, p.gamma);
    if !p.is_finite() {
        return Err(Error::NonFinite("parameter file"));
    }
    Ok(p)
}
