//! JSON configuration: one document with sections, plus `--set` overrides.

use std::path::{Path, PathBuf};

use fkpp::analysis::ScaledVariant;
use fkpp::exact::Family;
use fkpp::model::Thresholds;
use fkpp::pde::Boundary;
use fkpp::{Config, Params};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub ic: InitialCondition,
    pub run: RunSection,
    pub stationary: StationarySection,
    pub exact: ExactSection,
    pub verify: VerifySection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub m: f64,
    pub p: f64,
    pub q: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { m: 2.0, p: 2.0, q: 0.9 }
    }
}

impl ModelSection {
    pub fn params(&self) -> Result<Params, CliError> {
        Ok(Params::new(self.m, self.p, self.q)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub half_length: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { half_length: 12.5, n: 1001, boundary: Boundary::Dirichlet0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `multiple · E(x - center)`.
    Stationary {
        #[serde(default = "one")]
        multiple: f64,
        #[serde(default)]
        center: f64,
    },
    /// Separable solution at `t = 0`; its exponents replace the model's.
    Separable { family: Family, m: f64, constant: f64 },
    /// `height · (1 - ((x - center)/width)²)_+^power`.
    Bump {
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default = "one")]
        height: f64,
        #[serde(default = "two")]
        power: f64,
    },
    /// Two-column CSV `x,u`, linearly interpolated, zero outside its range.
    File { path: PathBuf },
    Zero,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::Stationary { multiple: 1.0, center: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub t_max: f64,
    pub cfl_safety: f64,
    pub snapshot_times: Vec<f64>,
    pub thresholds: Thresholds<f64>,
    pub max_steps: usize,
    pub reaction_enabled: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        let c = Config::default();
        Self {
            t_max: c.t_max,
            cfl_safety: c.cfl_safety,
            snapshot_times: c.snapshot_times,
            thresholds: c.thresholds,
            max_steps: c.max_steps,
            reaction_enabled: c.reaction_enabled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationarySection {
    pub points: usize,
    /// Defaults to `[-half_length, half_length]` of the grid section.
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub center: f64,
}

impl Default for StationarySection {
    fn default() -> Self {
        Self { points: 401, x_min: None, x_max: None, center: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactSection {
    pub family: Family,
    pub m: f64,
    pub constant: f64,
    pub times: Vec<f64>,
    pub points: usize,
}

impl Default for ExactSection {
    fn default() -> Self {
        Self { family: Family::Sg, m: 2.0, constant: 0.0, times: vec![0.0, 0.5, 1.0], points: 401 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Scaled,
    #[default]
    Selfsimilar,
    Porous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub construction: Construction,
    /// Scaled construction only; chosen from the initial data when absent.
    pub variant: Option<ScaledVariant>,
    pub alpha: Option<f64>,
    pub samples_x: Option<usize>,
    pub samples_t: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub multipliers: Vec<f64>,
    /// `[m, p, q]` triples; the model section when empty.
    pub params: Vec<[f64; 3]>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { multipliers: vec![0.5, 1.0, 2.0], params: Vec::new() }
    }
}

impl FileConfig {
    pub fn sim_config(&self) -> Config {
        Config {
            half_length: self.grid.half_length,
            n: self.grid.n,
            t_max: self.run.t_max,
            cfl_safety: self.run.cfl_safety,
            boundary: self.grid.boundary,
            thresholds: self.run.thresholds,
            snapshot_times: self.run.snapshot_times.clone(),
            reaction_enabled: self.run.reaction_enabled,
            max_steps: self.run.max_steps,
        }
    }
}

/// Reads the optional config file and applies `key=value` overrides.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<FileConfig, CliError> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Default::default()),
    };
    for item in overrides {
        apply_override(&mut doc, item)?;
    }
    if let Some(ic) = doc.get_mut("ic").and_then(Value::as_object_mut) {
        ic.entry("kind").or_insert_with(|| Value::String("stationary".into()));
    }
    serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))
}

/// `a.b.c=value`; the value is parsed as JSON and taken as a string if
/// that fails.
pub fn apply_override(doc: &mut Value, item: &str) -> Result<(), CliError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{item}` is not of the form key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::Config(format!("empty path segment in `{key}`")));
        }
        if !node.is_object() {
            *node = Value::Object(Default::default());
        }
        let map = node.as_object_mut().expect("object");
        if i + 1 == parts.len() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    Ok(())
}
