//! Experiment configuration files.
//!
//! Configs are TOML documents with `graph`, `signal`, `noise` and
//! `[[algorithm]]` sections. Unknown keys are rejected. Overrides use dotted
//! paths (`graph.nodes=10`, `noise.before.input.sigma_a2=0.01`); an
//! `[[algorithm]]` entry is addressed by its index or its name
//! (`algorithm.DMTC.step_size=0.1`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{AlgorithmKind, OneStepNorm};
use crate::error::{Error, Result};
use crate::noise::ChannelSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub iterations: usize,
    pub runs: usize,
    pub seed: u64,
    /// Fraction of the curve averaged for steady-state figures.
    #[serde(default = "default_tail")]
    pub tail_fraction: f64,
    #[serde(default)]
    pub per_node_msd: bool,
    pub graph: GraphConfig,
    pub signal: SignalConfig,
    pub noise: NoiseConfig,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

fn default_tail() -> f64 {
    0.2
}

fn default_true() -> bool {
    true
}

fn default_input_variance() -> f64 {
    1.0
}

fn default_chi() -> f64 {
    0.05
}

fn default_epsilon() -> f64 {
    1e-6
}

fn default_avg_degree() -> f64 {
    3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub nodes: usize,
    #[serde(default = "default_avg_degree")]
    pub avg_degree: f64,
    #[serde(default)]
    pub seed: u64,
    /// Edge-list file; replaces random generation when set. Relative paths
    /// resolve against the config file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_list: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    pub h: Vec<f64>,
    #[serde(default = "default_input_variance")]
    pub input_variance: f64,
    pub observation_variance: f64,
}

/// Link noise, optionally switching to a second regime at `switch_at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub before: ChannelSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_at: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after: Option<ChannelSet>,
}

impl NoiseConfig {
    /// Regime in force once transients have died out.
    pub fn steady(&self) -> &ChannelSet {
        self.after.as_ref().unwrap_or(&self.before)
    }

    pub fn regimes_mut(&mut self) -> impl Iterator<Item = &mut ChannelSet> {
        std::iter::once(&mut self.before).chain(self.after.as_mut())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub name: String,
    pub kind: AlgorithmKind,
    #[serde(default)]
    pub adaptive_combination: bool,
    #[serde(default = "default_true")]
    pub share_data: bool,
    #[serde(default = "default_true")]
    pub share_weights: bool,
    /// Common step size; defaults depend on the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_size: Option<f64>,
    /// Per-node step sizes; takes precedence over `step_size`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_sizes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_initial: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_steady: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_switch: Option<usize>,
    #[serde(default = "default_chi")]
    pub chi: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Normalization of the local prediction in adaptive combination.
    #[serde(default)]
    pub one_step_norm: OneStepNorm,
}

impl AlgorithmConfig {
    pub fn new(name: impl Into<String>, kind: AlgorithmKind) -> Self {
        let cooperative = kind != AlgorithmKind::NonCoopLms;
        AlgorithmConfig {
            name: name.into(),
            kind,
            adaptive_combination: false,
            share_data: cooperative,
            share_weights: cooperative,
            step_size: None,
            step_sizes: None,
            kernel_initial: None,
            kernel_steady: None,
            kernel_switch: None,
            chi: default_chi(),
            epsilon: default_epsilon(),
            one_step_norm: OneStepNorm::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    SigmaA2,
    SigmaB2,
    Zeta2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl ExperimentConfig {
    pub fn from_str_with(text: &str, overrides: &[String]) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| map_toml_error(&e, text))?;
        let config = if overrides.is_empty() {
            config
        } else {
            let mut table: toml::Table = toml::from_str(text).map_err(|e| map_toml_error(&e, text))?;
            for item in overrides {
                apply_override(&mut table, item)?;
            }
            toml::Value::Table(table)
                .try_into::<ExperimentConfig>()
                .map_err(|e| map_toml_error(&e, ""))?
        };
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; a relative `graph.edge_list` is resolved against its directory.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut config = Self::from_str_with(&text, overrides)?;
        if let Some(edges) = &config.graph.edge_list {
            if edges.is_relative() {
                if let Some(dir) = path.parent() {
                    config.graph.edge_list = Some(dir.join(edges));
                }
            }
        }
        Ok(config)
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::validation("name", "must not be empty"));
        }
        if self.iterations == 0 {
            return Err(Error::validation("iterations", "must be >= 1"));
        }
        if self.runs == 0 {
            return Err(Error::validation("runs", "must be >= 1"));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::validation("tail_fraction", "must be in (0, 1]"));
        }
        if self.graph.edge_list.is_none() && self.graph.nodes < 2 {
            return Err(Error::validation("graph.nodes", "must be >= 2"));
        }
        if self.signal.h.is_empty() || self.signal.h.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("signal.h", "must be a non-empty finite vector"));
        }
        if !(self.signal.input_variance > 0.0) {
            return Err(Error::validation("signal.input_variance", "must be > 0"));
        }
        if !(self.signal.observation_variance >= 0.0) {
            return Err(Error::validation("signal.observation_variance", "must be >= 0"));
        }
        self.noise
            .before
            .validate()
            .map_err(|e| Error::validation("noise.before", e.to_string()))?;
        if let Some(after) = &self.noise.after {
            after
                .validate()
                .map_err(|e| Error::validation("noise.after", e.to_string()))?;
        }
        if self.noise.after.is_some() != self.noise.switch_at.is_some() {
            return Err(Error::validation(
                "noise.switch_at",
                "`switch_at` and `after` must be given together",
            ));
        }
        if self.algorithms.is_empty() {
            return Err(Error::validation("algorithm", "at least one algorithm required"));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::validation("algorithm.name", format!("duplicate name `{}`", a.name)));
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() || sweep.values.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::validation("sweep.values", "need at least one value >= 0"));
            }
        }
        Ok(())
    }

    pub fn algorithm(&self, name: &str) -> Option<&AlgorithmConfig> {
        self.algorithms.iter().find(|a| a.name == name)
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn map_toml_error(e: &toml::de::Error, text: &str) -> Error {
    let message = e.message().trim().to_string();
    if let Some(field) = message
        .strip_prefix("unknown field `")
        .and_then(|rest| rest.split('`').next())
    {
        return Error::UnknownKey(field.to_string());
    }
    let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
    Error::Parse { line, column, message }
}

fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Applies one `dotted.key=value` override; the key must already exist.
pub fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (path, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::invalid(format!("override `{item}` is not key=value")))?;
    let path = path.trim();
    let segments: Vec<&str> = path.split('.').collect();
    let unknown = || Error::UnknownKey(path.to_string());
    let mut node: &mut toml::Value = table.get_mut(segments[0]).ok_or_else(unknown)?;
    for seg in &segments[1..] {
        node = match node {
            toml::Value::Table(t) => t.get_mut(*seg).ok_or_else(unknown)?,
            toml::Value::Array(items) => {
                let idx = match seg.parse::<usize>() {
                    Ok(i) => Some(i),
                    Err(_) => items.iter().position(|it| {
                        it.get("name").and_then(|n| n.as_str()) == Some(*seg)
                    }),
                };
                idx.and_then(|i| items.get_mut(i)).ok_or_else(unknown)?
            }
            _ => return Err(unknown()),
        };
    }
    let mut value = parse_value(raw.trim());
    // integers assigned to float fields stay floats
    if let (toml::Value::Float(_), toml::Value::Integer(i)) = (&*node, &value) {
        value = toml::Value::Float(*i as f64);
    }
    *node = value;
    Ok(())
}

/// Shipped experiment presets, by file name.
pub mod presets {
    pub const FIG1: &str = include_str!("../presets/fig1.cfg");
    pub const FIG1_GAUSSIAN: &str = include_str!("../presets/fig1_gaussian.cfg");
    pub const FIG2A: &str = include_str!("../presets/fig2a.cfg");
    pub const FIG2B: &str = include_str!("../presets/fig2b.cfg");
    pub const FIG2C: &str = include_str!("../presets/fig2c.cfg");
    pub const FIG3: &str = include_str!("../presets/fig3.cfg");

    pub const ALL: &[(&str, &str)] = &[
        ("fig1.cfg", FIG1),
        ("fig1_gaussian.cfg", FIG1_GAUSSIAN),
        ("fig2a.cfg", FIG2A),
        ("fig2b.cfg", FIG2B),
        ("fig2c.cfg", FIG2C),
        ("fig3.cfg", FIG3),
    ];
}
