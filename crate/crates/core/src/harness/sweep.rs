use crate::config::{ExperimentConfig, SweepParameter};
use crate::engine::AlgorithmKind;
use crate::error::{Error, Result};

use super::analysis::steady_state_estimate;
use super::experiment::Experiment;
use super::monte_carlo::{monte_carlo_msd, LearningCurve, RunOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// Steady-state MSD in dB, in the order of [`SweepTable::algorithms`].
    pub steady_db: Vec<f64>,
    pub curves: Vec<LearningCurve>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub algorithms: Vec<String>,
    /// Sorted by increasing parameter value.
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column(&self, algorithm: &str) -> Option<Vec<f64>> {
        let j = self.algorithms.iter().position(|a| a == algorithm)?;
        Some(self.rows.iter().map(|r| r.steady_db[j]).collect())
    }
}

impl SweepParameter {
    pub fn key(self) -> &'static str {
        match self {
            SweepParameter::SigmaA2 => "sigma_a2",
            SweepParameter::SigmaB2 => "sigma_b2",
            SweepParameter::Zeta2 => "zeta2",
        }
    }
}

/// Copy of `config` with `parameter` set to `value` on every link and regime.
///
/// Noise variances apply to all three channels; the kernel applies to the
/// steady kernel of every total-correntropy algorithm.
pub fn with_parameter(config: &ExperimentConfig, parameter: SweepParameter, value: f64) -> ExperimentConfig {
    let mut out = config.clone();
    match parameter {
        SweepParameter::SigmaA2 | SweepParameter::SigmaB2 => {
            for set in out.noise.regimes_mut() {
                for spec in [&mut set.input, &mut set.output, &mut set.weight] {
                    match parameter {
                        SweepParameter::SigmaA2 => spec.sigma_a2 = value,
                        _ => spec.sigma_b2 = value,
                    }
                }
            }
        }
        SweepParameter::Zeta2 => {
            for a in out.algorithms.iter_mut().filter(|a| a.kind == AlgorithmKind::Dmtc) {
                a.kernel_steady = Some(value);
            }
        }
    }
    out
}

pub fn sweep(
    config: &ExperimentConfig,
    parameter: SweepParameter,
    values: &[f64],
    options: &RunOptions,
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::invalid("sweep needs at least one value"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rows = Vec::with_capacity(sorted.len());
    for value in sorted {
        let exp = Experiment::from_config(&with_parameter(config, parameter, value))?;
        let curves = monte_carlo_msd(&exp, options)?;
        let steady_db = curves
            .iter()
            .map(|c| steady_state_estimate(c, exp.tail_fraction))
            .collect();
        rows.push(SweepRow { value, steady_db, curves });
    }
    Ok(SweepTable {
        parameter,
        algorithms: config.algorithms.iter().map(|a| a.name.clone()).collect(),
        rows,
    })
}

/// Runs the sweep declared in the config's `[sweep]` section.
pub fn configured_sweep(config: &ExperimentConfig, options: &RunOptions) -> Result<SweepTable> {
    let spec = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::validation("sweep", "config has no [sweep] section"))?;
    sweep(config, spec.parameter, &spec.values, options)
}
