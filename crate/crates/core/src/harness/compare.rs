use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::engine::{AlgorithmKind, AlgorithmSpec};
use crate::error::{Error, Result};
use crate::noise::gamma_lk;
use crate::theory::{LinkParams, TheoryInputs};

use super::analysis::steady_state_estimate;
use super::experiment::Experiment;
use super::monte_carlo::{monte_carlo_curve, RunOptions};

/// Theory inputs matching `spec` on the steady noise regime of `exp`, with
/// the kernel at its steady value.
pub fn theory_inputs(exp: &Experiment, spec: &AlgorithmSpec) -> Result<TheoryInputs> {
    if spec.kind != AlgorithmKind::Dmtc {
        return Err(Error::invalid(format!(
            "closed-form predictions cover the total-correntropy filter only, `{}` is {:?}",
            spec.name, spec.kind
        )));
    }
    if spec.adaptive_combination {
        return Err(Error::invalid(format!(
            "`{}` adapts its combination weights; predictions need a fixed matrix",
            spec.name
        )));
    }
    let noise = exp.noise.steady();
    if !noise.is_gaussian() {
        return Err(Error::invalid("predictions need Gaussian link noise"));
    }
    let zeta2 = spec
        .kernel
        .map(|k| k.steady)
        .ok_or_else(|| Error::invalid(format!("`{}` has no kernel schedule", spec.name)))?;
    let mut links = BTreeMap::new();
    for k in 0..exp.n_nodes() {
        for &l in exp.graph.neighbors(k) {
            let ch = noise.channels(l, k).expect("distinct nodes");
            let sigma_x2 = ch.input.total_variance();
            let sigma_y2 = ch.output.total_variance();
            let mse_path = sigma_x2 == 0.0;
            let gamma = if mse_path {
                0.0
            } else {
                gamma_lk(noise.observation[l], ch.output.sigma_a2, ch.input.sigma_a2)?
            };
            links.insert(
                (l, k),
                LinkParams {
                    sigma_x2,
                    sigma_y2,
                    sigma_phi2: ch.weight.total_variance(),
                    gamma,
                    zeta2,
                    mse_path,
                },
            );
        }
    }
    let dim = exp.dim();
    let inputs = TheoryInputs {
        graph: exp.graph.clone(),
        truth: exp.truth.clone(),
        input_covariance: vec![DMatrix::identity(dim, dim) * exp.input_variance; exp.n_nodes()],
        observation: noise.observation.clone(),
        step_sizes: spec.step_sizes.clone(),
        adaptation: exp.adaptation_for(spec).matrix().clone(),
        combination: exp.combination_for(spec).matrix().clone(),
        links,
    };
    inputs.validate()?;
    Ok(inputs)
}

/// First non-adaptive total-correntropy algorithm of the experiment.
pub fn default_theory_algorithm(exp: &Experiment) -> Result<&AlgorithmSpec> {
    exp.algorithms
        .iter()
        .find(|a| a.kind == AlgorithmKind::Dmtc && !a.adaptive_combination)
        .ok_or_else(|| Error::invalid("no fixed-combination dmtc algorithm in the config"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryReport {
    pub algorithm: String,
    pub step_sizes: Vec<f64>,
    pub step_bounds: Vec<f64>,
    pub rho: f64,
    pub msd_linear: f64,
    pub msd_db: f64,
    pub series_terms: usize,
}

pub fn theory_report(exp: &Experiment, spec: &AlgorithmSpec) -> Result<TheoryReport> {
    let inputs = theory_inputs(exp, spec)?;
    let step_bounds = (0..exp.n_nodes())
        .map(|k| inputs.stepsize_upper_bound(k))
        .collect::<Result<Vec<_>>>()?;
    let (_, rho) = inputs.mean_recursion_matrix()?;
    let msd = inputs.steady_state_msd()?;
    Ok(TheoryReport {
        algorithm: spec.name.clone(),
        step_sizes: spec.step_sizes.clone(),
        step_bounds,
        rho,
        msd_linear: msd.msd_linear,
        msd_db: msd.msd_db,
        series_terms: msd.iterations_used,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub theory: TheoryReport,
    pub simulated_db: f64,
    /// `simulated - predicted` in dB; zero when both are `-inf`.
    pub gap_db: f64,
    pub runs_used: usize,
    pub diverged_runs: usize,
}

/// Predicted against simulated steady-state MSD for a fixed-combination
/// total-correntropy filter under Gaussian link noise.
pub fn theory_vs_simulation(exp: &Experiment, spec: &AlgorithmSpec, options: &RunOptions) -> Result<Comparison> {
    if !exp.noise.is_gaussian() {
        return Err(Error::invalid("comparison needs Gaussian noise in every regime"));
    }
    let theory = theory_report(exp, spec)?;
    if let Some(k) = (0..exp.n_nodes()).find(|&k| theory.step_sizes[k] >= theory.step_bounds[k]) {
        return Err(Error::invalid(format!(
            "step size {} at node {k} is not below its bound {}",
            theory.step_sizes[k], theory.step_bounds[k]
        )));
    }
    let curve = monte_carlo_curve(exp, spec, options)?;
    let simulated_db = steady_state_estimate(&curve, exp.tail_fraction);
    let gap_db = if simulated_db == theory.msd_db {
        0.0
    } else {
        simulated_db - theory.msd_db
    };
    Ok(Comparison {
        theory,
        simulated_db,
        gap_db,
        runs_used: curve.runs_used,
        diverged_runs: curve.diverged_runs,
    })
}
