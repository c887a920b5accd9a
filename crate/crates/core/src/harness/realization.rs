use crate::engine::{initial_states, node_iteration, AlgorithmSpec, Environment, NodeState};
use crate::error::{Error, Result};

use super::experiment::Experiment;

/// Estimates larger than this in norm mark a realization as diverged.
pub const DIVERGENCE_NORM: f64 = 1e6;

/// Record of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub n_nodes: usize,
    /// Row-major `iterations x N` squared deviations `|w_k(i) - h|^2`, where
    /// row `i` holds the estimates after the update at iteration `i`.
    /// A diverged realization stops at the row before divergence.
    pub squared_errors: Vec<f64>,
    pub final_weights: Vec<Vec<f64>>,
    pub diverged_at: Option<usize>,
}

impl Realization {
    pub fn iterations_recorded(&self) -> usize {
        self.squared_errors.len() / self.n_nodes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.squared_errors[i * self.n_nodes..(i + 1) * self.n_nodes]
    }

    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }
}

pub fn run_single_realization(exp: &Experiment, spec: &AlgorithmSpec, run: u64) -> Result<Realization> {
    run_observed(exp, spec, run, |_, _| {})
}

/// Like [`run_single_realization`], calling `observer(i, states)` after
/// every completed iteration.
pub fn run_observed<F>(exp: &Experiment, spec: &AlgorithmSpec, run: u64, mut observer: F) -> Result<Realization>
where
    F: FnMut(usize, &[NodeState]),
{
    if exp.iterations == 0 {
        return Err(Error::invalid("at least one iteration required"));
    }
    let n = exp.n_nodes();
    let adaptation = exp.adaptation_for(spec);
    let combination = exp.combination_for(spec);
    let mut states = initial_states(&exp.graph, &combination, spec, exp.dim());
    let mut squared_errors = Vec::with_capacity(exp.iterations * n);
    let mut diverged_at = None;
    for i in 0..exp.iterations {
        let env = Environment {
            graph: &exp.graph,
            adaptation: &adaptation,
            combination: &combination,
            noise: exp.noise.at(i),
            truth: &exp.truth,
            input_variance: exp.input_variance,
            master_seed: exp.seed,
            run,
        };
        node_iteration(&mut states, &env, spec, i)?;
        if states.iter().any(|s| !is_bounded(&s.w)) {
            diverged_at = Some(i);
            break;
        }
        for s in &states {
            squared_errors.push(s.w.iter().zip(&exp.truth).map(|(w, h)| (w - h) * (w - h)).sum());
        }
        observer(i, &states);
    }
    Ok(Realization {
        n_nodes: n,
        squared_errors,
        final_weights: states.into_iter().map(|s| s.w).collect(),
        diverged_at,
    })
}

fn is_bounded(w: &[f64]) -> bool {
    let norm2: f64 = w.iter().map(|v| v * v).sum();
    norm2.is_finite() && norm2.sqrt() <= DIVERGENCE_NORM
}
