use rayon::prelude::*;

use crate::engine::AlgorithmSpec;
use crate::error::{Error, Result};
use crate::theory::to_db;

use super::experiment::Experiment;
use super::realization::run_single_realization;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DIFFLAB_THREADS";

/// Realizations simulated concurrently before being folded into the sums.
const BATCH: usize = 64;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` reads [`THREADS_ENV`], then uses all cores.
    pub threads: Option<usize>,
    /// Keep per-node curves as well as the network average.
    pub per_node: bool,
}

impl RunOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_per_node(mut self, per_node: bool) -> Self {
        self.per_node = per_node;
        self
    }

    fn worker_count(&self) -> Option<usize> {
        self.threads
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
            .filter(|&t| t > 0)
    }
}

/// Ensemble-averaged learning curve of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub algorithm: String,
    /// Network MSD per iteration, linear scale.
    pub msd: Vec<f64>,
    /// `per_node[k][i]`, when requested.
    pub per_node: Option<Vec<Vec<f64>>>,
    pub runs_used: usize,
    pub diverged_runs: usize,
}

impl LearningCurve {
    pub fn len(&self) -> usize {
        self.msd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.msd.is_empty()
    }

    pub fn msd_db(&self) -> Vec<f64> {
        self.msd.iter().map(|&v| to_db(v)).collect()
    }
}

/// Learning curves of every configured algorithm.
pub fn monte_carlo_msd(exp: &Experiment, options: &RunOptions) -> Result<Vec<LearningCurve>> {
    with_pool(options, || {
        exp.algorithms
            .iter()
            .map(|spec| ensemble(exp, spec, options.per_node))
            .collect()
    })
}

/// Learning curve of a single algorithm, which need not be part of `exp`.
pub fn monte_carlo_curve(exp: &Experiment, spec: &AlgorithmSpec, options: &RunOptions) -> Result<LearningCurve> {
    with_pool(options, || ensemble(exp, spec, options.per_node))
}

fn with_pool<T: Send>(options: &RunOptions, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match options.worker_count() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Runs are simulated in parallel batches and folded in run order, so the
/// sums do not depend on the number of workers.
fn ensemble(exp: &Experiment, spec: &AlgorithmSpec, per_node: bool) -> Result<LearningCurve> {
    let n = exp.n_nodes();
    let iters = exp.iterations;
    let mut network = vec![0.0; iters];
    let mut nodes = per_node.then(|| vec![vec![0.0; iters]; n]);
    let mut runs_used = 0;
    let mut diverged_runs = 0;
    let runs: Vec<u64> = (0..exp.runs as u64).collect();
    for batch in runs.chunks(BATCH) {
        let results: Vec<_> = batch
            .par_iter()
            .map(|&run| run_single_realization(exp, spec, run))
            .collect::<Result<_>>()?;
        for r in results {
            if r.diverged() {
                diverged_runs += 1;
                continue;
            }
            runs_used += 1;
            for (i, total) in network.iter_mut().enumerate() {
                *total += r.row(i).iter().sum::<f64>();
            }
            if let Some(nodes) = nodes.as_mut() {
                for (i, row) in r.squared_errors.chunks_exact(n).enumerate() {
                    for (k, v) in row.iter().enumerate() {
                        nodes[k][i] += v;
                    }
                }
            }
        }
    }
    if runs_used == 0 {
        return Err(Error::EmptyEnsemble {
            algorithm: spec.name.clone(),
            runs: exp.runs,
        });
    }
    let scale = 1.0 / (runs_used * n) as f64;
    network.iter_mut().for_each(|v| *v *= scale);
    if let Some(nodes) = nodes.as_mut() {
        let scale = 1.0 / runs_used as f64;
        nodes.iter_mut().flatten().for_each(|v| *v *= scale);
    }
    Ok(LearningCurve {
        algorithm: spec.name.clone(),
        msd: network,
        per_node: nodes,
        runs_used,
        diverged_runs,
    })
}
