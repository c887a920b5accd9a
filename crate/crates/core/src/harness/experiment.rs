use crate::config::{AlgorithmConfig, ExperimentConfig};
use crate::engine::{AlgorithmKind, AlgorithmSpec, KernelSchedule};
use crate::error::Result;
use crate::noise::{gamma_lk, ChannelSet, LinkNoiseSpec};
use crate::topology::{
    generate_random_graph, metropolis_weights, CombinationMatrix, MatrixRole, NetworkGraph,
};

/// Initial kernel width of the correntropy filters.
pub const DEFAULT_KERNEL_INITIAL: f64 = 1e4;
/// Iteration at which the kernel switches to its steady value.
pub const DEFAULT_KERNEL_SWITCH: usize = 100;
/// Base step size shared by all default rules.
pub const DEFAULT_STEP: f64 = 0.05;

/// Link noise over time: `before` up to `switch_at` (exclusive), `after` from it on.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    pub before: LinkNoiseSpec,
    pub after: Option<(usize, LinkNoiseSpec)>,
}

impl NoiseSchedule {
    pub fn constant(spec: LinkNoiseSpec) -> Self {
        NoiseSchedule { before: spec, after: None }
    }

    pub fn at(&self, iteration: usize) -> &LinkNoiseSpec {
        match &self.after {
            Some((switch, spec)) if iteration >= *switch => spec,
            _ => &self.before,
        }
    }

    pub fn steady(&self) -> &LinkNoiseSpec {
        self.after.as_ref().map_or(&self.before, |(_, s)| s)
    }

    pub fn is_gaussian(&self) -> bool {
        self.before.is_gaussian() && self.after.as_ref().is_none_or(|(_, s)| s.is_gaussian())
    }
}

/// A config resolved into a concrete network and algorithm specs.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub graph: NetworkGraph,
    /// Metropolis weights, used for both adaptation and combination.
    pub metropolis: CombinationMatrix,
    pub truth: Vec<f64>,
    pub input_variance: f64,
    pub noise: NoiseSchedule,
    pub algorithms: Vec<AlgorithmSpec>,
    pub iterations: usize,
    pub runs: usize,
    pub seed: u64,
    pub tail_fraction: f64,
}

impl Experiment {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let graph = match &config.graph.edge_list {
            Some(path) => NetworkGraph::read_edge_list(path)?,
            None => generate_random_graph(config.graph.nodes, config.graph.avg_degree, config.graph.seed)?,
        };
        let n = graph.n_nodes();
        let metropolis = metropolis_weights(&graph);
        metropolis.validate(&graph)?;
        let observation = vec![config.signal.observation_variance; n];
        let spec_for = |set: &ChannelSet| LinkNoiseSpec::uniform(observation.clone(), *set);
        let noise = NoiseSchedule {
            before: spec_for(&config.noise.before),
            after: config
                .noise
                .switch_at
                .zip(config.noise.after.as_ref())
                .map(|(at, set)| (at, spec_for(set))),
        };
        let mut exp = Experiment {
            name: config.name.clone(),
            graph,
            metropolis,
            truth: config.signal.h.clone(),
            input_variance: config.signal.input_variance,
            noise,
            algorithms: Vec::new(),
            iterations: config.iterations,
            runs: config.runs,
            seed: config.seed,
            tail_fraction: config.tail_fraction,
        };
        exp.algorithms = config
            .algorithms
            .iter()
            .map(|a| exp.resolve_algorithm(a))
            .collect::<Result<_>>()?;
        Ok(exp)
    }

    pub fn n_nodes(&self) -> usize {
        self.graph.n_nodes()
    }

    pub fn dim(&self) -> usize {
        self.truth.len()
    }

    pub fn algorithm(&self, name: &str) -> Option<&AlgorithmSpec> {
        self.algorithms.iter().find(|a| a.name == name)
    }

    /// Adaptation matrix seen by `spec`.
    pub fn adaptation_for(&self, spec: &AlgorithmSpec) -> CombinationMatrix {
        if spec.share_data {
            self.metropolis.clone().with_role(MatrixRole::Adaptation)
        } else {
            CombinationMatrix::identity(self.n_nodes(), MatrixRole::Adaptation)
        }
    }

    /// Fixed (or initial, when adaptive) combination matrix seen by `spec`.
    pub fn combination_for(&self, spec: &AlgorithmSpec) -> CombinationMatrix {
        if spec.share_weights {
            self.metropolis.clone()
        } else {
            CombinationMatrix::identity(self.n_nodes(), MatrixRole::Combination)
        }
    }

    /// Mean `gamma` over the directed links of the initial noise regime that
    /// carry input noise.
    pub fn mean_gamma(&self) -> Result<f64> {
        let noise = &self.noise.before;
        let mut total = 0.0;
        let mut count = 0usize;
        for k in 0..self.n_nodes() {
            for &l in self.graph.neighbors(k) {
                let ch = noise.channels(l, k).expect("distinct nodes");
                if ch.input.sigma_a2 == 0.0 {
                    continue;
                }
                total += gamma_lk(noise.observation[l], ch.output.sigma_a2, ch.input.sigma_a2)?;
                count += 1;
            }
        }
        Ok(if count == 0 { 0.0 } else { total / count as f64 })
    }

    fn default_step(&self, kind: AlgorithmKind) -> Result<f64> {
        Ok(match kind {
            AlgorithmKind::Dgdtls | AlgorithmKind::Dmtc => {
                let h2: f64 = self.truth.iter().map(|v| v * v).sum();
                DEFAULT_STEP * (h2 + self.mean_gamma()?)
            }
            _ => DEFAULT_STEP,
        })
    }

    fn default_kernel_steady(&self, kind: AlgorithmKind) -> f64 {
        let steady = self.noise.steady();
        let sigma_a2 = steady.default_link.input.sigma_a2;
        match kind {
            AlgorithmKind::Dmcc => {
                let obs = steady.observation.iter().sum::<f64>() / steady.observation.len() as f64;
                5.0 * (obs + 2.0 * sigma_a2)
            }
            _ => 5.0 * sigma_a2,
        }
    }

    pub fn resolve_algorithm(&self, a: &AlgorithmConfig) -> Result<AlgorithmSpec> {
        let n = self.n_nodes();
        let step_sizes = match (&a.step_sizes, a.step_size) {
            (Some(list), _) => list.clone(),
            (None, Some(mu)) => vec![mu; n],
            (None, None) => vec![self.default_step(a.kind)?; n],
        };
        let kernel = a.kind.uses_kernel().then(|| KernelSchedule {
            initial: a.kernel_initial.unwrap_or(DEFAULT_KERNEL_INITIAL),
            steady: a.kernel_steady.unwrap_or_else(|| self.default_kernel_steady(a.kind)),
            switch_at: a.kernel_switch.unwrap_or(DEFAULT_KERNEL_SWITCH),
        });
        let spec = AlgorithmSpec {
            name: a.name.clone(),
            kind: a.kind,
            adaptive_combination: a.adaptive_combination,
            share_data: a.share_data && a.kind != AlgorithmKind::NonCoopLms,
            share_weights: a.share_weights && a.kind != AlgorithmKind::NonCoopLms,
            step_sizes,
            kernel,
            chi: a.chi,
            epsilon: a.epsilon,
            one_step_norm: a.one_step_norm,
        };
        spec.validate(n)?;
        Ok(spec)
    }
}
