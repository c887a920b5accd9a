use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Estimator family used on links from neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    /// Stand-alone LMS at every node: no data or estimate sharing.
    NonCoopLms,
    Dlms,
    Dmcc,
    Dgdtls,
    Dmtc,
}

impl AlgorithmKind {
    pub fn uses_kernel(self) -> bool {
        matches!(self, AlgorithmKind::Dmcc | AlgorithmKind::Dmtc)
    }

    /// Kinds whose neighbor estimator normalizes by `||w||^2 + gamma`.
    pub fn is_total_least_squares(self) -> bool {
        matches!(self, AlgorithmKind::Dgdtls | AlgorithmKind::Dmtc)
    }
}

/// Normalization of the local one-step prediction used by adaptive combination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneStepNorm {
    /// `w + mu g / (||g|| + epsilon)`: a step of length about `mu`.
    #[default]
    Unsquared,
    /// `w + mu g / (||g||^2 + epsilon)`.
    Squared,
}

/// Piecewise-constant kernel width: `initial` before `switch_at`, `steady` from it on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSchedule {
    pub initial: f64,
    pub steady: f64,
    pub switch_at: usize,
}

impl KernelSchedule {
    pub fn constant(value: f64) -> Self {
        KernelSchedule {
            initial: value,
            steady: value,
            switch_at: 0,
        }
    }

    pub fn at(&self, iteration: usize) -> f64 {
        if iteration < self.switch_at {
            self.initial
        } else {
            self.steady
        }
    }
}

/// A fully resolved algorithm variant ready to simulate.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSpec {
    pub name: String,
    pub kind: AlgorithmKind,
    pub adaptive_combination: bool,
    /// `false` models `A = I`.
    pub share_data: bool,
    /// `false` models `C = I`.
    pub share_weights: bool,
    /// Step size per node.
    pub step_sizes: Vec<f64>,
    /// Kernel width schedule (squared); required for DMCC and DMTC.
    pub kernel: Option<KernelSchedule>,
    pub chi: f64,
    pub epsilon: f64,
    pub one_step_norm: OneStepNorm,
}

impl AlgorithmSpec {
    pub fn new(name: impl Into<String>, kind: AlgorithmKind, n_nodes: usize, step_size: f64) -> Self {
        let cooperative = kind != AlgorithmKind::NonCoopLms;
        AlgorithmSpec {
            name: name.into(),
            kind,
            adaptive_combination: false,
            share_data: cooperative,
            share_weights: cooperative,
            step_sizes: vec![step_size; n_nodes],
            kernel: None,
            chi: 0.05,
            epsilon: 1e-6,
            one_step_norm: OneStepNorm::default(),
        }
    }

    pub fn with_kernel(mut self, kernel: KernelSchedule) -> Self {
        self.kernel = Some(kernel);
        self
    }

    pub fn adaptive(mut self) -> Self {
        self.adaptive_combination = true;
        self
    }

    pub fn without_data_sharing(mut self) -> Self {
        self.share_data = false;
        self
    }

    pub fn without_weight_sharing(mut self) -> Self {
        self.share_weights = false;
        self
    }

    pub fn validate(&self, n_nodes: usize) -> Result<()> {
        let field = |f: &str| format!("{}.{f}", self.name);
        if self.step_sizes.len() != n_nodes {
            return Err(Error::validation(
                field("step_size"),
                format!("{} step sizes for {n_nodes} nodes", self.step_sizes.len()),
            ));
        }
        if self.step_sizes.iter().any(|&mu| !(mu > 0.0) || !mu.is_finite()) {
            return Err(Error::validation(field("step_size"), "step sizes must be > 0"));
        }
        if self.kind.uses_kernel() {
            match self.kernel {
                Some(k) if k.initial > 0.0 && k.steady > 0.0 => {}
                Some(_) => return Err(Error::validation(field("kernel"), "kernel values must be > 0")),
                None => return Err(Error::validation(field("kernel"), "kernel schedule required")),
            }
        }
        if self.kind == AlgorithmKind::NonCoopLms
            && (self.share_data || self.share_weights || self.adaptive_combination)
        {
            return Err(Error::validation(field("kind"), "non-cooperative LMS cannot share"));
        }
        if self.adaptive_combination {
            if !self.share_weights {
                return Err(Error::validation(
                    field("adaptive_combination"),
                    "adaptive combination requires weight sharing",
                ));
            }
            if !(self.chi > 0.0 && self.chi <= 1.0) {
                return Err(Error::validation(field("chi"), "forgetting factor must be in (0, 1]"));
            }
            if !(self.epsilon > 0.0) {
                return Err(Error::validation(field("epsilon"), "epsilon must be > 0"));
            }
        }
        Ok(())
    }
}
