//! Closed-form mean and mean-square behavior of the total-correntropy
//! diffusion filter around the true weight vector.
//!
//! All quantities assume zero-mean Gaussian noise on every channel and treat
//! the combination matrix as fixed. Cross-link Hessians and gradient
//! covariances are those of the correntropy direction with the `1 / zeta2`
//! factor folded into the step size, matching the simulator.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{block_diag, kron_identity, spectral_radius, symmetric_spectral_radius};
use crate::noise::gamma_lk;
use crate::topology::{CombinationMatrix, NetworkGraph};

/// Frobenius-norm stopping threshold of the steady-state series.
pub const MSD_SERIES_TOL: f64 = 1e-12;
/// Cap on series terms accumulated for the steady-state MSD.
pub const MSD_SERIES_MAX_TERMS: usize = 100_000;

/// Parameters of the directed link `l -> k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    pub sigma_x2: f64,
    pub sigma_y2: f64,
    pub sigma_phi2: f64,
    pub gamma: f64,
    pub zeta2: f64,
    /// The link is adapted with the plain squared-error direction, as the
    /// simulator does for links without input noise.
    pub mse_path: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryInputs {
    pub graph: NetworkGraph,
    pub truth: Vec<f64>,
    /// Regressor covariance `R_l` per node.
    pub input_covariance: Vec<DMatrix<f64>>,
    /// Observation-noise variance per node.
    pub observation: Vec<f64>,
    pub step_sizes: Vec<f64>,
    pub adaptation: DMatrix<f64>,
    pub combination: DMatrix<f64>,
    /// One entry per directed edge `(l, k)`, `l != k`.
    pub links: BTreeMap<(usize, usize), LinkParams>,
}

/// Uniform noise levels used by [`TheoryInputs::uniform`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformLinks {
    pub sigma_x2: f64,
    pub sigma_y2: f64,
    pub sigma_phi2: f64,
    pub zeta2: f64,
}

impl TheoryInputs {
    /// Identity regressor covariance, equal variances on every node and link,
    /// and `gamma` derived from the noise levels. Links without input noise
    /// take the squared-error path.
    pub fn uniform(
        graph: &NetworkGraph,
        truth: &[f64],
        observation_variance: f64,
        links: UniformLinks,
        step_size: f64,
        adaptation: &CombinationMatrix,
        combination: &CombinationMatrix,
    ) -> Result<Self> {
        let n = graph.n_nodes();
        let dim = truth.len();
        let mse_path = links.sigma_x2 == 0.0;
        let gamma = if mse_path {
            0.0
        } else {
            gamma_lk(observation_variance, links.sigma_y2, links.sigma_x2)?
        };
        let mut map = BTreeMap::new();
        for k in 0..n {
            for &l in graph.neighbors(k) {
                map.insert(
                    (l, k),
                    LinkParams {
                        sigma_x2: links.sigma_x2,
                        sigma_y2: links.sigma_y2,
                        sigma_phi2: links.sigma_phi2,
                        gamma,
                        zeta2: links.zeta2,
                        mse_path,
                    },
                );
            }
        }
        let inputs = TheoryInputs {
            graph: graph.clone(),
            truth: truth.to_vec(),
            input_covariance: vec![DMatrix::identity(dim, dim); n],
            observation: vec![observation_variance; n],
            step_sizes: vec![step_size; n],
            adaptation: adaptation.matrix().clone(),
            combination: combination.matrix().clone(),
            links: map,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn n_nodes(&self) -> usize {
        self.graph.n_nodes()
    }

    pub fn dim(&self) -> usize {
        self.truth.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_nodes();
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::invalid("empty weight vector"));
        }
        if self.input_covariance.len() != n || self.observation.len() != n || self.step_sizes.len() != n {
            return Err(Error::invalid("per-node parameter lists must have one entry per node"));
        }
        for (l, r) in self.input_covariance.iter().enumerate() {
            if r.shape() != (dim, dim) {
                return Err(Error::invalid(format!("R_{l} has wrong shape")));
            }
            if (r - r.transpose()).abs().max() > 1e-12 {
                return Err(Error::invalid(format!("R_{l} is not symmetric")));
            }
            if r.clone().symmetric_eigen().eigenvalues.min() < -1e-12 {
                return Err(Error::invalid(format!("R_{l} is not positive semidefinite")));
            }
        }
        if self.observation.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::invalid("observation variances must be >= 0"));
        }
        if self.step_sizes.iter().any(|&mu| !(mu >= 0.0)) {
            return Err(Error::invalid("step sizes must be >= 0"));
        }
        for k in 0..n {
            for &l in self.graph.neighbors(k) {
                let p = self
                    .links
                    .get(&(l, k))
                    .ok_or_else(|| Error::invalid(format!("missing parameters for link {l} -> {k}")))?;
                if p.sigma_x2 < 0.0 || p.sigma_y2 < 0.0 || p.sigma_phi2 < 0.0 || p.gamma < 0.0 {
                    return Err(Error::invalid(format!("negative parameter on link {l} -> {k}")));
                }
                if !(p.zeta2 > 0.0) {
                    return Err(Error::invalid(format!("kernel must be > 0 on link {l} -> {k}")));
                }
            }
        }
        for (m, role) in [
            (&self.adaptation, crate::topology::MatrixRole::Adaptation),
            (&self.combination, crate::topology::MatrixRole::Combination),
        ] {
            CombinationMatrix::new(m.clone(), role)?.validate(&self.graph)?;
        }
        Ok(())
    }

    fn link(&self, l: usize, k: usize) -> Result<Option<&LinkParams>> {
        if l == k {
            return Ok(None);
        }
        match self.links.get(&(l, k)) {
            Some(p) if self.graph.contains_edge(l, k) => Ok(Some(p)),
            _ => Err(Error::invalid(format!("node {l} is not in the neighborhood of {k}"))),
        }
    }

    fn truth_norm2(&self) -> f64 {
        self.truth.iter().map(|v| v * v).sum()
    }

    /// Hessian of the link utility at the true weights.
    pub fn hessian_at_optimum(&self, l: usize, k: usize) -> Result<DMatrix<f64>> {
        let r = &self.input_covariance[l];
        Ok(match self.link(l, k)? {
            None => -r,
            Some(p) if p.mse_path => -r,
            Some(p) => {
                let s2 = self.truth_norm2() + p.gamma;
                let shrink = (p.zeta2 / (p.sigma_x2 + p.zeta2)).powf(1.5);
                r * (-shrink / s2)
            }
        })
    }

    /// Covariance of the instantaneous update direction at the true weights.
    pub fn gradient_covariance(&self, l: usize, k: usize) -> Result<DMatrix<f64>> {
        let r = &self.input_covariance[l];
        Ok(match self.link(l, k)? {
            None => r * self.observation[l],
            Some(p) if p.mse_path => r * (self.observation[l] + p.sigma_y2),
            Some(p) => {
                let dim = self.dim();
                let s2 = self.truth_norm2() + p.gamma;
                let shrink = (p.zeta2 / (2.0 * p.sigma_x2 + p.zeta2)).powf(1.5);
                let h = nalgebra::DVector::from_column_slice(&self.truth);
                let bracket = (r + DMatrix::identity(dim, dim) * p.sigma_x2) * s2
                    - (&h * h.transpose()) * p.sigma_x2;
                bracket * (p.sigma_x2 / (s2 * s2) * shrink)
            }
        })
    }

    /// `sum_l alpha_lk H_lk(h)` for node `k`.
    pub fn weighted_hessian(&self, k: usize) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for l in self.graph.neighborhood(k) {
            let alpha = self.adaptation[(l, k)];
            if alpha != 0.0 {
                acc += self.hessian_at_optimum(l, k)? * alpha;
            }
        }
        Ok(acc)
    }

    /// Upper step-size limit `2 / rho(sum_l alpha_lk H_lk)` at node `k`.
    pub fn stepsize_upper_bound(&self, k: usize) -> Result<f64> {
        if k >= self.n_nodes() {
            return Err(Error::invalid(format!("node {k} out of range")));
        }
        let rho = symmetric_spectral_radius(&self.weighted_hessian(k)?);
        if rho == 0.0 {
            return Err(Error::invalid(format!(
                "summed Hessian of node {k} vanishes; step size is unbounded"
            )));
        }
        Ok(2.0 / rho)
    }

    /// Builds the block matrices of the mean and mean-square recursions.
    pub fn assemble(&self) -> Result<TheoryMatrices> {
        let n = self.n_nodes();
        let dim = self.dim();
        let nl = n * dim;
        let mut hess = Vec::with_capacity(n);
        let mut noise = Vec::with_capacity(n);
        let mut phi_noise = Vec::with_capacity(n);
        for p in 0..n {
            hess.push(self.weighted_hessian(p)?);
            let mut q = DMatrix::zeros(dim, dim);
            let mut v = 0.0;
            for l in self.graph.neighborhood(p) {
                let alpha = self.adaptation[(l, p)];
                if alpha != 0.0 {
                    q += self.gradient_covariance(l, p)? * (alpha * alpha);
                }
                if let Some(params) = self.link(l, p)? {
                    let beta = self.combination[(l, p)];
                    v += beta * beta * params.sigma_phi2;
                }
            }
            noise.push(q);
            phi_noise.push(DMatrix::identity(dim, dim) * v);
        }
        let steps = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(nl, |i, _| {
            self.step_sizes[i / dim]
        }));
        let mix = kron_identity(&self.combination, dim);
        let hess = block_diag(&hess);
        let mean_recursion =
            mix.transpose() * (DMatrix::identity(nl, nl) + &steps * &hess);
        let gradient_noise = mix.transpose() * &steps * block_diag(&noise) * &steps * &mix;
        Ok(TheoryMatrices {
            mean_recursion,
            gradient_noise,
            combination_noise: block_diag(&phi_noise),
        })
    }

    /// Mean-error recursion matrix and its spectral radius.
    pub fn mean_recursion_matrix(&self) -> Result<(DMatrix<f64>, f64)> {
        let b = self.assemble()?.mean_recursion;
        let rho = spectral_radius(&b)?.value;
        Ok((b, rho))
    }

    /// Network steady-state MSD, `(1/N) tr(S (V + R))` with
    /// `S = sum_j (B')^j B^j`.
    pub fn steady_state_msd(&self) -> Result<MsdPrediction> {
        let mats = self.assemble()?;
        let rho = spectral_radius(&mats.mean_recursion)?.value;
        if rho >= 1.0 {
            return Err(Error::Instability { rho });
        }
        let (series, terms) = lyapunov_series(&mats.mean_recursion)?;
        let drive = &mats.gradient_noise + &mats.combination_noise;
        let msd_linear = (series.component_mul(&drive)).sum().max(0.0) / self.n_nodes() as f64;
        Ok(MsdPrediction {
            msd_linear,
            msd_db: to_db(msd_linear),
            converged: true,
            iterations_used: terms,
        })
    }

    /// Traces of `V + R` per node and in total.
    pub fn combination_noise_tradeoff(&self) -> Result<TradeoffReport> {
        let mats = self.assemble()?;
        let dim = self.dim();
        let drive = &mats.gradient_noise + &mats.combination_noise;
        let per_node: Vec<f64> = (0..self.n_nodes())
            .map(|p| drive.view((p * dim, p * dim), (dim, dim)).trace())
            .collect();
        let combination: Vec<f64> = (0..self.n_nodes())
            .map(|p| mats.combination_noise.view((p * dim, p * dim), (dim, dim)).trace())
            .collect();
        Ok(TradeoffReport {
            total: drive.trace(),
            per_node,
            combination_per_node: combination,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryMatrices {
    /// `B = (C ⊗ I)' (I + M H)`.
    pub mean_recursion: DMatrix<f64>,
    /// `(C ⊗ I)' M Cg M (C ⊗ I)` from gradient noise.
    pub gradient_noise: DMatrix<f64>,
    /// Noise injected by exchanging intermediate estimates.
    pub combination_noise: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsdPrediction {
    pub msd_linear: f64,
    pub msd_db: f64,
    pub converged: bool,
    pub iterations_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub total: f64,
    pub per_node: Vec<f64>,
    /// The exchanged-estimate part of each node's trace.
    pub combination_per_node: Vec<f64>,
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Sums `S = sum_j (B')^j B^j` by repeated squaring
/// (`S <- S + P' S P`, `P <- P^2`); each pass doubles the number of terms.
pub fn lyapunov_series(b: &DMatrix<f64>) -> Result<(DMatrix<f64>, usize)> {
    let n = b.nrows();
    let mut s = DMatrix::<f64>::identity(n, n);
    let mut p = b.clone();
    let mut terms = 1usize;
    while terms < MSD_SERIES_MAX_TERMS {
        let delta = p.transpose() * &s * &p;
        let size = delta.norm();
        s += delta;
        p = &p * &p;
        terms *= 2;
        if !size.is_finite() {
            break;
        }
        if size < MSD_SERIES_TOL {
            return Ok((s, terms));
        }
    }
    Err(Error::NumericalFailure(format!(
        "steady-state series did not converge within {MSD_SERIES_MAX_TERMS} terms"
    )))
}
