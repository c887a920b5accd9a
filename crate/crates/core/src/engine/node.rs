//! Per-node adapt and combine steps.

use super::gradient::{
    accumulate_gdtls, accumulate_lms, accumulate_mcc, accumulate_mtc, norm2, SharedSample,
};
use super::algorithm::OneStepNorm;
use crate::error::{Error, Result};

/// Floor applied to smoothed deviations before inversion.
pub const DELTA2_FLOOR: f64 = 1e-12;
/// Initial smoothed deviation on every link.
pub const DELTA2_INIT: f64 = 1.0;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Filter state of one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
    /// `N_k` including the node itself, increasing.
    pub neighborhood: Vec<usize>,
    /// Smoothed squared deviation per neighborhood entry.
    pub delta2: Vec<f64>,
    /// Current combination weights per neighborhood entry.
    pub beta: Vec<f64>,
}

impl NodeState {
    pub fn new(dim: usize, neighborhood: Vec<usize>, beta: Vec<f64>) -> Self {
        assert_eq!(neighborhood.len(), beta.len());
        NodeState {
            w: vec![0.0; dim],
            phi: vec![0.0; dim],
            delta2: vec![DELTA2_INIT; neighborhood.len()],
            neighborhood,
            beta,
        }
    }
}

/// How a node turns a received sample into an update direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkEstimator {
    Lms,
    Mcc { kernel2: f64 },
    Gdtls { gamma: f64 },
    /// Total-correntropy direction with the `1 / zeta2` factor folded into the step size.
    Mtc { zeta2: f64, gamma: f64 },
}

impl LinkEstimator {
    pub(crate) fn accumulate(
        self,
        w: &[f64],
        x: &[f64],
        y: f64,
        scale: f64,
        out: &mut [f64],
    ) -> Result<()> {
        match self {
            LinkEstimator::Lms => accumulate_lms(w, x, y, scale, out),
            LinkEstimator::Mcc { kernel2 } => accumulate_mcc(w, x, y, kernel2, scale, out),
            LinkEstimator::Gdtls { gamma } => accumulate_gdtls(w, x, y, gamma, scale, out)?,
            LinkEstimator::Mtc { zeta2, gamma } => {
                accumulate_mtc(w, x, y, zeta2, gamma, scale, out)?
            }
        }
        Ok(())
    }

    pub fn direction(self, w: &[f64], sample: &SharedSample) -> Result<Vec<f64>> {
        let mut out = vec![0.0; w.len()];
        let est = if sample.self_link { LinkEstimator::Lms } else { self };
        est.accumulate(w, &sample.x, sample.y, 1.0, &mut out)?;
        Ok(out)
    }
}

/// One received sample with its adaptation weight and estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct Received {
    pub sample: SharedSample,
    pub alpha: f64,
    pub estimator: LinkEstimator,
}

/// `phi = w + mu * sum_l alpha_lk g_lk(w)`; the self sample always uses LMS.
pub fn adapt_step(state: &NodeState, received: &[Received], mu: f64) -> Result<Vec<f64>> {
    let total: f64 = received.iter().map(|r| r.alpha).sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::invalid(format!("adaptation weights sum to {total}")));
    }
    if !received.iter().any(|r| r.sample.self_link) {
        return Err(Error::invalid("adaptation requires the node's own sample"));
    }
    let mut grad = vec![0.0; state.w.len()];
    for r in received {
        if r.sample.x.len() != state.w.len() {
            return Err(Error::invalid("sample dimension mismatch"));
        }
        let est = if r.sample.self_link { LinkEstimator::Lms } else { r.estimator };
        est.accumulate(&state.w, &r.sample.x, r.sample.y, r.alpha, &mut grad)?;
    }
    Ok(state.w.iter().zip(&grad).map(|(w, g)| w + mu * g).collect())
}

/// Convex combination `w = sum_l beta_lk phi_lk`.
pub fn combine_step(received: &[(&[f64], f64)]) -> Result<Vec<f64>> {
    let total: f64 = received.iter().map(|(_, b)| b).sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL || received.iter().any(|(_, b)| *b < 0.0) {
        return Err(Error::invalid(format!(
            "combination weights must be >= 0 and sum to 1, got sum {total}"
        )));
    }
    let dim = received
        .first()
        .map(|(p, _)| p.len())
        .ok_or_else(|| Error::invalid("nothing to combine"))?;
    let mut out = vec![0.0; dim];
    for (phi, beta) in received {
        if phi.len() != dim {
            return Err(Error::invalid("estimate dimension mismatch"));
        }
        for (o, p) in out.iter_mut().zip(phi.iter()) {
            *o += beta * p;
        }
    }
    Ok(out)
}

/// Normalized local prediction `w + mu g / (n(g) + epsilon)` from the node's
/// own sample, with `n` the gradient norm or its square.
pub fn local_one_step(w: &[f64], self_sample: &SharedSample, mu: f64, epsilon: f64, norm: OneStepNorm) -> Vec<f64> {
    let mut g = vec![0.0; w.len()];
    accumulate_lms(w, &self_sample.x, self_sample.y, 1.0, &mut g);
    let size = match norm {
        OneStepNorm::Unsquared => norm2(&g).sqrt(),
        OneStepNorm::Squared => norm2(&g),
    };
    let scale = mu / (size + epsilon);
    w.iter().zip(&g).map(|(wi, gi)| wi + scale * gi).collect()
}

/// Smooths deviations of received estimates from `w_hat` and recomputes
/// inverse-deviation combination weights over the neighborhood.
///
/// `received` and `prev_delta2` are aligned with the node's neighborhood.
pub fn adaptive_beta_update(
    received: &[&[f64]],
    w_hat: &[f64],
    chi: f64,
    prev_delta2: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if received.len() != prev_delta2.len() {
        return Err(Error::invalid("deviation history does not match neighborhood"));
    }
    let delta2: Vec<f64> = received
        .iter()
        .zip(prev_delta2)
        .map(|(phi, &prev)| {
            let dev: f64 = phi.iter().zip(w_hat).map(|(p, h)| (p - h) * (p - h)).sum();
            (1.0 - chi) * prev + chi * dev
        })
        .collect();
    let beta = inverse_weights(&delta2);
    Ok((delta2, beta))
}

pub(crate) fn inverse_weights(delta2: &[f64]) -> Vec<f64> {
    let inv: Vec<f64> = delta2.iter().map(|d| 1.0 / d.max(DELTA2_FLOOR)).collect();
    let total: f64 = inv.iter().sum();
    inv.iter().map(|v| v / total).collect()
}
