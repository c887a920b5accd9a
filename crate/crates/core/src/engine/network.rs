//! One synchronous adapt-then-combine iteration over the whole network.

use rand::Rng;
use rand_distr::StandardNormal;

use super::algorithm::{AlgorithmKind, AlgorithmSpec};
use super::gradient::dot;
use super::node::{adaptive_beta_update, local_one_step, LinkEstimator, NodeState};
use super::SharedSample;
use crate::error::{Error, Result};
use crate::noise::{gamma_lk, perturb_in_place, LinkChannel, LinkNoiseSpec};
use crate::stream::{substream, Channel, StreamKey};
use crate::topology::{CombinationMatrix, NetworkGraph};

/// Everything an iteration reads besides the node states.
#[derive(Debug, Clone, Copy)]
pub struct Environment<'a> {
    pub graph: &'a NetworkGraph,
    /// `A`; ignored when the algorithm does not share data.
    pub adaptation: &'a CombinationMatrix,
    /// Fixed `C`, and the starting point of adaptive combination.
    pub combination: &'a CombinationMatrix,
    /// Noise regime in force for this iteration.
    pub noise: &'a LinkNoiseSpec,
    pub truth: &'a [f64],
    /// Per-component variance of the clean regressors.
    pub input_variance: f64,
    pub master_seed: u64,
    pub run: u64,
}

/// Clean regression data drawn at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSample {
    pub x: Vec<f64>,
    /// Noise-free output `h'x`.
    pub d: f64,
    /// Observed output `d + v`.
    pub y: f64,
}

/// Draws `x_k(i)`, `d_k(i)` and `y_k(i)` from the node's own substreams.
pub fn draw_local_sample(
    master_seed: u64,
    run: u64,
    iteration: usize,
    node: usize,
    truth: &[f64],
    input_variance: f64,
    observation_variance: f64,
) -> LocalSample {
    let i = iteration as u64;
    let mut rng = substream(master_seed, StreamKey::local(run, i, node, Channel::Regressor));
    let sd = input_variance.sqrt();
    let x: Vec<f64> = (0..truth.len())
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let d = dot(truth, &x);
    let mut rng = substream(master_seed, StreamKey::local(run, i, node, Channel::Observation));
    let v: f64 = observation_variance.sqrt() * rng.sample::<f64, _>(StandardNormal);
    LocalSample { x, d, y: d + v }
}

/// Initial states: zero estimates, combination weights taken from `C`
/// (or the identity when weights are not shared).
pub fn initial_states(
    graph: &NetworkGraph,
    combination: &CombinationMatrix,
    spec: &AlgorithmSpec,
    dim: usize,
) -> Vec<NodeState> {
    (0..graph.n_nodes())
        .map(|k| {
            let hood = graph.neighborhood(k);
            let beta = hood
                .iter()
                .map(|&l| {
                    if spec.share_weights {
                        combination.entry(l, k)
                    } else if l == k {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            NodeState::new(dim, hood, beta)
        })
        .collect()
}

/// Estimator node `k` applies to data received from neighbor `l != k`.
pub fn link_estimator(
    spec: &AlgorithmSpec,
    noise: &LinkNoiseSpec,
    l: usize,
    k: usize,
    iteration: usize,
) -> Result<LinkEstimator> {
    let kernel = || {
        spec.kernel
            .map(|s| s.at(iteration))
            .ok_or_else(|| Error::invalid(format!("{} needs a kernel schedule", spec.name)))
    };
    let gamma = || -> Result<Option<f64>> {
        match noise.channels(l, k) {
            Some(ch) if ch.input.sigma_a2 > 0.0 => Ok(Some(gamma_lk(
                noise.observation[l],
                ch.output.sigma_a2,
                ch.input.sigma_a2,
            )?)),
            // no input noise on this link: plain MSE path
            _ => Ok(None),
        }
    };
    Ok(match spec.kind {
        AlgorithmKind::NonCoopLms | AlgorithmKind::Dlms => LinkEstimator::Lms,
        AlgorithmKind::Dmcc => LinkEstimator::Mcc { kernel2: kernel()? },
        AlgorithmKind::Dgdtls => match gamma()? {
            Some(gamma) => LinkEstimator::Gdtls { gamma },
            None => LinkEstimator::Lms,
        },
        AlgorithmKind::Dmtc => match gamma()? {
            Some(gamma) => LinkEstimator::Mtc {
                zeta2: kernel()?,
                gamma,
            },
            None => LinkEstimator::Lms,
        },
    })
}

/// Advances every node by one adapt-then-combine iteration.
///
/// All nodes read iteration-`i` states; updated states are written only after
/// every node has finished both steps.
pub fn node_iteration(
    states: &mut [NodeState],
    env: &Environment<'_>,
    spec: &AlgorithmSpec,
    iteration: usize,
) -> Result<()> {
    let n = env.graph.n_nodes();
    let dim = env.truth.len();
    if states.len() != n {
        return Err(Error::invalid("one state per node required"));
    }
    let i = iteration as u64;
    let link_rng =
        |l: usize, k: usize, ch: Channel| substream(env.master_seed, StreamKey::link(env.run, i, l, k, ch));

    let local: Vec<LocalSample> = (0..n)
        .map(|k| {
            draw_local_sample(
                env.master_seed,
                env.run,
                iteration,
                k,
                env.truth,
                env.input_variance,
                env.noise.observation[k],
            )
        })
        .collect();

    // adapt
    let mut grad = vec![0.0; dim];
    let mut x_buf = vec![0.0; dim];
    for k in 0..n {
        let state = &states[k];
        grad.iter_mut().for_each(|g| *g = 0.0);
        if spec.share_data {
            for &l in &state.neighborhood {
                let alpha = env.adaptation.entry(l, k);
                if alpha == 0.0 {
                    continue;
                }
                if l == k {
                    LinkEstimator::Lms.accumulate(&state.w, &local[k].x, local[k].y, alpha, &mut grad)?;
                    continue;
                }
                let ch = env.noise.channels(l, k).expect("distinct nodes");
                x_buf.copy_from_slice(&local[l].x);
                perturb_in_place(&mut x_buf, LinkChannel::Noisy(ch.input), &mut link_rng(l, k, Channel::LinkInput));
                let mut y = [local[l].y];
                perturb_in_place(&mut y, LinkChannel::Noisy(ch.output), &mut link_rng(l, k, Channel::LinkOutput));
                link_estimator(spec, env.noise, l, k, iteration)?
                    .accumulate(&state.w, &x_buf, y[0], alpha, &mut grad)?;
            }
        } else {
            LinkEstimator::Lms.accumulate(&state.w, &local[k].x, local[k].y, 1.0, &mut grad)?;
        }
        let mu = spec.step_sizes[k];
        let state = &mut states[k];
        for ((p, w), g) in state.phi.iter_mut().zip(&state.w).zip(&grad) {
            *p = w + mu * g;
        }
    }

    if !spec.share_weights {
        for state in states.iter_mut() {
            state.w.copy_from_slice(&state.phi);
        }
        return Ok(());
    }

    // combine
    let mut new_w = vec![vec![0.0; dim]; n];
    let mut received: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        let state = &states[k];
        received.clear();
        for (&l, &beta) in state.neighborhood.iter().zip(&state.beta) {
            let mut phi = states[l].phi.clone();
            if l != k && (spec.adaptive_combination || beta != 0.0) {
                let ch = env.noise.channels(l, k).expect("distinct nodes");
                perturb_in_place(&mut phi, LinkChannel::Noisy(ch.weight), &mut link_rng(l, k, Channel::LinkWeight));
            }
            received.push(phi);
        }
        let beta = if spec.adaptive_combination {
            let own = SharedSample::new(local[k].x.clone(), local[k].y, k, true);
            let w_hat = local_one_step(&state.w, &own, spec.step_sizes[k], spec.epsilon, spec.one_step_norm);
            let views: Vec<&[f64]> = received.iter().map(Vec::as_slice).collect();
            let (delta2, beta) = adaptive_beta_update(&views, &w_hat, spec.chi, &state.delta2)?;
            let state = &mut states[k];
            state.delta2 = delta2;
            state.beta = beta;
            &states[k].beta
        } else {
            &states[k].beta
        };
        for (phi, b) in received.iter().zip(beta) {
            for (o, p) in new_w[k].iter_mut().zip(phi) {
                *o += b * p;
            }
        }
    }
    for (state, w) in states.iter_mut().zip(new_w) {
        state.w = w;
    }
    Ok(())
}
