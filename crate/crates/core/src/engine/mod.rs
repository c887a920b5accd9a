//! Adapt/combine dynamics of the diffusion algorithms.

mod algorithm;
mod gradient;
mod network;
mod node;

pub use algorithm::{AlgorithmKind, AlgorithmSpec, KernelSchedule, OneStepNorm};
pub use gradient::{gdtls_gradient, lms_gradient, mcc_gradient, mtc_cost, mtc_gradient, SharedSample};
pub use network::{
    draw_local_sample, initial_states, link_estimator, node_iteration, Environment, LocalSample,
};
pub use node::{
    adapt_step, adaptive_beta_update, combine_step, local_one_step, LinkEstimator, NodeState,
    Received, DELTA2_FLOOR, DELTA2_INIT,
};
