//! Diffusion adaptive estimation over networks with noisy communication links.
//!
//! The crate simulates diffusion LMS, correntropy and total-correntropy
//! diffusion filters (with fixed or adaptive combination weights) and
//! evaluates closed-form mean and mean-square predictions for the
//! total-correntropy filter, so that theory and Monte Carlo runs can be
//! compared side by side.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod noise;
pub mod stream;
pub mod theory;
pub mod topology;

pub use error::{Error, Result};
