//! Observation and link noise: Gaussian and two-component Gaussian mixtures.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Zero-mean mixture `(1 - c) N(0, sigma_a2) + c N(0, sigma_b2)`.
///
/// `sigma_a2` is the nominal noise level; `sigma_b2` models impulsive outliers
/// occurring with probability `c`. A pure Gaussian channel has `c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmmSpec {
    #[serde(default)]
    pub c: f64,
    pub sigma_a2: f64,
    #[serde(default)]
    pub sigma_b2: f64,
}

impl GmmSpec {
    pub fn gaussian(variance: f64) -> Self {
        GmmSpec {
            c: 0.0,
            sigma_a2: variance,
            sigma_b2: 0.0,
        }
    }

    pub fn mixture(c: f64, sigma_a2: f64, sigma_b2: f64) -> Self {
        GmmSpec { c, sigma_a2, sigma_b2 }
    }

    pub fn silent() -> Self {
        Self::gaussian(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.c) {
            return Err(Error::invalid(format!("mixing probability {} outside [0, 1]", self.c)));
        }
        if !(self.sigma_a2 >= 0.0 && self.sigma_b2 >= 0.0)
            || !self.sigma_a2.is_finite()
            || !self.sigma_b2.is_finite()
        {
            return Err(Error::invalid("mixture variances must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn total_variance(&self) -> f64 {
        (1.0 - self.c) * self.sigma_a2 + self.c * self.sigma_b2
    }

    /// True when every draw is exactly zero.
    pub fn is_silent(&self) -> bool {
        (self.sigma_a2 == 0.0 || self.c == 1.0) && (self.sigma_b2 == 0.0 || self.c == 0.0)
    }

    pub fn is_gaussian(&self) -> bool {
        self.c == 0.0 || self.c == 1.0 || self.sigma_a2 == self.sigma_b2
    }
}

pub fn sample_gmm<R: Rng + ?Sized>(spec: &GmmSpec, rng: &mut R) -> f64 {
    let outlier = rng.random::<f64>() < spec.c;
    let variance = if outlier { spec.sigma_b2 } else { spec.sigma_a2 };
    let z: f64 = rng.sample(StandardNormal);
    variance.sqrt() * z
}

/// The three channels of one directed link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSet {
    /// Noise on shared regressors (per component).
    pub input: GmmSpec,
    /// Noise on shared outputs.
    pub output: GmmSpec,
    /// Noise on exchanged intermediate estimates (per component).
    pub weight: GmmSpec,
}

impl ChannelSet {
    pub fn uniform(spec: GmmSpec) -> Self {
        ChannelSet {
            input: spec,
            output: spec,
            weight: spec,
        }
    }

    pub fn silent() -> Self {
        Self::uniform(GmmSpec::silent())
    }

    pub fn validate(&self) -> Result<()> {
        self.input.validate()?;
        self.output.validate()?;
        self.weight.validate()
    }

    pub fn is_gaussian(&self) -> bool {
        self.input.is_gaussian() && self.output.is_gaussian() && self.weight.is_gaussian()
    }
}

/// A transmission path for [`perturb_link`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkChannel {
    /// Node talking to itself; never perturbed.
    SelfLink,
    Noisy(GmmSpec),
}

/// Noise environment of a network: observation variances per node plus
/// channel specs per directed link (a default with optional overrides).
#[derive(Debug, Clone, PartialEq)]
pub struct LinkNoiseSpec {
    pub observation: Vec<f64>,
    pub default_link: ChannelSet,
    pub per_link: BTreeMap<(usize, usize), ChannelSet>,
}

impl LinkNoiseSpec {
    pub fn uniform(observation: Vec<f64>, link: ChannelSet) -> Self {
        LinkNoiseSpec {
            observation,
            default_link: link,
            per_link: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.observation.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("observation variances must be finite and >= 0"));
        }
        self.default_link.validate()?;
        for (&(l, k), set) in &self.per_link {
            if l == k {
                return Err(Error::invalid(format!("self-link ({l}, {k}) cannot carry noise")));
            }
            set.validate()?;
        }
        Ok(())
    }

    /// Channels of link `l -> k`; `None` for the self-link.
    pub fn channels(&self, l: usize, k: usize) -> Option<&ChannelSet> {
        if l == k {
            None
        } else {
            Some(self.per_link.get(&(l, k)).unwrap_or(&self.default_link))
        }
    }

    pub fn is_gaussian(&self) -> bool {
        self.default_link.is_gaussian() && self.per_link.values().all(ChannelSet::is_gaussian)
    }
}

/// Returns `payload` plus i.i.d. per-component channel noise.
pub fn perturb_link<R: Rng + ?Sized>(payload: &[f64], channel: LinkChannel, rng: &mut R) -> Vec<f64> {
    let mut out = payload.to_vec();
    perturb_in_place(&mut out, channel, rng);
    out
}

pub fn perturb_in_place<R: Rng + ?Sized>(payload: &mut [f64], channel: LinkChannel, rng: &mut R) {
    let spec = match channel {
        LinkChannel::SelfLink => return,
        LinkChannel::Noisy(spec) if spec.is_silent() => return,
        LinkChannel::Noisy(spec) => spec,
    };
    for v in payload {
        *v += sample_gmm(&spec, rng);
    }
}

/// Total-least-squares variance ratio `(sigma_l2 + sigma_lk_y2) / sigma_lk_x2`.
///
/// Callers pass the nominal (outlier-free) variances of each channel.
pub fn gamma_lk(sigma_l2: f64, sigma_lk_y2: f64, sigma_lk_x2: f64) -> Result<f64> {
    if !(sigma_lk_x2 > 0.0) {
        return Err(Error::invalid(format!(
            "input-noise variance must be > 0 for the TLS ratio, got {sigma_lk_x2}"
        )));
    }
    if sigma_l2 < 0.0 || sigma_lk_y2 < 0.0 {
        return Err(Error::invalid("variances must be >= 0"));
    }
    Ok((sigma_l2 + sigma_lk_y2) / sigma_lk_x2)
}
