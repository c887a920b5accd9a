//! Instantaneous gradient estimators used in the adaptation step.
//!
//! All estimators return an ascent direction for the node's utility, so the
//! adaptation step always reads `phi = w + mu * sum(alpha * g)`.

use crate::error::{Error, Result};

/// A regression pair `(x, y)` as received by a node.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedSample {
    pub x: Vec<f64>,
    pub y: f64,
    pub source: usize,
    pub self_link: bool,
}

impl SharedSample {
    pub fn new(x: Vec<f64>, y: f64, source: usize, self_link: bool) -> Self {
        SharedSample {
            x,
            y,
            source,
            self_link,
        }
    }

    pub fn residual(&self, w: &[f64]) -> f64 {
        residual(w, &self.x, self.y)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

fn residual(w: &[f64], x: &[f64], y: f64) -> f64 {
    debug_assert_eq!(w.len(), x.len());
    y - dot(w, x)
}

fn tls_denominator(w: &[f64], gamma: f64) -> Result<f64> {
    let s2 = norm2(w) + gamma;
    if !(s2 > 0.0) || gamma < 0.0 {
        return Err(Error::invalid(format!(
            "degenerate TLS denominator ||w||^2 + gamma = {s2}"
        )));
    }
    Ok(s2)
}

/// `e * x` with `e = y - w'x`.
pub fn lms_gradient(w: &[f64], sample: &SharedSample) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    accumulate_lms(w, &sample.x, sample.y, 1.0, &mut out);
    out
}

/// Correntropy-weighted LMS direction `exp(-e^2 / (2 kernel2)) e x`.
pub fn mcc_gradient(w: &[f64], sample: &SharedSample, kernel2: f64) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    accumulate_mcc(w, &sample.x, sample.y, kernel2, 1.0, &mut out);
    out
}

/// Instantaneous total-correntropy utility `exp(-e^2 / (2 zeta2 (||w||^2 + gamma)))`.
pub fn mtc_cost(w: &[f64], sample: &SharedSample, zeta2: f64, gamma: f64) -> Result<f64> {
    let s2 = tls_denominator(w, gamma)?;
    let e = sample.residual(w);
    Ok((-e * e / (2.0 * zeta2 * s2)).exp())
}

/// Exact gradient of [`mtc_cost`] with respect to `w`.
pub fn mtc_gradient(w: &[f64], sample: &SharedSample, zeta2: f64, gamma: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; w.len()];
    accumulate_mtc(w, &sample.x, sample.y, zeta2, gamma, 1.0 / zeta2, &mut out)?;
    Ok(out)
}

/// Ascent direction of the negated TLS ratio, `-(1/2) grad e^2 / (||w||^2 + gamma)`.
pub fn gdtls_gradient(w: &[f64], sample: &SharedSample, gamma: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; w.len()];
    accumulate_gdtls(w, &sample.x, sample.y, gamma, 1.0, &mut out)?;
    Ok(out)
}

pub(crate) fn accumulate_lms(w: &[f64], x: &[f64], y: f64, scale: f64, out: &mut [f64]) {
    let e = residual(w, x, y);
    for (o, xi) in out.iter_mut().zip(x) {
        *o += scale * e * xi;
    }
}

pub(crate) fn accumulate_mcc(w: &[f64], x: &[f64], y: f64, kernel2: f64, scale: f64, out: &mut [f64]) {
    let e = residual(w, x, y);
    let g = (-e * e / (2.0 * kernel2)).exp();
    for (o, xi) in out.iter_mut().zip(x) {
        *o += scale * g * e * xi;
    }
}

/// Adds `scale * G * [s2 e x + e^2 w] / s2^2`; `scale = 1 / zeta2` gives the exact gradient.
pub(crate) fn accumulate_mtc(
    w: &[f64],
    x: &[f64],
    y: f64,
    zeta2: f64,
    gamma: f64,
    scale: f64,
    out: &mut [f64],
) -> Result<()> {
    if !(zeta2 > 0.0) {
        return Err(Error::invalid(format!("kernel parameter must be > 0, got {zeta2}")));
    }
    let s2 = tls_denominator(w, gamma)?;
    let e = residual(w, x, y);
    let g = (-e * e / (2.0 * zeta2 * s2)).exp();
    let a = scale * g * e / s2;
    let b = scale * g * e * e / (s2 * s2);
    for ((o, xi), wi) in out.iter_mut().zip(x).zip(w) {
        *o += a * xi + b * wi;
    }
    Ok(())
}

pub(crate) fn accumulate_gdtls(
    w: &[f64],
    x: &[f64],
    y: f64,
    gamma: f64,
    scale: f64,
    out: &mut [f64],
) -> Result<()> {
    let s2 = tls_denominator(w, gamma)?;
    let e = residual(w, x, y);
    let a = scale * e / s2;
    let b = scale * e * e / (s2 * s2);
    for ((o, xi), wi) in out.iter_mut().zip(x).zip(w) {
        *o += a * xi + b * wi;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(x: &[f64], y: f64) -> SharedSample {
        SharedSample::new(x.to_vec(), y, 1, false)
    }

    #[test]
    fn lms_values() {
        let s = sample(&[1.0, 0.0, 0.0, 0.0], 1.0);
        assert_eq!(lms_gradient(&[0.0; 4], &s), vec![1.0, 0.0, 0.0, 0.0]);

        let w = [0.4, 0.7, -0.3, 0.5];
        let s = sample(&[1.0; 4], 2.0);
        for g in lms_gradient(&w, &s) {
            assert!((g - 0.7).abs() < 1e-12);
        }
        let exact = sample(&[0.3, -1.2, 2.0, 0.1], dot(&w, &[0.3, -1.2, 2.0, 0.1]));
        assert!(lms_gradient(&w, &exact).iter().all(|g| g.abs() < 1e-15));
    }

    #[test]
    fn mcc_limits() {
        let w = [0.1, -0.2, 0.3, 0.05];
        let s = sample(&[0.7, 1.1, -0.4, 2.0], 1.3);
        let lms = lms_gradient(&w, &s);
        let mcc = mcc_gradient(&w, &s, 1e12);
        for (a, b) in lms.iter().zip(&mcc) {
            assert!((a - b).abs() <= 1e-9 * a.abs());
        }
        let outlier = sample(&[1.0, 0.0, 0.0, 0.0], 10.0);
        let g = mcc_gradient(&[0.0; 4], &outlier, 1.0);
        let expected = 10.0 * (-50.0f64).exp();
        assert!((g[0] - expected).abs() < 1e-30);
        assert!(g[0] < 2e-21);
    }

    #[test]
    fn mtc_cost_values() {
        let s = sample(&[1.0, 0.0, 0.0, 0.0], 2.0);
        let c = mtc_cost(&[1.0, 0.0, 0.0, 0.0], &s, 1.0, 1.0).unwrap();
        assert!((c - (-0.25f64).exp()).abs() < 1e-15);
        let zero = sample(&[1.0, 0.0, 0.0, 0.0], 1.0);
        assert_eq!(mtc_cost(&[1.0, 0.0, 0.0, 0.0], &zero, 1.0, 1.0).unwrap(), 1.0);
        assert!(matches!(
            mtc_cost(&[0.0; 4], &s, 1.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(mtc_gradient(&[0.0; 4], &s, 1.0, 0.0).is_err());
        assert!(gdtls_gradient(&[0.0; 4], &s, 0.0).is_err());
    }

    #[test]
    fn zero_residual_gives_zero_direction() {
        let w = [0.4, 0.7, -0.3, 0.5];
        let x = [1.0, 2.0, -1.0, 0.5];
        let s = sample(&x, dot(&w, &x));
        assert!(mtc_gradient(&w, &s, 0.2, 3.5).unwrap().iter().all(|g| *g == 0.0));
        assert!(gdtls_gradient(&w, &s, 3.5).unwrap().iter().all(|g| *g == 0.0));
        assert!(mcc_gradient(&w, &s, 0.2).iter().all(|g| *g == 0.0));
    }
}
