//! Small dense linear-algebra helpers: spectral radii and Kronecker blocks.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;
/// Largest matrix handed to the dense eigensolver when power iteration stalls.
pub const DENSE_FALLBACK_LIMIT: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusMethod {
    PowerIteration { iterations: usize },
    DenseEigen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    pub method: RadiusMethod,
}

/// Spectral radius by power iteration, falling back to a dense Schur
/// decomposition for matrices up to [`DENSE_FALLBACK_LIMIT`] when the
/// iteration does not settle (complex or nearly tied dominant eigenvalues).
///
/// The estimate is the geometric mean of two successive growth factors,
/// which also converges for a dominant `+/- rho` pair.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<SpectralRadius> {
    spectral_radius_with(m, POWER_TOL, POWER_MAX_ITER)
}

pub fn spectral_radius_with(m: &DMatrix<f64>, tol: f64, max_iter: usize) -> Result<SpectralRadius> {
    if !m.is_square() {
        return Err(Error::invalid("spectral radius of a non-square matrix"));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(SpectralRadius { value: 0.0, method: RadiusMethod::DenseEigen });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("matrix has non-finite entries".into()));
    }
    // deterministic start with components along every direction
    let mut v = nalgebra::DVector::from_fn(n, |i, _| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.7548).sin());
    v /= v.norm();
    let mut prev_norm = f64::NAN;
    let mut prev_est = f64::NAN;
    let mut prev_delta = f64::NAN;
    for it in 1..=max_iter {
        let u = m * &v;
        let norm = u.norm();
        if norm == 0.0 {
            // v landed in the null space; any remaining spectrum is handled densely
            break;
        }
        v = u / norm;
        if prev_norm.is_finite() {
            let est = (norm * prev_norm).sqrt();
            if prev_est.is_finite() {
                let delta = (est - prev_est).abs();
                let q = if prev_delta > 0.0 { (delta / prev_delta).min(0.999_999) } else { 0.0 };
                let err = if delta == 0.0 { 0.0 } else { delta * q / (1.0 - q) + delta };
                if err <= tol * est.max(f64::MIN_POSITIVE) && it > 8 {
                    return Ok(SpectralRadius {
                        value: est,
                        method: RadiusMethod::PowerIteration { iterations: it },
                    });
                }
                prev_delta = delta;
            }
            prev_est = est;
        }
        prev_norm = norm;
    }
    if n <= DENSE_FALLBACK_LIMIT {
        return Ok(SpectralRadius {
            value: dense_spectral_radius(m),
            method: RadiusMethod::DenseEigen,
        });
    }
    Err(Error::NumericalFailure(format!(
        "power iteration did not converge in {max_iter} iterations (n = {n}, last estimate {prev_est})"
    )))
}

pub fn dense_spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Largest eigenvalue magnitude of a symmetric matrix.
pub fn symmetric_spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
}

/// `a ⊗ I_dim`.
pub fn kron_identity(a: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    a.kronecker(&DMatrix::identity(dim, dim))
}

/// Block-diagonal matrix from equally sized square blocks.
pub fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let dim = blocks.first().map_or(0, |b| b.nrows());
    let n = blocks.len() * dim;
    let mut out = DMatrix::zeros(n, n);
    for (p, b) in blocks.iter().enumerate() {
        out.view_mut((p * dim, p * dim), (dim, dim)).copy_from(b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_signed_pairs() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.3, -0.9, 0.5]));
        let r = spectral_radius(&m).unwrap();
        assert!((r.value - 0.9).abs() < 1e-10);

        // eigenvalues +0.8 and -0.8 tie in modulus
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 0.8, 0.8, 0.0]);
        assert!((spectral_radius(&m).unwrap().value - 0.8).abs() < 1e-10);
    }

    #[test]
    fn rotation_falls_back_to_dense() {
        let (c, s) = (0.3f64.cos() * 0.95, 0.3f64.sin() * 0.95);
        let m = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let r = spectral_radius_with(&m, 1e-10, 500).unwrap();
        assert!((r.value - 0.95).abs() < 1e-10);
    }

    #[test]
    fn zero_and_nilpotent() {
        assert_eq!(spectral_radius(&DMatrix::zeros(3, 3)).unwrap().value, 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(spectral_radius(&m).unwrap().value.abs() < 1e-8);
    }

    #[test]
    fn block_helpers() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let k = kron_identity(&a, 2);
        assert_eq!(k[(0, 2)], 2.0);
        assert_eq!(k[(1, 3)], 2.0);
        assert_eq!(k[(0, 3)], 0.0);
        let d = block_diag(&[a.clone(), a * 2.0]);
        assert_eq!(d[(3, 3)], 8.0);
        assert_eq!(d[(0, 2)], 0.0);
    }
}
