use crate::theory::to_db;

use super::monte_carlo::LearningCurve;

/// Number of trailing samples averaged for a curve of length `len`.
pub fn tail_length(len: usize, tail_fraction: f64) -> usize {
    ((tail_fraction * len as f64).ceil() as usize).clamp(1, len.max(1))
}

/// Mean of the last `ceil(tail_fraction * len)` samples, linear scale.
pub fn tail_mean(msd: &[f64], tail_fraction: f64) -> f64 {
    if msd.is_empty() {
        return f64::NAN;
    }
    let tail = &msd[msd.len() - tail_length(msd.len(), tail_fraction)..];
    tail.iter().sum::<f64>() / tail.len() as f64
}

/// Steady-state MSD of a learning curve in dB.
pub fn steady_state_estimate(curve: &LearningCurve, tail_fraction: f64) -> f64 {
    to_db(tail_mean(&curve.msd, tail_fraction))
}

/// First iteration whose MSD lies within `margin_db` of `steady_db`.
pub fn convergence_iteration(msd: &[f64], steady_db: f64, margin_db: f64) -> Option<usize> {
    let threshold = steady_db + margin_db;
    msd.iter().position(|&v| to_db(v) <= threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_full_tail() {
        let c = vec![0.01; 50];
        for f in [0.01, 0.3, 1.0] {
            assert!((to_db(tail_mean(&c, f)) + 20.0).abs() < 1e-12);
        }
        let ramp: Vec<f64> = (1..=4).map(f64::from).collect();
        assert_eq!(tail_mean(&ramp, 1.0), 2.5);
        assert_eq!(tail_mean(&ramp, 0.5), 3.5);
        assert_eq!(tail_mean(&ramp, 0.26), 3.5);
    }

    #[test]
    fn convergence_crossing() {
        let msd = [1.0, 0.1, 0.01, 0.001, 0.001];
        assert_eq!(convergence_iteration(&msd, -30.0, 3.0), Some(3));
        assert_eq!(convergence_iteration(&msd, -30.0, 20.0), Some(1));
        assert_eq!(convergence_iteration(&msd, -60.0, 3.0), None);
    }
}
