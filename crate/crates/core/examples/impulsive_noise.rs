//! Draws link noise from a two-component Gaussian mixture and compares its
//! empirical moments and outlier rate with the nominal parameters.

use difflab::noise::{sample_gmm, GmmSpec};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

fn main() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    let draws = 1_000_000;
    for spec in [GmmSpec::gaussian(0.04), GmmSpec::mixture(0.01, 0.04, 10.0), GmmSpec::mixture(0.1, 0.04, 10.0)] {
        let samples: Vec<f64> = (0..draws).map(|_| sample_gmm(&spec, &mut rng)).collect();
        let var = samples.iter().map(|v| v * v).sum::<f64>() / draws as f64;
        let kurt = samples.iter().map(|v| v.powi(4)).sum::<f64>() / draws as f64 / (var * var);
        let big = samples.iter().filter(|v| v.abs() > 5.0 * spec.sigma_a2.sqrt()).count();
        println!(
            "c={:<4} sigma_a2={} sigma_b2={:<4}  variance {:.4} (nominal {:.4})  kurtosis {:6.2}  beyond 5 sd: {:.4}%",
            spec.c,
            spec.sigma_a2,
            spec.sigma_b2,
            var,
            spec.total_variance(),
            kurt,
            100.0 * big as f64 / draws as f64
        );
    }
}
