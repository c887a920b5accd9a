use difflab::engine::{mtc_gradient, SharedSample};
use difflab::theory::{TheoryInputs, UniformLinks};
use difflab::topology::{metropolis_weights, MatrixRole, NetworkGraph};
use difflab::Error;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use rand_xoshiro::Xoshiro256PlusPlus;

const TRUTH: [f64; 2] = [0.4, 0.7];

fn path_inputs(step: f64, links: UniformLinks) -> TheoryInputs {
    let g = NetworkGraph::path(3).unwrap();
    let c = metropolis_weights(&g);
    let a = c.clone().with_role(MatrixRole::Adaptation);
    TheoryInputs::uniform(&g, &TRUTH, 0.1, links, step, &a, &c).unwrap()
}

const LINKS: UniformLinks = UniformLinks {
    sigma_x2: 0.04,
    sigma_y2: 0.02,
    sigma_phi2: 0.01,
    zeta2: 0.5,
};

/// Spectral radius from Gelfand's formula, `||B^k||^(1/k)` with `k = 2^m`,
/// renormalizing after each squaring.
fn gelfand_radius(b: &DMatrix<f64>) -> f64 {
    let mut p = b.clone();
    let mut log_scale = 0.0;
    let mut k = 1.0f64;
    for _ in 0..48 {
        let n = p.norm();
        if n == 0.0 {
            return 0.0;
        }
        p /= n;
        log_scale += n.ln() / k;
        p = &p * &p;
        k *= 2.0;
    }
    (log_scale + p.norm().ln() / k).exp()
}

#[test]
fn mean_recursion_matches_explicit_construction() {
    let inputs = path_inputs(0.1, LINKS);
    let (b, rho) = inputs.mean_recursion_matrix().unwrap();

    // H_lk = -(z/(sx+z))^1.5 I / (||h||^2 + gamma) on cross links, -I on self links
    let gamma = (0.1 + 0.02) / 0.04;
    let s2 = TRUTH.iter().map(|v| v * v).sum::<f64>() + gamma;
    let cross = -(0.5f64 / 0.54).powf(1.5) / s2;
    let c = metropolis_weights(&NetworkGraph::path(3).unwrap()).matrix().clone();
    let mut expected = DMatrix::zeros(6, 6);
    for k in 0..3 {
        for l in 0..3 {
            // block (k, l) of (C ⊗ I)' (I + M H) is c_lk (1 + mu h_l) I
            let mut h_l = 0.0;
            for m in 0..3 {
                let alpha = c[(m, l)];
                if alpha != 0.0 {
                    h_l += alpha * if m == l { -1.0 } else { cross };
                }
            }
            for j in 0..2 {
                expected[(2 * k + j, 2 * l + j)] = c[(l, k)] * (1.0 + 0.1 * h_l);
            }
        }
    }
    assert!((&b - &expected).abs().max() < 1e-15);
    let oracle = gelfand_radius(&expected);
    assert!((rho - oracle).abs() < 1e-8, "rho {rho} oracle {oracle}");
}

#[test]
fn nonsymmetric_recursion_radius() {
    // unequal steps and adaptation weights make B non-normal
    let mut inputs = path_inputs(0.1, LINKS);
    inputs.step_sizes = vec![0.05, 0.3, 0.15];
    inputs.adaptation = DMatrix::from_row_slice(3, 3, &[0.9, 0.2, 0.0, 0.1, 0.3, 0.6, 0.0, 0.5, 0.4]);
    let (b, rho) = inputs.mean_recursion_matrix().unwrap();
    assert!((rho - gelfand_radius(&b)).abs() < 1e-8);
}

#[test]
fn stepsize_bound_separates_stable_from_unstable() {
    let inputs = path_inputs(0.1, LINKS);
    let bounds: Vec<f64> = (0..3).map(|k| inputs.stepsize_upper_bound(k).unwrap()).collect();

    let mut stable = inputs.clone();
    stable.step_sizes = bounds.iter().map(|b| 0.9 * b).collect();
    let (_, rho) = stable.mean_recursion_matrix().unwrap();
    assert!(rho < 1.0);

    let mut unstable = inputs.clone();
    unstable.step_sizes = bounds.iter().map(|b| 1.1 * b).collect();
    let (_, rho) = unstable.mean_recursion_matrix().unwrap();
    assert!(rho > 1.0);
    assert!(matches!(unstable.steady_state_msd(), Err(Error::Instability { .. })));
}

#[test]
fn msd_grows_with_step_size_without_exchange_noise() {
    let links = UniformLinks {
        sigma_phi2: 0.0,
        ..LINKS
    };
    let inputs = path_inputs(0.1, links);
    let bounds: Vec<f64> = (0..3).map(|k| inputs.stepsize_upper_bound(k).unwrap()).collect();
    let at = |f: f64| {
        let mut i = inputs.clone();
        i.step_sizes = bounds.iter().map(|b| f * b).collect();
        i.steady_state_msd().unwrap()
    };
    let small = at(0.1);
    let large = at(0.9);
    assert!(small.msd_linear.is_finite() && large.msd_linear.is_finite());
    assert!(small.msd_linear > 0.0);
    assert!(large.msd_db > small.msd_db + 3.0, "{} vs {}", large.msd_db, small.msd_db);
}

/// Monte Carlo moments of the cross-link direction at `w`, with the
/// `1/zeta2` factor removed as the simulator does.
fn link_direction_samples(w: &[f64], draws: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let std = Normal::new(0.0, 1.0).unwrap();
    let (obs, sx, sy, z) = (0.1f64, LINKS.sigma_x2, LINKS.sigma_y2, LINKS.zeta2);
    let gamma = (obs + sy) / sx;
    (0..draws)
        .map(|_| {
            let x0: Vec<f64> = (0..2).map(|_| std.sample(&mut rng)).collect();
            let d: f64 = TRUTH.iter().zip(&x0).map(|(h, x)| h * x).sum();
            let y = d + obs.sqrt() * std.sample(&mut rng) + sy.sqrt() * std.sample(&mut rng);
            let x: Vec<f64> = x0.iter().map(|v| v + sx.sqrt() * std.sample(&mut rng)).collect();
            let g = mtc_gradient(w, &SharedSample::new(x, y, 1, false), z, gamma).unwrap();
            g.into_iter().map(|v| v * z).collect()
        })
        .collect()
}

#[test]
fn hessian_and_covariance_match_sampling() {
    let inputs = path_inputs(0.1, LINKS);
    let h = inputs.hessian_at_optimum(0, 1).unwrap();
    let q = inputs.gradient_covariance(0, 1).unwrap();
    let draws = 400_000;

    let at_truth = link_direction_samples(&TRUTH, draws, 11);
    let mut q_mc = DMatrix::<f64>::zeros(2, 2);
    for g in &at_truth {
        for i in 0..2 {
            for j in 0..2 {
                q_mc[(i, j)] += g[i] * g[j] / draws as f64;
            }
        }
    }
    assert!((&q_mc - &q).norm() / q.norm() < 0.03, "Q {q} vs {q_mc}");

    // central difference of the mean direction, common random numbers
    let delta = 0.05;
    let mut h_mc = DMatrix::<f64>::zeros(2, 2);
    for j in 0..2 {
        let mut plus = TRUTH.to_vec();
        plus[j] += delta;
        let mut minus = TRUTH.to_vec();
        minus[j] -= delta;
        let gp = link_direction_samples(&plus, draws, 12);
        let gm = link_direction_samples(&minus, draws, 12);
        for i in 0..2 {
            let mean: f64 = gp.iter().zip(&gm).map(|(a, b)| a[i] - b[i]).sum::<f64>() / draws as f64;
            h_mc[(i, j)] = mean / (2.0 * delta);
        }
    }
    assert!((&h_mc - &h).norm() / h.norm() < 0.03, "H {h} vs {h_mc}");
}
