use difflab::config::{ExperimentConfig, SweepParameter};
use difflab::harness::*;
use difflab::theory::to_db;
use difflab::Error;

const SMALL: &str = r#"
name = "small"
iterations = 300
runs = 40
seed = 5
tail_fraction = 0.25

[graph]
nodes = 6
avg_degree = 2.5
seed = 3

[signal]
h = [0.4, 0.7, -0.3]
observation_variance = 0.1

[noise.before]
input = { sigma_a2 = 0.02 }
output = { sigma_a2 = 0.02 }
weight = { c = 0.05, sigma_a2 = 0.01, sigma_b2 = 2.0 }

[[algorithm]]
name = "DLMS"
kind = "dlms"
step_size = 0.02

[[algorithm]]
name = "AC-DMTC"
kind = "dmtc"
adaptive_combination = true
step_size = 0.05
"#;

fn small(overrides: &[&str]) -> ExperimentConfig {
    let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ExperimentConfig::from_str_with(SMALL, &o).unwrap()
}

fn experiment(overrides: &[&str]) -> Experiment {
    Experiment::from_config(&small(overrides)).unwrap()
}

#[test]
fn single_run_curve_is_node_average_of_realization() {
    let exp = experiment(&["runs=1"]);
    let spec = &exp.algorithms[1];
    let curve = monte_carlo_curve(&exp, spec, &RunOptions::default()).unwrap();
    let real = run_single_realization(&exp, spec, 0).unwrap();
    assert_eq!(curve.len(), 300);
    for i in 0..300 {
        let avg = real.row(i).iter().sum::<f64>() * (1.0 / 6.0);
        assert!((curve.msd[i] - avg).abs() <= 1e-15 * avg.max(1.0));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let exp = experiment(&["runs=150"]);
    let one = monte_carlo_msd(&exp, &RunOptions::default().with_threads(1).with_per_node(true)).unwrap();
    let three = monte_carlo_msd(&exp, &RunOptions::default().with_threads(3).with_per_node(true)).unwrap();
    assert_eq!(one, three);
}

#[test]
fn ensemble_accounts_for_every_run() {
    let exp = experiment(&[]);
    for c in monte_carlo_msd(&exp, &RunOptions::default()).unwrap() {
        assert_eq!(c.runs_used + c.diverged_runs, 40);
        assert_eq!(c.diverged_runs, 0);
    }
}

#[test]
fn runaway_steps_empty_the_ensemble() {
    let exp = experiment(&["algorithm.DLMS.step_size=5.0"]);
    let err = monte_carlo_curve(&exp, &exp.algorithms[0], &RunOptions::default()).unwrap_err();
    assert!(matches!(err, Error::EmptyEnsemble { runs: 40, .. }));
    let real = run_single_realization(&exp, &exp.algorithms[0], 0).unwrap();
    let stop = real.diverged_at.unwrap();
    assert_eq!(real.iterations_recorded(), stop);
}

/// The spread of steady-state estimates across independent ensembles
/// shrinks like one over the square root of the run count.
#[test]
fn ensemble_spread_scales_with_run_count() {
    let spread = |runs: usize| {
        let estimates: Vec<f64> = (0..10)
            .map(|b| {
                let exp = experiment(&[&format!("runs={runs}"), &format!("seed={}", 1000 + b * 7 + runs)]);
                let c = monte_carlo_curve(&exp, &exp.algorithms[0], &RunOptions::default()).unwrap();
                tail_mean(&c.msd, exp.tail_fraction)
            })
            .collect();
        let mean = estimates.iter().sum::<f64>() / 10.0;
        (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 9.0).sqrt()
    };
    let ratio = spread(50) / spread(200);
    assert!((1.2..3.4).contains(&ratio), "spread ratio {ratio}");
}

#[test]
fn tail_mean_of_harmonic_sequence() {
    let msd: Vec<f64> = (1..=1000).map(|i| 1.0 / i as f64).collect();
    // last 200 terms: H(1000) - H(800)
    let oracle: f64 = (801..=1000).map(|i| 1.0 / i as f64).sum::<f64>() / 200.0;
    assert!((tail_mean(&msd, 0.2) - oracle).abs() < 1e-12);
    // ceil rounding: 0.1234 * 1000 -> 124 terms
    let oracle: f64 = (877..=1000).map(|i| 1.0 / i as f64).sum::<f64>() / 124.0;
    assert!((tail_mean(&msd, 0.1234) - oracle).abs() < 1e-12);
}

#[test]
fn convergence_iteration_finds_first_crossing() {
    let msd: Vec<f64> = (0..100).map(|i| 10f64.powf(-(i as f64) / 20.0)).collect();
    // -3 dB reached at i = 6
    assert_eq!(convergence_iteration(&msd, -5.0, 2.0), Some(6));
    assert_eq!(convergence_iteration(&msd, -80.0, 1.0), None);
}

#[test]
fn one_point_sweep_matches_plain_run() {
    let config = small(&["runs=12"]);
    let table = sweep(&config, SweepParameter::SigmaA2, &[0.03], &RunOptions::default()).unwrap();
    let exp = Experiment::from_config(&with_parameter(&config, SweepParameter::SigmaA2, 0.03)).unwrap();
    let curves = monte_carlo_msd(&exp, &RunOptions::default()).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].curves, curves);
    for (db, c) in table.rows[0].steady_db.iter().zip(&curves) {
        assert_eq!(*db, to_db(tail_mean(&c.msd, 0.25)));
    }
}

#[test]
fn sweep_rows_come_out_sorted() {
    let config = small(&["runs=4", "iterations=50"]);
    let table = sweep(&config, SweepParameter::Zeta2, &[5.0, 0.1, 1.0], &RunOptions::default()).unwrap();
    let values: Vec<f64> = table.rows.iter().map(|r| r.value).collect();
    assert_eq!(values, vec![0.1, 1.0, 5.0]);
    assert_eq!(table.column("AC-DMTC").unwrap().len(), 3);
}

#[test]
fn sweep_sets_every_channel() {
    let config = small(&[]);
    let swept = with_parameter(&config, SweepParameter::SigmaA2, 0.3);
    for ch in [swept.noise.before.input, swept.noise.before.output, swept.noise.before.weight] {
        assert_eq!(ch.sigma_a2, 0.3);
    }
    assert_eq!(swept.noise.before.weight.sigma_b2, 2.0);
}

#[test]
fn noiseless_network_compares_at_minus_infinity() {
    let mut config = small(&[
        "signal.observation_variance=0.0",
        "noise.before.input.sigma_a2=0.0",
        "noise.before.output.sigma_a2=0.0",
        "noise.before.weight.sigma_a2=0.0",
        "noise.before.weight.c=0.0",
        "algorithm.AC-DMTC.adaptive_combination=false",
        "iterations=1500",
        "runs=4",
    ]);
    // default kernel widths scale with the noise, so give explicit ones
    config.algorithms[1].kernel_initial = Some(1.0);
    config.algorithms[1].kernel_steady = Some(1.0);
    let exp = Experiment::from_config(&config).unwrap();
    let cmp = theory_vs_simulation(&exp, &exp.algorithms[1], &RunOptions::default()).unwrap();
    assert_eq!(cmp.theory.msd_db, f64::NEG_INFINITY);
    assert!(cmp.simulated_db < -150.0, "simulated {}", cmp.simulated_db);
}

#[test]
fn comparison_rejects_impulsive_noise_and_adaptive_weights() {
    let exp = experiment(&[]);
    assert!(matches!(
        theory_vs_simulation(&exp, &exp.algorithms[1], &RunOptions::default()),
        Err(Error::InvalidArgument(_))
    ));
    let exp = experiment(&["noise.before.weight.c=0.0"]);
    assert!(theory_report(&exp, &exp.algorithms[1]).is_err());
    assert!(theory_report(&exp, &exp.algorithms[0]).is_err());
}

#[test]
fn zero_iterations_are_rejected() {
    let mut exp = experiment(&[]);
    exp.iterations = 0;
    assert!(matches!(
        run_single_realization(&exp, &exp.algorithms[0], 0),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn observer_sees_every_iteration() {
    let exp = experiment(&[]);
    let mut seen = Vec::new();
    let real = run_observed(&exp, &exp.algorithms[1], 2, |i, states| {
        seen.push(i);
        assert_eq!(states.len(), 6);
    })
    .unwrap();
    assert_eq!(seen, (0..300).collect::<Vec<_>>());
    assert_eq!(real, run_single_realization(&exp, &exp.algorithms[1], 2).unwrap());
}
