//! Monte Carlo learning curves on the fig1 scenario, with the noise switching
//! to an impulsive mixture halfway through. Writes `fig1_msd.csv` to the
//! current directory.
//!
//! cargo run --release --example learning_curves -- [runs]

use difflab::config::{presets, ExperimentConfig};
use difflab::harness::report::learning_curve_csv;
use difflab::harness::{monte_carlo_msd, tail_mean, Experiment, RunOptions};
use difflab::theory::to_db;

fn main() -> difflab::Result<()> {
    let runs = std::env::args().nth(1).unwrap_or_else(|| "20".into());
    let config = ExperimentConfig::from_str_with(presets::FIG1, &[format!("runs={runs}")])?;
    let exp = Experiment::from_config(&config)?;
    let switch = exp.noise.after.as_ref().map_or(exp.iterations, |(t, _)| *t);
    let curves = monte_carlo_msd(&exp, &RunOptions::default())?;
    println!("{:12} {:>10} {:>10}", "algorithm", "gaussian", "impulsive");
    for c in &curves {
        println!(
            "{:12} {:>10.2} {:>10.2}",
            c.algorithm,
            to_db(tail_mean(&c.msd[..switch], exp.tail_fraction)),
            to_db(tail_mean(&c.msd, exp.tail_fraction))
        );
    }
    std::fs::write("fig1_msd.csv", learning_curve_csv(&curves))?;
    println!("wrote fig1_msd.csv");
    Ok(())
}
