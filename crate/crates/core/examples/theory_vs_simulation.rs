//! Predicted against simulated steady-state MSD for fixed-combination DMTC on
//! a 10-node Gaussian scenario, at a few step sizes.
//!
//! cargo run --release --example theory_vs_simulation -- [runs]

use difflab::config::{presets, ExperimentConfig};
use difflab::harness::{default_theory_algorithm, theory_vs_simulation, Experiment, RunOptions};

fn main() -> difflab::Result<()> {
    let runs = std::env::args().nth(1).unwrap_or_else(|| "50".into());
    let overrides = vec!["graph.nodes=10".to_string(), format!("runs={runs}")];
    let config = ExperimentConfig::from_str_with(presets::FIG1_GAUSSIAN, &overrides)?;
    let exp = Experiment::from_config(&config)?;
    let base = default_theory_algorithm(&exp)?.clone();
    println!("{:>6} {:>10} {:>10} {:>8}", "step", "theory", "simulated", "gap");
    for step in [0.01, 0.03, 0.1] {
        let mut spec = base.clone();
        spec.step_sizes = vec![step; exp.n_nodes()];
        let cmp = theory_vs_simulation(&exp, &spec, &RunOptions::default())?;
        println!("{step:6.2} {:10.2} {:10.2} {:8.2}", cmp.theory.msd_db, cmp.simulated_db, cmp.gap_db);
    }
    Ok(())
}
