//! One realization of every fig1 filter, printing the network squared error
//! every 500 iterations and the final weights of node 0.

use difflab::config::{presets, ExperimentConfig};
use difflab::harness::{run_single_realization, Experiment};

fn main() -> difflab::Result<()> {
    let config = ExperimentConfig::from_str_with(presets::FIG1, &[])?;
    let exp = Experiment::from_config(&config)?;
    println!("truth {:?}", exp.truth);
    for spec in &exp.algorithms {
        let r = run_single_realization(&exp, spec, 0)?;
        let trace: Vec<String> = (0..r.iterations_recorded())
            .step_by(500)
            .map(|i| format!("{:6.1}", 10.0 * (r.row(i).iter().sum::<f64>() / exp.n_nodes() as f64).log10()))
            .collect();
        let w0: Vec<String> = r.final_weights[0].iter().map(|v| format!("{v:.3}")).collect();
        println!("{:12} dB: {}  node0 w = [{}]", spec.name, trace.join(" "), w0.join(", "));
    }
    Ok(())
}
