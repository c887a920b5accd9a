//! Step-size bounds, mean-recursion spectral radius and predicted
//! steady-state MSD for fixed-combination DMTC, and how the prediction moves
//! with the step size.

use difflab::config::{presets, ExperimentConfig};
use difflab::harness::{default_theory_algorithm, theory_inputs, theory_report, Experiment};

fn main() -> difflab::Result<()> {
    let config = ExperimentConfig::from_str_with(presets::FIG1_GAUSSIAN, &[])?;
    let exp = Experiment::from_config(&config)?;
    let spec = default_theory_algorithm(&exp)?;
    let report = theory_report(&exp, spec)?;
    let min_bound = report.step_bounds.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("algorithm {}  step {}  smallest bound {min_bound:.4}", report.algorithm, report.step_sizes[0]);
    println!("rho {:.6}  predicted MSD {:.2} dB", report.rho, report.msd_db);

    println!("\n{:>10} {:>10} {:>10}", "fraction", "rho", "msd_db");
    for fraction in [0.02, 0.05, 0.1, 0.3, 0.6, 0.9, 1.1] {
        let mut s = spec.clone();
        s.step_sizes = report.step_bounds.iter().map(|b| fraction * b).collect();
        let inputs = theory_inputs(&exp, &s)?;
        let (_, rho) = inputs.mean_recursion_matrix()?;
        match inputs.steady_state_msd() {
            Ok(m) => println!("{fraction:10.2} {rho:10.4} {:10.2}", m.msd_db),
            Err(e) => println!("{fraction:10.2} {rho:10.4} {e}"),
        }
    }
    Ok(())
}
