//! Sweeps the steady kernel width of the DMTC filters under impulsive noise
//! and reports steady-state MSD and convergence time per value.
//!
//! cargo run --release --example kernel_sweep -- [runs]

use difflab::config::{presets, ExperimentConfig};
use difflab::harness::{configured_sweep, convergence_iteration, RunOptions};

fn main() -> difflab::Result<()> {
    let runs = std::env::args().nth(1).unwrap_or_else(|| "20".into());
    let config = ExperimentConfig::from_str_with(presets::FIG3, &[format!("runs={runs}")])?;
    let table = configured_sweep(&config, &RunOptions::default())?;
    for row in &table.rows {
        let cells: Vec<String> = table
            .algorithms
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let conv = convergence_iteration(&row.curves[i].msd, row.steady_db[i], 3.0);
                format!("{name} {:7.2} dB (within 3 dB at {:?})", row.steady_db[i], conv)
            })
            .collect();
        println!("zeta2 = {:6}: {}", row.value, cells.join("   "));
    }
    Ok(())
}
