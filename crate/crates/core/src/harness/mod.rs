//! Monte Carlo ensembles, sweeps and theory comparisons.

pub mod analysis;
pub mod compare;
pub mod experiment;
pub mod monte_carlo;
pub mod realization;
pub mod report;
pub mod sweep;

pub use analysis::{convergence_iteration, steady_state_estimate, tail_mean};
pub use compare::{
    default_theory_algorithm, theory_inputs, theory_report, theory_vs_simulation, Comparison, TheoryReport,
};
pub use experiment::{Experiment, NoiseSchedule};
pub use monte_carlo::{monte_carlo_curve, monte_carlo_msd, LearningCurve, RunOptions, THREADS_ENV};
pub use realization::{run_observed, run_single_realization, Realization, DIVERGENCE_NORM};
pub use sweep::{configured_sweep, sweep, with_parameter, SweepRow, SweepTable};
