//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O, 2 config parse or unknown key (also clap
//! usage errors), 3 invalid config or argument, 4 numerical failure,
//! 5 instability or every run diverged.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, SweepParameter};
use crate::error::{Error, Result};
use crate::harness::report::{self, Artifacts};
use crate::harness::{
    configured_sweep, default_theory_algorithm, monte_carlo_msd, sweep, theory_report, theory_vs_simulation,
    Experiment, RunOptions,
};

#[derive(Debug, Parser)]
#[command(name = "difflab", version, about = "Diffusion adaptive filtering over noisy links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate learning curves of every configured algorithm.
    Run(CommonArgs),
    /// Steady-state MSD over a range of one noise or kernel parameter.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Parameter to sweep; defaults to the config's [sweep] section.
        #[arg(long, value_enum)]
        parameter: Option<ParameterArg>,
        /// Comma-separated values, used with --parameter.
        #[arg(long, value_delimiter = ',', requires = "parameter")]
        values: Vec<f64>,
    },
    /// Step-size bounds, spectral radius and predicted steady-state MSD.
    Theory {
        #[command(flatten)]
        common: CommonArgs,
        /// Algorithm to analyze; defaults to the first fixed-combination DMTC.
        #[arg(long)]
        algorithm: Option<String>,
    },
    /// Predicted against simulated steady-state MSD.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        algorithm: Option<String>,
    },
    /// Check the config, graph and weight matrices without simulating.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ParameterArg {
    SigmaA2,
    SigmaB2,
    Zeta2,
}

impl From<ParameterArg> for SweepParameter {
    fn from(p: ParameterArg) -> Self {
        match p {
            ParameterArg::SigmaA2 => SweepParameter::SigmaA2,
            ParameterArg::SigmaB2 => SweepParameter::SigmaB2,
            ParameterArg::Zeta2 => SweepParameter::Zeta2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the number of Monte Carlo runs.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Overrides the master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dotted `key=value` override; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Also write per-node learning curves.
    #[arg(long)]
    pub per_node_msd: bool,
}

impl CommonArgs {
    pub fn load(&self) -> Result<ExperimentConfig> {
        let mut overrides = self.overrides.clone();
        if let Some(runs) = self.runs {
            overrides.push(format!("runs={runs}"));
        }
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        let mut config = ExperimentConfig::load(&self.config, &overrides)?;
        config.per_node_msd |= self.per_node_msd;
        Ok(config)
    }

    fn out_file(&self, config: &ExperimentConfig, suffix: &str) -> PathBuf {
        self.out.join(format!("{}_{suffix}", config.name))
    }
}

/// Process exit code for an error.
pub fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Io(_) => 1,
        Error::Parse { .. } | Error::UnknownKey(_) => 2,
        Error::Validation { .. }
        | Error::InvalidArgument(_)
        | Error::Combination(_)
        | Error::GenerationFailure { .. } => 3,
        Error::NumericalFailure(_) => 4,
        Error::Instability { .. } | Error::EmptyEnsemble { .. } => 5,
    }
}

fn algorithm_or_default<'a>(exp: &'a Experiment, name: Option<&str>) -> Result<&'a crate::engine::AlgorithmSpec> {
    match name {
        Some(name) => exp
            .algorithm(name)
            .ok_or_else(|| Error::invalid(format!("no algorithm named `{name}`"))),
        None => default_theory_algorithm(exp),
    }
}

/// Executes a parsed command, writing a summary to `stdout`. Output files are
/// written only after every result has been computed.
pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let mut artifacts = Artifacts::default();
    match command {
        Command::Run(args) => {
            let config = args.load()?;
            let exp = Experiment::from_config(&config)?;
            let options = RunOptions::default().with_per_node(config.per_node_msd);
            let curves = monte_carlo_msd(&exp, &options)?;
            artifacts.add_csv_with_plot(args.out_file(&config, "msd.csv"), report::learning_curve_csv(&curves), "MSD (dB)");
            for c in &curves {
                if let Some(csv) = report::per_node_csv(c) {
                    let file = args.out_file(&config, &format!("{}_nodes.csv", c.algorithm));
                    artifacts.add(file, csv);
                }
            }
            let summary = report::run_summary(&curves, exp.tail_fraction);
            write!(stdout, "{summary}")?;
            artifacts.add(args.out_file(&config, "summary.txt"), summary);
        }
        Command::Sweep { common, parameter, values } => {
            let config = common.load()?;
            let options = RunOptions::default();
            let table = match parameter {
                Some(p) => sweep(&config, (*p).into(), values, &options)?,
                None => configured_sweep(&config, &options)?,
            };
            let csv = report::sweep_csv(&table);
            write!(stdout, "{csv}")?;
            artifacts.add_csv_with_plot(common.out_file(&config, "sweep.csv"), csv, "steady-state MSD (dB)");
        }
        Command::Theory { common, algorithm } => {
            let config = common.load()?;
            let exp = Experiment::from_config(&config)?;
            let spec = algorithm_or_default(&exp, algorithm.as_deref())?;
            let text = report::theory_text(&theory_report(&exp, spec)?);
            write!(stdout, "{text}")?;
            artifacts.add(common.out_file(&config, "theory.txt"), text);
        }
        Command::Compare { common, algorithm } => {
            let config = common.load()?;
            let exp = Experiment::from_config(&config)?;
            let spec = algorithm_or_default(&exp, algorithm.as_deref())?;
            let cmp = theory_vs_simulation(&exp, spec, &RunOptions::default())?;
            let text = report::comparison_text(&cmp);
            write!(stdout, "{text}")?;
            artifacts.add(common.out_file(&config, "compare.txt"), text);
        }
        Command::Validate(args) => {
            let config = args.load()?;
            let exp = Experiment::from_config(&config)?;
            writeln!(
                stdout,
                "config={} nodes={} edges={} mean_degree={:.3} algorithms={}",
                config.name,
                exp.n_nodes(),
                exp.graph.edges().len(),
                exp.graph.mean_degree(),
                exp.algorithms.iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join(",")
            )?;
        }
    }
    artifacts.write()
}

/// Entry point of the `difflab` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match execute(&cli.command, &mut stdout) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
