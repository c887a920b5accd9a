//! Text renderings of curves, sweeps and theory reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::theory::to_db;

use super::compare::{Comparison, TheoryReport};
use super::monte_carlo::LearningCurve;
use super::sweep::SweepTable;

/// Formats a dB value; infinities come out as `-inf` / `inf`.
fn db(v: f64) -> String {
    format!("{v}")
}

/// `iteration,<algo>_msd_db,...`, one row per iteration.
pub fn learning_curve_csv(curves: &[LearningCurve]) -> String {
    let mut out = String::from("iteration");
    for c in curves {
        let _ = write!(out, ",{}_msd_db", c.algorithm);
    }
    out.push('\n');
    let len = curves.iter().map(LearningCurve::len).max().unwrap_or(0);
    for i in 0..len {
        let _ = write!(out, "{i}");
        for c in curves {
            let _ = write!(out, ",{}", c.msd.get(i).map_or(String::new(), |&v| db(to_db(v))));
        }
        out.push('\n');
    }
    out
}

/// Per-node MSD of one curve: `iteration,node0_msd_db,...`.
pub fn per_node_csv(curve: &LearningCurve) -> Option<String> {
    let nodes = curve.per_node.as_ref()?;
    let mut out = String::from("iteration");
    for k in 0..nodes.len() {
        let _ = write!(out, ",node{k}_msd_db");
    }
    out.push('\n');
    for i in 0..curve.len() {
        let _ = write!(out, "{i}");
        for node in nodes {
            let _ = write!(out, ",{}", db(to_db(node[i])));
        }
        out.push('\n');
    }
    Some(out)
}

/// `param_value,<algo>_steady_db,...`, one row per swept value.
pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("param_value");
    for a in &table.algorithms {
        let _ = write!(out, ",{a}_steady_db");
    }
    out.push('\n');
    for row in &table.rows {
        let _ = write!(out, "{}", row.value);
        for v in &row.steady_db {
            let _ = write!(out, ",{}", db(*v));
        }
        out.push('\n');
    }
    out
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn theory_text(report: &TheoryReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algorithm={}", report.algorithm);
    let _ = writeln!(out, "step_sizes={}", join(&report.step_sizes));
    let _ = writeln!(out, "step_bounds={}", join(&report.step_bounds));
    let _ = writeln!(out, "spectral_radius={}", report.rho);
    let _ = writeln!(out, "msd_linear={}", report.msd_linear);
    let _ = writeln!(out, "msd_db={}", db(report.msd_db));
    let _ = writeln!(out, "series_terms={}", report.series_terms);
    out
}

pub fn comparison_text(cmp: &Comparison) -> String {
    let mut out = theory_text(&cmp.theory);
    let _ = writeln!(out, "predicted_db={}", db(cmp.theory.msd_db));
    let _ = writeln!(out, "simulated_db={}", db(cmp.simulated_db));
    let _ = writeln!(out, "gap_db={}", cmp.gap_db);
    let _ = writeln!(out, "runs_used={}", cmp.runs_used);
    let _ = writeln!(out, "diverged_runs={}", cmp.diverged_runs);
    out
}

/// Per-algorithm run accounting, `key=value` lines.
pub fn run_summary(curves: &[LearningCurve], tail_fraction: f64) -> String {
    let mut out = String::new();
    for c in curves {
        let steady = super::analysis::steady_state_estimate(c, tail_fraction);
        let _ = writeln!(
            out,
            "{}: runs_used={} diverged_runs={} steady_db={}",
            c.algorithm,
            c.runs_used,
            c.diverged_runs,
            db(steady)
        );
    }
    out
}

/// Gnuplot script plotting every data column of `csv` against the first.
pub fn gnuplot_script(csv: &Path, header: &str, ylabel: &str) -> String {
    let file = csv.file_name().map_or_else(|| csv.display().to_string(), |f| f.to_string_lossy().into_owned());
    let columns: Vec<&str> = header.trim().split(',').collect();
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set key outside right");
    let _ = writeln!(out, "set xlabel '{}'", columns.first().unwrap_or(&"x"));
    let _ = writeln!(out, "set ylabel '{ylabel}'");
    let plots: Vec<String> = columns
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, name)| format!("'{file}' using 1:{} with lines title '{name}'", j + 1))
        .collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

/// Files produced by one command, written only once all content exists.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(PathBuf, String)>,
}

impl Artifacts {
    pub fn add(&mut self, path: impl Into<PathBuf>, content: String) {
        self.files.push((path.into(), content));
    }

    /// Adds a CSV together with a gnuplot script next to it.
    pub fn add_csv_with_plot(&mut self, path: impl Into<PathBuf>, content: String, ylabel: &str) {
        let path = path.into();
        let header = content.lines().next().unwrap_or("").to_string();
        self.add(path.with_extension("gp"), gnuplot_script(&path, &header, ylabel));
        self.add(path, content);
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn write(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.files.len());
        for (path, content) in self.files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, content)?;
            written.push(path);
        }
        Ok(written)
    }
}
