//! Experiment plumbing behind the command-line tool: configuration files,
//! single runs, fixed-budget random-search sweeps, iterate averaging, and
//! the theory-comparison reports.

mod commands;
pub mod config;
mod reports;
mod run;
mod svg;
mod swa;
mod sweep;

pub use commands::{basin_setup, concentrate, eta_scan, swa, SwaSummary};
pub use config::{
    ConcentrationSection, EtaScanSection, OptimizerConfig, OptimizerKind, OptimizerSpec, Problem,
    ProblemConfig, ProblemKind, RunConfig,
};
pub use reports::{
    concentration_report, eta_monotonicity_report, eta_rows_csv, ConcentrationReport, EtaRow,
    HistogramBin,
};
pub use run::{run_single, RunReport, RunSummary};
pub use svg::loss_chart_svg;
pub use swa::{best_tail_average, swa_average, TailAverage};
pub use sweep::{
    run_sweep, BoolChoice, Metric, ParamRange, Preset, SearchSpace, SweepReport, SweepSpec,
    TrialResult, SWEEP_CSV_HEADER,
};

use std::path::Path;

use crate::error::Result;

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes)?;
    Ok(())
}
