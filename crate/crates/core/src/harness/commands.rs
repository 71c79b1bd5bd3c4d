//! Config-driven entry points for the analysis subcommands.

use serde::Serialize;

use crate::benchmarks::QuadraticBasin;
use crate::ecdsep::EcdHyperParams;
use crate::error::{Error, Result};
use crate::harness::config::{OptimizerSpec, Problem, RunConfig};
use crate::harness::reports::{
    concentration_report, eta_monotonicity_report, ConcentrationReport, EtaRow,
};
use crate::harness::run::{execute, RunReport};
use crate::harness::swa::{best_tail_average, TailAverage};
use crate::objective::Objective;
use crate::rng::RngStream;
use crate::vector::ParamVector;

/// The analysis subcommands only make sense for ECDSep on the quadratic basin.
pub fn basin_setup(cfg: &RunConfig) -> Result<(QuadraticBasin, ParamVector, EcdHyperParams)> {
    let problem = cfg.problem.build()?;
    let theta0 = cfg.problem.start_point(&problem)?;
    let Problem::Quadratic(basin) = problem else {
        return Err(Error::Config(
            "this command needs `kind = \"quadratic\"` in [problem]".into(),
        ));
    };
    let OptimizerSpec::Ecdsep(hp) = cfg.optimizer.resolve()? else {
        return Err(Error::Config(
            "this command needs `kind = \"ecdsep\"` in [optimizer]".into(),
        ));
    };
    Ok((basin, theta0, hp))
}

pub fn concentrate(cfg: &RunConfig) -> Result<ConcentrationReport> {
    let section = cfg
        .concentration
        .as_ref()
        .ok_or_else(|| Error::Config("missing [concentration] section".into()))?;
    let (basin, theta0, hp) = basin_setup(cfg)?;
    concentration_report(
        &basin,
        theta0,
        &hp,
        cfg.max_steps,
        section.burn_in,
        section.bins,
        RngStream::new(cfg.seed),
    )
}

pub fn eta_scan(cfg: &RunConfig) -> Result<Vec<EtaRow>> {
    let section = cfg
        .eta_scan
        .as_ref()
        .ok_or_else(|| Error::Config("missing [eta_scan] section".into()))?;
    let (basin, theta0, hp) = basin_setup(cfg)?;
    eta_monotonicity_report(
        &basin,
        &theta0,
        &section.etas,
        &hp,
        cfg.max_steps,
        section.tail_fraction.unwrap_or(0.5),
        cfg.seed,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwaSummary {
    pub start_index: usize,
    /// Step number of the first averaged iterate.
    pub start_step: u64,
    pub averaged: usize,
    pub f_average: f64,
    pub f_last: Option<f64>,
    pub theta: ParamVector,
}

/// Runs `cfg`, then picks the best tail average of the logged iterates.
pub fn swa(cfg: &RunConfig) -> Result<(RunReport, SwaSummary)> {
    let mut report = execute(cfg, true)?;
    if let Some(e) = report.failure.take() {
        return Err(e);
    }
    let problem = cfg.problem.build()?;
    let TailAverage {
        theta,
        start_index,
        f,
    } = best_tail_average(&report.thetas, &problem)?;
    let every = cfg
        .record_every
        .unwrap_or_else(|| problem.default_record_every());
    let summary = SwaSummary {
        start_index,
        start_step: (start_index as u64 + 1) * every,
        averaged: report.thetas.len() - start_index,
        f_average: f,
        f_last: problem.value(&report.theta, None).ok(),
        theta,
    };
    Ok((report, summary))
}
