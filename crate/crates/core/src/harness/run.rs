use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::driver::{drive, RunOptions};
use crate::error::{Error, Result};
use crate::harness::config::RunConfig;
use crate::harness::write_file;
use crate::rng::RngStream;
use crate::trajectory::TrajectoryLog;
use crate::vector::ParamVector;

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub final_f: Option<f64>,
    pub best_f: Option<f64>,
    pub steps: u64,
    pub terminated: bool,
    pub failed: bool,
    /// Only filled when timing was requested, so that artifacts stay
    /// reproducible by default.
    pub wall_ms: Option<u64>,
}

#[derive(Debug)]
pub struct RunReport {
    pub log: TrajectoryLog,
    pub summary: RunSummary,
    pub theta: ParamVector,
    /// Parameters at every logged step, when requested.
    pub thetas: Vec<ParamVector>,
    pub failure: Option<Error>,
    pub wall_ms: u64,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub(crate) fn execute(cfg: &RunConfig, keep_thetas: bool) -> Result<RunReport> {
    let problem = cfg.problem.build()?;
    let theta0 = cfg.problem.start_point(&problem)?;
    let spec = cfg.optimizer.resolve()?;
    let every = cfg
        .record_every
        .unwrap_or_else(|| problem.default_record_every());
    let opts = RunOptions::new(cfg.max_steps)
        .record_every(every)
        .batches(problem.batch_schedule());
    opts.validate()?;

    let started = Instant::now();
    let mut opt = spec.build(&problem, theta0, RngStream::new(cfg.seed))?;
    let mut thetas = Vec::new();
    let outcome = drive(opt.as_mut(), &problem, &opts, |o, _| {
        if keep_thetas && o.steps_taken() % every == 0 {
            thetas.push(o.theta().clone());
        }
    })?;
    let wall_ms = started.elapsed().as_millis() as u64;

    Ok(RunReport {
        summary: RunSummary {
            final_f: finite(outcome.final_f),
            best_f: finite(outcome.best_f),
            steps: outcome.steps,
            terminated: outcome.terminated,
            failed: outcome.failed(),
            wall_ms: None,
        },
        log: outcome.log,
        theta: opt.theta().clone(),
        thetas,
        failure: outcome.failure,
        wall_ms,
    })
}

/// Runs one optimizer on one problem as described by `cfg`.
///
/// A non-finite objective mid-run does not return an error; it is reported
/// through `failure` and `summary.failed`, with the trajectory up to that
/// point kept.
pub fn run_single(cfg: &RunConfig) -> Result<RunReport> {
    execute(cfg, false)
}

impl RunReport {
    pub fn summary_json(&self, timing: bool) -> String {
        let mut summary = self.summary.clone();
        if timing {
            summary.wall_ms = Some(self.wall_ms);
        }
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
    }

    /// Writes `trajectory.csv` and `summary.json` into `dir`.
    pub fn write_artifacts(&self, dir: &Path, timing: bool) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_file(
            &dir.join("trajectory.csv"),
            self.log.to_csv_string().as_bytes(),
        )?;
        write_file(
            &dir.join("summary.json"),
            self.summary_json(timing).as_bytes(),
        )
    }
}
