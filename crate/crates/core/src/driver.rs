//! Optimizer-agnostic run loop used by ECDSep, the baselines and the harness.

use crate::error::{Error, Result};
use crate::objective::{BatchToken, Objective};
use crate::trajectory::{TrajectoryLog, TrajectoryRecord};
use crate::vector::ParamVector;

/// Information returned by a single optimizer step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Objective value at the parameters the step started from.
    pub value: f64,
}

pub trait Optimizer {
    fn name(&self) -> &'static str;

    fn step(&mut self, obj: &dyn Objective, batch: Option<BatchToken>) -> Result<StepInfo>;

    fn theta(&self) -> &ParamVector;

    fn momentum_norm(&self) -> f64;

    /// Conserved-energy convention value at the current state given `F(theta)`.
    fn measured_energy(&self, _value: f64) -> f64 {
        f64::NAN
    }

    fn is_terminated(&self) -> bool {
        false
    }

    fn steps_taken(&self) -> u64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BatchSchedule {
    /// No batch token; the objective is fixed.
    #[default]
    FullBatch,
    /// Step `k` (0-based) uses `BatchToken(k)`.
    Cycling,
}

impl BatchSchedule {
    pub fn token(self, step: u64) -> Option<BatchToken> {
        match self {
            BatchSchedule::FullBatch => None,
            BatchSchedule::Cycling => Some(BatchToken(step)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub max_steps: u64,
    /// Log one record every `k` steps; `None` disables logging.
    pub record_every: Option<u64>,
    pub batches: BatchSchedule,
}

impl RunOptions {
    pub fn new(max_steps: u64) -> Self {
        Self {
            max_steps,
            record_every: Some(1),
            batches: BatchSchedule::FullBatch,
        }
    }

    pub fn record_every(mut self, every: u64) -> Self {
        self.record_every = Some(every);
        self
    }

    pub fn without_log(mut self) -> Self {
        self.record_every = None;
        self
    }

    pub fn batches(mut self, batches: BatchSchedule) -> Self {
        self.batches = batches;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::Parameter("max_steps must be at least 1".into()));
        }
        if self.record_every == Some(0) {
            return Err(Error::Parameter("record_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub log: TrajectoryLog,
    pub steps: u64,
    /// Full-objective value at the final parameters (NaN after a failure).
    pub final_f: f64,
    /// Smallest objective value seen at any step start or at the end.
    pub best_f: f64,
    pub terminated: bool,
    /// Numerical failure that stopped the run early, if any.
    pub failure: Option<Error>,
}

impl RunOutcome {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// Runs `opt` until it terminates, fails, or reaches `opts.max_steps`.
///
/// `observer` sees the optimizer after every completed step.
pub fn drive<O, F>(
    opt: &mut O,
    obj: &dyn Objective,
    opts: &RunOptions,
    mut observer: F,
) -> Result<RunOutcome>
where
    O: Optimizer + ?Sized,
    F: FnMut(&O, &StepInfo),
{
    opts.validate()?;
    obj.check_input(opt.theta())?;
    let mut log = TrajectoryLog::new();
    let mut best_f = f64::INFINITY;
    let mut failure = None;

    for k in 0..opts.max_steps {
        if opt.is_terminated() {
            break;
        }
        let batch = opts.batches.token(k);
        let info = match opt.step(obj, batch) {
            Ok(info) => info,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        best_f = best_f.min(info.value);
        observer(opt, &info);

        if let Some(every) = opts.record_every {
            let step = opt.steps_taken();
            if step % every == 0 {
                let f = obj.value(opt.theta(), batch).unwrap_or(f64::NAN);
                log.push(TrajectoryRecord {
                    step,
                    f,
                    energy_measured: opt.measured_energy(f),
                    pi_norm: opt.momentum_norm(),
                    theta_norm: opt.theta().norm(),
                })?;
            }
        }
    }

    let final_f = if failure.is_some() {
        f64::NAN
    } else {
        obj.value(opt.theta(), None).unwrap_or(f64::NAN)
    };
    if final_f.is_finite() {
        best_f = best_f.min(final_f);
    }
    Ok(RunOutcome {
        log,
        steps: opt.steps_taken(),
        final_f,
        best_f,
        terminated: opt.is_terminated(),
        failure,
    })
}
