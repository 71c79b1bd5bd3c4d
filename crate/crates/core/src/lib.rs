pub mod baselines;
pub mod benchmarks;
pub mod driver;
pub mod ecdsep;
pub mod error;
pub mod harness;
pub mod objective;
pub mod rng;
pub mod theory;
pub mod trajectory;
pub mod vector;

pub use baselines::{Adam, AdamHyperParams, Gdm, GdmHyperParams};
pub use driver::{drive, BatchSchedule, Optimizer, RunOptions, RunOutcome, StepInfo};
pub use ecdsep::{EcdHyperParams, EcdState, Ecdsep};
pub use error::{Error, Result};
pub use objective::{BatchToken, FnObjective, Objective, ObjectiveEvaluation};
pub use rng::RngStream;
pub use trajectory::{Num, TrajectoryLog, TrajectoryRecord};
pub use vector::{dot, norm, ParamVector};
