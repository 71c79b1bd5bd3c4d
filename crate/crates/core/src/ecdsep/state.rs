use serde::{Deserialize, Serialize};

use crate::vector::ParamVector;

/// Why an ECDSep trajectory stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// The potential fell below `eps2` after an update.
    PotentialBelowThreshold,
    /// `F - F0` reached exactly zero, leaving the force undefined.
    ReachedF0,
    /// The objective dropped below the offset `F0` with self-tuning disabled.
    CrossedF0,
}

/// Live optimizer state. Serializes to a flat record for checkpointing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdState {
    pub(crate) theta: ParamVector,
    pub(crate) pi: ParamVector,
    pub(crate) energy: f64,
    pub(crate) delta_f0: f64,
    pub(crate) step: u64,
    pub(crate) termination: Option<Termination>,
}

impl EcdState {
    pub fn theta(&self) -> &ParamVector {
        &self.theta
    }

    pub fn pi(&self) -> &ParamVector {
        &self.pi
    }

    /// Conserved energy fixed at initialization.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn delta_f0(&self) -> f64 {
        self.delta_f0
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn is_terminated(&self) -> bool {
        self.termination.is_some()
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    pub fn dimension(&self) -> usize {
        self.theta.len()
    }
}
