use crate::error::Result;
use crate::objective::{BatchToken, Objective, ObjectiveEvaluation};
use crate::vector::ParamVector;

/// Zakharov function with 1-based index weights:
/// `F = sum theta_i^2 + S^2 + S^4`, `S = 1/2 sum i theta_i`.
pub fn zakharov(theta: &ParamVector) -> ObjectiveEvaluation {
    let s: f64 = 0.5
        * theta
            .iter()
            .enumerate()
            .map(|(i, t)| (i + 1) as f64 * t)
            .sum::<f64>();
    let s2 = s * s;
    let value = theta.norm_sq() + s2 + s2 * s2;
    let outer = 2.0 * s + 4.0 * s2 * s;
    let gradient = theta
        .iter()
        .enumerate()
        .map(|(j, t)| 2.0 * t + outer * 0.5 * (j + 1) as f64)
        .collect();
    ObjectiveEvaluation {
        value,
        gradient: ParamVector::from_vec_unchecked(gradient),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zakharov {
    pub n: usize,
}

impl Objective for Zakharov {
    fn dimension(&self) -> usize {
        self.n
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        _batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        self.check_input(theta)?;
        Ok(zakharov(theta))
    }
}
