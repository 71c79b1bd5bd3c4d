use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{BatchToken, Objective, ObjectiveEvaluation};
use crate::vector::ParamVector;

/// Isotropic basin `F = f2 |theta|^2 + f_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticBasin {
    pub n: usize,
    pub f2: f64,
    pub f_min: f64,
}

impl QuadraticBasin {
    pub fn new(n: usize, f2: f64, f_min: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        if !(f2 > 0.0 && f2.is_finite()) || !f_min.is_finite() {
            return Err(Error::Parameter(format!(
                "basin needs f2 > 0 and finite f_min, got f2 = {f2}, f_min = {f_min}"
            )));
        }
        Ok(Self { n, f2, f_min })
    }
}

pub fn quadratic_basin(basin: &QuadraticBasin, theta: &ParamVector) -> ObjectiveEvaluation {
    ObjectiveEvaluation {
        value: basin.f2 * theta.norm_sq() + basin.f_min,
        gradient: ParamVector::from_vec_unchecked(
            theta.iter().map(|t| 2.0 * basin.f2 * t).collect(),
        ),
    }
}

impl Objective for QuadraticBasin {
    fn dimension(&self) -> usize {
        self.n
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        _batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        self.check_input(theta)?;
        Ok(quadratic_basin(self, theta))
    }
}
