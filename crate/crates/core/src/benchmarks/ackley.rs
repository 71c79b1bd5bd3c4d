use std::f64::consts::{E, PI};

use crate::error::Result;
use crate::objective::{BatchToken, Objective, ObjectiveEvaluation};
use crate::vector::ParamVector;

const REG: f64 = 1e-8;

/// Two-dimensional Ackley function plus a `1e-8 |theta|^8` confining term.
///
/// The gradient at the exact origin is defined as zero.
pub fn ackley_regularized(theta: &ParamVector) -> Result<ObjectiveEvaluation> {
    theta.check_len(2)?;
    let (x, y) = (theta[0], theta[1]);
    let r2 = x * x + y * y;
    let r = (0.5 * r2).sqrt();
    let exp_radial = (-0.2 * r).exp();
    let exp_cos = (0.5 * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos())).exp();
    let value = -20.0 * exp_radial - exp_cos + E + 20.0 + REG * r2.powi(4);

    let grad_component = |t: f64| {
        let radial = if r > 0.0 {
            4.0 * exp_radial * 0.5 * t / r
        } else {
            0.0
        };
        radial + PI * exp_cos * (2.0 * PI * t).sin() + 8.0 * REG * r2.powi(3) * t
    };
    Ok(ObjectiveEvaluation {
        value,
        gradient: ParamVector::from_vec_unchecked(vec![grad_component(x), grad_component(y)]),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AckleyRegularized;

impl Objective for AckleyRegularized {
    fn dimension(&self) -> usize {
        2
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        _batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        ackley_regularized(theta)
    }
}
