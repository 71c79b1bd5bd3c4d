//! Objective functions: synthetic landscapes, the isotropic basin used by the
//! theory checks, and a minibatch logistic-regression problem.

mod ackley;
mod logistic;
mod quadratic;
mod zakharov;

pub use ackley::{ackley_regularized, AckleyRegularized};
pub use logistic::{logistic_objective, SyntheticClassification};
pub use quadratic::{quadratic_basin, QuadraticBasin};
pub use zakharov::{zakharov, Zakharov};

use crate::error::Result;
use crate::objective::{BatchToken, Objective};
use crate::vector::ParamVector;

/// Central finite-difference gradient with step `h`.
pub fn finite_difference_gradient(
    obj: &dyn Objective,
    theta: &ParamVector,
    batch: Option<BatchToken>,
    h: f64,
) -> Result<Vec<f64>> {
    let mut probe = theta.as_slice().to_vec();
    let mut grad = Vec::with_capacity(probe.len());
    for i in 0..probe.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = obj.value(&ParamVector::new(probe.clone())?, batch)?;
        probe[i] = orig - h;
        let down = obj.value(&ParamVector::new(probe.clone())?, batch)?;
        probe[i] = orig;
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Largest component-wise deviation between two gradients, relative to
/// `max(|g|_inf, 1)`.
pub fn gradient_mismatch(analytic: &[f64], numeric: &[f64]) -> f64 {
    let scale = analytic
        .iter()
        .chain(numeric)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}
