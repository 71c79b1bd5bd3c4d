//! Objective-function contract shared by every optimizer.

use crate::error::{Error, Result};
use crate::vector::ParamVector;

/// Opaque minibatch selector.
///
/// Optimizers pass it through untouched; only the objective interprets it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BatchToken(pub u64);

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveEvaluation {
    pub value: f64,
    pub gradient: ParamVector,
}

impl ObjectiveEvaluation {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.gradient.is_finite()
    }
}

/// A differentiable objective `F(theta)`.
///
/// For a fixed `batch` (including `None`) `evaluate` must be a pure function of
/// `theta`. Different tokens may select different data and therefore change
/// the function.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;

    fn evaluate(
        &self,
        theta: &ParamVector,
        batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation>;

    fn value(&self, theta: &ParamVector, batch: Option<BatchToken>) -> Result<f64> {
        self.evaluate(theta, batch).map(|e| e.value)
    }

    fn check_input(&self, theta: &ParamVector) -> Result<()> {
        if theta.len() != self.dimension() {
            return Err(Error::Dimension {
                expected: self.dimension(),
                got: theta.len(),
            });
        }
        Ok(())
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        (**self).evaluate(theta, batch)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        (**self).evaluate(theta, batch)
    }
}

/// Objective built from a closure returning `(value, gradient)`.
pub struct FnObjective<F> {
    dimension: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Sync,
{
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        _batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        self.check_input(theta)?;
        let (value, gradient) = (self.f)(theta.as_slice());
        if gradient.len() != self.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                got: gradient.len(),
            });
        }
        Ok(ObjectiveEvaluation {
            value,
            gradient: ParamVector::from_vec_unchecked(gradient),
        })
    }
}
