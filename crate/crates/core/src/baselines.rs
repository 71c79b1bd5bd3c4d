//! Reference optimizers: gradient descent with momentum in the
//! friction form, and Adam / AdamW.

use serde::{Deserialize, Serialize};

use crate::driver::{Optimizer, StepInfo};
use crate::error::{Error, Result};
use crate::objective::{BatchToken, Objective};
use crate::vector::ParamVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GdmHyperParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GdmHyperParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Parameter(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::Parameter(format!(
                "beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamHyperParams {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub wd: f64,
    /// `true` applies the decay directly to the weights (AdamW).
    pub decoupled_wd: bool,
}

impl AdamHyperParams {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            wd: 0.0,
            decoupled_wd: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |b: f64| (0.0..1.0).contains(&b);
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Parameter(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !in_unit(self.beta1) || !in_unit(self.beta2) {
            return Err(Error::Parameter(
                "beta1 and beta2 must lie in [0, 1)".into(),
            ));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Parameter("epsilon must be positive".into()));
        }
        if !(self.wd >= 0.0) {
            return Err(Error::Parameter("wd must be non-negative".into()));
        }
        Ok(())
    }
}

fn check_lengths(n: usize, vs: &[&ParamVector]) -> Result<()> {
    vs.iter().try_for_each(|v| v.check_len(n))
}

/// `Pi' = Pi - (1 - beta) Pi - grad`, `theta' = theta + alpha Pi'`.
pub fn gdm_step(
    theta: &ParamVector,
    pi: &ParamVector,
    grad: &ParamVector,
    hp: &GdmHyperParams,
) -> Result<(ParamVector, ParamVector)> {
    check_lengths(theta.len(), &[pi, grad])?;
    let friction = 1.0 - hp.beta;
    let pi_next: Vec<f64> = pi
        .iter()
        .zip(grad.iter())
        .map(|(p, g)| p - friction * p - g)
        .collect();
    let theta_next: Vec<f64> = theta
        .iter()
        .zip(&pi_next)
        .map(|(t, p)| t + hp.alpha * p)
        .collect();
    Ok((
        ParamVector::from_vec_unchecked(theta_next),
        ParamVector::from_vec_unchecked(pi_next),
    ))
}

/// Bias-corrected Adam step; `t` counts from 1.
pub fn adam_step(
    theta: &ParamVector,
    m: &ParamVector,
    v: &ParamVector,
    grad: &ParamVector,
    t: u64,
    hp: &AdamHyperParams,
) -> Result<(ParamVector, ParamVector, ParamVector)> {
    check_lengths(theta.len(), &[m, v, grad])?;
    if t == 0 {
        return Err(Error::Parameter("adam step index starts at 1".into()));
    }
    let t = t.min(i32::MAX as u64) as i32;
    let correction1 = 1.0 - hp.beta1.powi(t);
    let correction2 = 1.0 - hp.beta2.powi(t);
    let n = theta.len();
    let (mut theta_next, mut m_next, mut v_next) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for i in 0..n {
        let mut g = grad[i];
        let mut th = theta[i];
        if hp.decoupled_wd {
            th *= 1.0 - hp.alpha * hp.wd;
        } else if hp.wd != 0.0 {
            g += hp.wd * theta[i];
        }
        let mi = hp.beta1 * m[i] + (1.0 - hp.beta1) * g;
        let vi = hp.beta2 * v[i] + (1.0 - hp.beta2) * g * g;
        let m_hat = mi / correction1;
        let v_hat = vi / correction2;
        theta_next.push(th - hp.alpha * m_hat / (v_hat.sqrt() + hp.epsilon));
        m_next.push(mi);
        v_next.push(vi);
    }
    Ok((
        ParamVector::from_vec_unchecked(theta_next),
        ParamVector::from_vec_unchecked(m_next),
        ParamVector::from_vec_unchecked(v_next),
    ))
}

fn evaluate_checked(
    obj: &dyn Objective,
    theta: &ParamVector,
    batch: Option<BatchToken>,
    step: u64,
) -> Result<crate::objective::ObjectiveEvaluation> {
    let eval = obj.evaluate(theta, batch)?;
    if !eval.is_finite() {
        return Err(Error::NonFinite { step });
    }
    Ok(eval)
}

/// Gradient descent with momentum, starting from zero momentum.
#[derive(Debug, Clone)]
pub struct Gdm {
    hp: GdmHyperParams,
    theta: ParamVector,
    pi: ParamVector,
    step: u64,
}

impl Gdm {
    pub fn new(theta0: ParamVector, hp: GdmHyperParams) -> Result<Self> {
        hp.validate()?;
        let pi = ParamVector::zeros(theta0.len())?;
        Ok(Self {
            hp,
            theta: theta0,
            pi,
            step: 0,
        })
    }
}

impl Optimizer for Gdm {
    fn name(&self) -> &'static str {
        "gdm"
    }

    fn step(&mut self, obj: &dyn Objective, batch: Option<BatchToken>) -> Result<StepInfo> {
        let eval = evaluate_checked(obj, &self.theta, batch, self.step + 1)?;
        let (theta, pi) = gdm_step(&self.theta, &self.pi, &eval.gradient, &self.hp)?;
        self.theta = theta;
        self.pi = pi;
        self.step += 1;
        Ok(StepInfo { value: eval.value })
    }

    fn theta(&self) -> &ParamVector {
        &self.theta
    }

    fn momentum_norm(&self) -> f64 {
        self.pi.norm()
    }

    fn steps_taken(&self) -> u64 {
        self.step
    }
}

#[derive(Debug, Clone)]
pub struct Adam {
    hp: AdamHyperParams,
    theta: ParamVector,
    m: ParamVector,
    v: ParamVector,
    step: u64,
}

impl Adam {
    pub fn new(theta0: ParamVector, hp: AdamHyperParams) -> Result<Self> {
        hp.validate()?;
        let zeros = ParamVector::zeros(theta0.len())?;
        Ok(Self {
            hp,
            theta: theta0,
            m: zeros.clone(),
            v: zeros,
            step: 0,
        })
    }
}

impl Optimizer for Adam {
    fn name(&self) -> &'static str {
        "adam"
    }

    fn step(&mut self, obj: &dyn Objective, batch: Option<BatchToken>) -> Result<StepInfo> {
        let t = self.step + 1;
        let eval = evaluate_checked(obj, &self.theta, batch, t)?;
        let (theta, m, v) = adam_step(&self.theta, &self.m, &self.v, &eval.gradient, t, &self.hp)?;
        self.theta = theta;
        self.m = m;
        self.v = v;
        self.step = t;
        Ok(StepInfo { value: eval.value })
    }

    fn theta(&self) -> &ParamVector {
        &self.theta
    }

    /// Norm of the first-moment estimate.
    fn momentum_norm(&self) -> f64 {
        self.m.norm()
    }

    fn steps_taken(&self) -> u64 {
        self.step
    }
}
