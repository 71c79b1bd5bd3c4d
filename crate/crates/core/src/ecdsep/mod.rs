//! The ECDSep optimizer.
//!
//! Each step evaluates the objective, optionally projects the momentum back
//! onto the initial energy surface, applies the first-order symplectic
//! momentum and position updates of the separable Hamiltonian
//! `log(Pi^2 + s) + log V`, and finally rotates the momentum by a random
//! norm-preserving kick. With `self_tune_f0` the loop lowers the effective
//! offset `F0 + dF0` whenever the potential would become non-positive.

mod params;
mod state;

pub use params::EcdHyperParams;
pub use state::{EcdState, Termination};

use log::warn;

use crate::driver::{drive, Optimizer, RunOptions, StepInfo};
use crate::error::{Error, Result};
use crate::objective::{BatchToken, Objective};
use crate::rng::RngStream;
use crate::trajectory::TrajectoryLog;
use crate::vector::ParamVector;

/// Result of the energy-projection block for one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionOutcome {
    /// `conserve_energy` is off.
    Disabled,
    /// The momentum was rescaled onto the energy surface.
    Rescaled,
    /// `|Pi^2 - pi_c^2| <= eps1`; nothing to do.
    WithinTolerance,
    /// `pi_c^2 <= 0`: the surface is unreachable at this point.
    NegativeTarget,
    /// The potential is not positive.
    NonPositivePotential,
    /// `Pi = 0` while `pi_c^2 > 0`; no direction to rescale.
    ZeroMomentum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    /// Objective value at the start of the step.
    pub value: f64,
    /// Effective potential at the start of the step.
    pub potential: f64,
    pub projection: ProjectionOutcome,
    /// `Pi^2` right after the projection block (before the momentum update).
    pub pi_sq_after_projection: f64,
    /// The self-tuning branch fired and shifted F0 instead of moving.
    pub shifted_f0: bool,
}

/// `base^eta`, keeping the sign for odd integer exponents.
fn signed_power(base: f64, eta: f64) -> Result<f64> {
    if eta.fract() == 0.0 && eta.abs() <= f64::from(i32::MAX) {
        Ok(base.powi(eta as i32))
    } else if base < 0.0 {
        Err(Error::Domain(format!(
            "negative potential base {base} with non-integer eta {eta}"
        )))
    } else {
        Ok(base.powf(eta))
    }
}

fn potential_base(theta: &ParamVector, value: f64, hp: &EcdHyperParams, delta_f0: f64) -> f64 {
    let decay = if hp.wd != 0.0 {
        0.5 * hp.wd * theta.norm_sq()
    } else {
        0.0
    };
    value - (hp.f0 + delta_f0) + decay
}

/// `(F - (F0 + dF0) + wd/2 |theta|^2)^eta`.
///
/// Negative for odd integer `eta` below the offset; a domain error for a
/// negative base with non-integer `eta`.
pub fn effective_potential(
    theta: &ParamVector,
    obj_value: f64,
    hp: &EcdHyperParams,
    delta_f0: f64,
) -> Result<f64> {
    signed_power(potential_base(theta, obj_value, hp, delta_f0), hp.eta)
}

/// Energy in the conserved convention, `V * (Pi^2 + s)`, at the given state.
pub fn measured_energy(state: &EcdState, obj_value: f64, hp: &EcdHyperParams) -> f64 {
    match effective_potential(&state.theta, obj_value, hp, state.delta_f0) {
        Ok(v) => v * (state.pi.norm_sq() + hp.s_value()),
        Err(_) => f64::NAN,
    }
}

/// Sets the energy and the initial momentum along minus the gradient.
pub fn init(obj: &dyn Objective, theta0: ParamVector, hp: &EcdHyperParams) -> Result<EcdState> {
    hp.validate()?;
    obj.check_input(&theta0)?;
    let eval = obj.evaluate(&theta0, None)?;
    if !eval.is_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    let potential = effective_potential(&theta0, eval.value, hp, 0.0)?;
    let energy = potential * (hp.delta_e + hp.s_value());
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::Init(format!(
            "energy must be positive and finite, got {energy} (is F(theta0) above F0?)"
        )));
    }

    let n = theta0.len();
    let grad_norm = eval.gradient.norm();
    let pi = if hp.delta_e == 0.0 {
        ParamVector::from_vec_unchecked(vec![0.0; n])
    } else if grad_norm > 0.0 {
        let scale = -hp.delta_e.sqrt() / grad_norm;
        ParamVector::from_vec_unchecked(eval.gradient.iter().map(|g| g * scale).collect())
    } else {
        warn!("zero gradient at initialization; using the uniform direction for the momentum");
        ParamVector::from_vec_unchecked(vec![(hp.delta_e / n as f64).sqrt(); n])
    };

    Ok(EcdState {
        theta: theta0,
        pi,
        energy,
        delta_f0: 0.0,
        step: 0,
        termination: None,
    })
}

/// Rescales the momentum so that `V * (Pi^2 + s)` equals the stored energy,
/// when that target is reachable.
pub fn project_energy(
    state: &mut EcdState,
    potential: f64,
    hp: &EcdHyperParams,
) -> ProjectionOutcome {
    if !hp.conserve_energy {
        return ProjectionOutcome::Disabled;
    }
    if !(potential > 0.0) {
        return ProjectionOutcome::NonPositivePotential;
    }
    let target = state.energy / potential - hp.s_value();
    let pi_sq = state.pi.norm_sq();
    if !(target > 0.0) {
        return ProjectionOutcome::NegativeTarget;
    }
    if (pi_sq - target).abs() <= hp.eps1 {
        return ProjectionOutcome::WithinTolerance;
    }
    if pi_sq == 0.0 {
        warn!("energy projection skipped: zero momentum has no direction");
        return ProjectionOutcome::ZeroMomentum;
    }
    state.pi.scale_in_place((target / pi_sq).sqrt());
    ProjectionOutcome::Rescaled
}

/// Random norm-preserving rotation `|Pi| (Pi/|Pi| + nu z) / |Pi/|Pi| + nu z|`.
pub fn rotate_momentum(pi: &ParamVector, nu: f64, rng: &mut RngStream) -> ParamVector {
    let mut out = pi.clone();
    rotate_momentum_in_place(&mut out, nu, rng);
    out
}

fn rotate_momentum_in_place(pi: &mut ParamVector, nu: f64, rng: &mut RngStream) {
    let magnitude = pi.norm();
    if nu == 0.0 || magnitude == 0.0 {
        return;
    }
    let n = pi.len();
    let mut direction = vec![0.0; n];
    loop {
        rng.fill_standard_normal(&mut direction);
        for (d, p) in direction.iter_mut().zip(pi.iter()) {
            *d = p / magnitude + nu * *d;
        }
        let len = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        if len > 0.0 {
            let scale = magnitude / len;
            for (p, d) in pi.as_mut_slice().iter_mut().zip(&direction) {
                *p = scale * d;
            }
            return;
        }
    }
}

/// One iteration of the ECDSep loop.
pub fn step(
    state: &mut EcdState,
    obj: &dyn Objective,
    hp: &EcdHyperParams,
    rng: &mut RngStream,
    batch: Option<BatchToken>,
) -> Result<StepReport> {
    if state.is_terminated() {
        return Err(Error::Parameter("step called on a terminated state".into()));
    }
    let step_index = state.step + 1;
    let eval = obj.evaluate(&state.theta, batch)?;
    if !eval.is_finite() {
        return Err(Error::NonFinite { step: step_index });
    }
    let base = potential_base(&state.theta, eval.value, hp, state.delta_f0);
    let mut report = StepReport {
        value: eval.value,
        potential: f64::NAN,
        projection: ProjectionOutcome::Disabled,
        pi_sq_after_projection: state.pi.norm_sq(),
        shifted_f0: false,
    };

    if hp.self_tune_f0 {
        let potential = signed_power(base, hp.eta)?;
        report.potential = potential;
        if potential < hp.eps2 {
            state.delta_f0 += hp.f0_shift_factor * potential;
            state.step = step_index;
            report.shifted_f0 = true;
            return Ok(report);
        }
    } else if base <= 0.0 {
        state.termination = Some(if base == 0.0 {
            Termination::ReachedF0
        } else {
            Termination::CrossedF0
        });
        report.potential = signed_power(base, hp.eta).unwrap_or(f64::NAN);
        return Ok(report);
    }
    let potential = signed_power(base, hp.eta)?;
    report.potential = potential;

    report.projection = project_energy(state, potential, hp);
    report.pi_sq_after_projection = state.pi.norm_sq();

    // V^(1/eta) == base for the positive bases that reach this point.
    let kick = -hp.dt * hp.eta / base;
    state.pi.axpy_in_place(kick, eval.gradient.as_slice());
    if hp.wd != 0.0 {
        let decay: Vec<f64> = state.theta.iter().map(|t| hp.wd * t).collect();
        state.pi.axpy_in_place(kick, &decay);
    }

    let drift = 2.0 * hp.dt / (state.pi.norm_sq() + hp.s_value());
    let pi_values = state.pi.as_slice().to_vec();
    state.theta.axpy_in_place(drift, &pi_values);

    if !(state.theta.is_finite() && state.pi.is_finite()) {
        return Err(Error::NonFinite { step: step_index });
    }

    if hp.nu > 0.0 {
        rotate_momentum_in_place(&mut state.pi, hp.nu, rng);
    }
    state.step = step_index;
    if !hp.self_tune_f0 && potential < hp.eps2 {
        state.termination = Some(Termination::PotentialBelowThreshold);
    }
    Ok(report)
}

/// ECDSep bundled with its hyperparameters and random stream.
#[derive(Debug, Clone)]
pub struct Ecdsep {
    hp: EcdHyperParams,
    state: EcdState,
    rng: RngStream,
}

impl Ecdsep {
    pub fn new(
        obj: &dyn Objective,
        theta0: ParamVector,
        hp: EcdHyperParams,
        rng: RngStream,
    ) -> Result<Self> {
        let state = init(obj, theta0, &hp)?;
        Ok(Self { hp, state, rng })
    }

    /// Resumes from a checkpointed state.
    pub fn from_state(hp: EcdHyperParams, state: EcdState, rng: RngStream) -> Result<Self> {
        hp.validate()?;
        state.pi.check_len(state.theta.len())?;
        Ok(Self { hp, state, rng })
    }

    pub fn hyper_params(&self) -> &EcdHyperParams {
        &self.hp
    }

    pub fn state(&self) -> &EcdState {
        &self.state
    }

    pub fn into_state(self) -> EcdState {
        self.state
    }

    pub fn step_report(
        &mut self,
        obj: &dyn Objective,
        batch: Option<BatchToken>,
    ) -> Result<StepReport> {
        step(&mut self.state, obj, &self.hp, &mut self.rng, batch)
    }
}

impl Optimizer for Ecdsep {
    fn name(&self) -> &'static str {
        "ecdsep"
    }

    fn step(&mut self, obj: &dyn Objective, batch: Option<BatchToken>) -> Result<StepInfo> {
        self.step_report(obj, batch)
            .map(|r| StepInfo { value: r.value })
    }

    fn theta(&self) -> &ParamVector {
        &self.state.theta
    }

    fn momentum_norm(&self) -> f64 {
        self.state.pi.norm()
    }

    fn measured_energy(&self, value: f64) -> f64 {
        measured_energy(&self.state, value, &self.hp)
    }

    fn is_terminated(&self) -> bool {
        self.state.is_terminated()
    }

    fn steps_taken(&self) -> u64 {
        self.state.step
    }
}

/// Runs ECDSep from `theta0` until termination or `opts.max_steps`.
pub fn run(
    obj: &dyn Objective,
    theta0: ParamVector,
    hp: &EcdHyperParams,
    opts: &RunOptions,
    rng: RngStream,
) -> Result<(EcdState, TrajectoryLog)> {
    opts.validate()?;
    let mut opt = Ecdsep::new(obj, theta0, hp.clone(), rng)?;
    let outcome = drive(&mut opt, obj, opts, |_, _| {})?;
    if let Some(err) = outcome.failure {
        return Err(err);
    }
    Ok((opt.into_state(), outcome.log))
}

#[cfg(test)]
mod tests;
