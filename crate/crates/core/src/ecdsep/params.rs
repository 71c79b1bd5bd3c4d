use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperparameters of the ECDSep update.
///
/// `eta` has no default; build with [`EcdHyperParams::new`] and override
/// fields with struct-update syntax.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdHyperParams {
    /// Step size.
    pub dt: f64,
    /// Concentration exponent, at least 1.
    pub eta: f64,
    /// Chaos strength of the per-step momentum rotation.
    pub nu: f64,
    /// Loss offset.
    pub f0: f64,
    /// Squared magnitude of the initial momentum.
    pub delta_e: f64,
    /// Kinetic regularization switch: 1 bounds the explored region, 0 does not.
    pub s: u8,
    /// Energy-conserving weight decay coefficient.
    pub wd: f64,
    /// Rescale the momentum back onto the initial energy surface every step.
    pub conserve_energy: bool,
    /// Projection tolerance on `|Pi^2 - pi_c^2|`.
    pub eps1: f64,
    /// Potential threshold: loop exit, or F0 shift trigger when self-tuning.
    pub eps2: f64,
    pub self_tune_f0: bool,
    /// Multiplier on the potential in the self-tuning F0 shift.
    pub f0_shift_factor: f64,
}

impl EcdHyperParams {
    pub const DEFAULT_DT: f64 = 0.4;
    pub const DEFAULT_NU: f64 = 1e-5;
    pub const DEFAULT_EPS1: f64 = 1e-10;
    pub const DEFAULT_EPS2: f64 = 1e-40;
    pub const DEFAULT_F0_SHIFT_FACTOR: f64 = 5.0;

    /// Regularized (`s = 1`) defaults with the given concentration exponent.
    pub fn new(eta: f64) -> Self {
        Self {
            dt: Self::DEFAULT_DT,
            eta,
            nu: Self::DEFAULT_NU,
            f0: 0.0,
            delta_e: 0.0,
            s: 1,
            wd: 0.0,
            conserve_energy: true,
            eps1: Self::DEFAULT_EPS1,
            eps2: Self::DEFAULT_EPS2,
            self_tune_f0: false,
            f0_shift_factor: Self::DEFAULT_F0_SHIFT_FACTOR,
        }
    }

    /// Unregularized (`s = 0`) defaults, which start with unit kinetic energy.
    pub fn unregularized(eta: f64) -> Self {
        Self {
            s: 0,
            delta_e: 1.0,
            ..Self::new(eta)
        }
    }

    pub fn s_value(&self) -> f64 {
        f64::from(self.s)
    }

    pub fn eta_is_integer(&self) -> bool {
        self.eta.fract() == 0.0 && self.eta.abs() <= f64::from(i32::MAX)
    }

    pub fn eta_is_odd_integer(&self) -> bool {
        self.eta_is_integer() && (self.eta as i64) % 2 != 0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive and finite, got {}", self.dt));
        }
        if !(self.eta >= 1.0 && self.eta.is_finite()) {
            return bad(format!("eta must be >= 1, got {}", self.eta));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return bad(format!("nu must be >= 0, got {}", self.nu));
        }
        if !self.f0.is_finite() {
            return bad("f0 must be finite".into());
        }
        if !(self.delta_e >= 0.0 && self.delta_e.is_finite()) {
            return bad(format!("delta_e must be >= 0, got {}", self.delta_e));
        }
        if self.s > 1 {
            return bad(format!("s must be 0 or 1, got {}", self.s));
        }
        if self.s == 0 && self.delta_e == 0.0 {
            return bad("s = 0 requires delta_e > 0 (zero energy surface otherwise)".into());
        }
        if !(self.wd >= 0.0 && self.wd.is_finite()) {
            return bad(format!("wd must be >= 0, got {}", self.wd));
        }
        if !(self.eps1 >= 0.0 && self.eps2.is_finite() && self.eps1.is_finite()) {
            return bad("eps1 and eps2 must be finite, eps1 >= 0".into());
        }
        if self.self_tune_f0 {
            if !self.eta_is_odd_integer() {
                return bad(format!(
                    "self-tuning F0 requires an odd integer eta, got {}",
                    self.eta
                ));
            }
            if !(self.f0_shift_factor > 0.0 && self.f0_shift_factor.is_finite()) {
                return bad("f0_shift_factor must be positive".into());
            }
        }
        Ok(())
    }
}
