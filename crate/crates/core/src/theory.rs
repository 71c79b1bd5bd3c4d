//! Closed-form predictions for the continuum dynamics: microcanonical
//! measure, concentration radius and speed in an isotropic quadratic basin,
//! the bounce-angle law of the momentum rotation, and suggested chaos
//! strengths.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Isotropic basin `F = F2 |theta|^2 + F_min` together with the optimizer
/// settings the predictions depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinSpec {
    pub n: usize,
    pub f2: f64,
    pub f_min: f64,
    pub f0: f64,
    pub eta: f64,
    /// Conserved energy.
    pub energy: f64,
    /// Objective value at initialization.
    pub f_init: f64,
}

impl BasinSpec {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain(format!("basin needs n >= 2, got {}", self.n)));
        }
        if !(self.f2 > 0.0) {
            return Err(Error::Domain(format!(
                "curvature must be positive, got {}",
                self.f2
            )));
        }
        if !(self.eta >= 1.0) {
            return Err(Error::Domain(format!("eta must be >= 1, got {}", self.eta)));
        }
        if self.f_min < self.f0 {
            return Err(Error::Domain(format!(
                "F_min = {} lies below F0 = {}",
                self.f_min, self.f0
            )));
        }
        Ok(())
    }

    fn gap(&self) -> f64 {
        self.f_min - self.f0
    }
}

/// Natural log of [`measure_density`]; finite for large `n`.
pub fn log_measure_density(potential: f64, n: usize, energy: f64) -> Result<f64> {
    if !(potential > 0.0) {
        return Err(Error::Domain(format!(
            "potential must be positive, got {potential}"
        )));
    }
    if !(energy > 0.0) {
        return Err(Error::Domain(format!(
            "energy must be positive, got {energy}"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    let half_n = n as f64 / 2.0;
    Ok((half_n - 1.0) * energy.ln() + half_n * PI.ln()
        - libm::lgamma(half_n)
        - half_n * potential.ln())
}

/// Measure density `E^((n-2)/2) pi^(n/2) / Gamma(n/2) V^(-n/2)`.
pub fn measure_density(potential: f64, n: usize, energy: f64) -> Result<f64> {
    log_measure_density(potential, n, energy).map(f64::exp)
}

/// Squared radius where the measure peaks:
/// `(F_min - F0)(n - 1) / (F2 (1 + n (eta - 1)))`.
pub fn concentration_radius_sq(b: &BasinSpec) -> Result<f64> {
    b.validate()?;
    let n = b.n as f64;
    Ok(b.gap() * (n - 1.0) / (b.f2 * (1.0 + n * (b.eta - 1.0))))
}

/// Continuum speed at the concentration radius:
/// `sqrt(E) ((F_min - F0) n eta / (1 + n (eta - 1)))^(eta / 2)`.
pub fn speed_at_radius(b: &BasinSpec) -> Result<f64> {
    b.validate()?;
    if !(b.energy > 0.0) {
        return Err(Error::Domain(format!(
            "energy must be positive, got {}",
            b.energy
        )));
    }
    let n = b.n as f64;
    let base = b.gap() * n * b.eta / (1.0 + n * (b.eta - 1.0));
    Ok(b.energy.sqrt() * base.powf(b.eta / 2.0))
}

/// `cos` of the bounce angle for one draw `z`, with the momentum along `e_1`.
fn bounce_cosine(nu: f64, z: &[f64]) -> f64 {
    let along = z[0];
    let z_sq: f64 = z.iter().map(|v| v * v).sum();
    (1.0 + nu * along) / (1.0 + 2.0 * nu * along + nu * nu * z_sq).sqrt()
}

fn bounce_samples(
    nu: f64,
    n: usize,
    rng: &mut RngStream,
    samples: usize,
    mut each: impl FnMut(f64),
) -> Result<()> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    let mut z = vec![0.0; n];
    for _ in 0..samples {
        rng.fill_standard_normal(&mut z);
        each(bounce_cosine(nu, &z));
    }
    Ok(())
}

/// Monte-Carlo estimate of the expected bounce cosine for chaos strength `nu`
/// in dimension `n`.
pub fn expected_bounce_cosine(
    nu: f64,
    n: usize,
    rng: &mut RngStream,
    samples: usize,
) -> Result<f64> {
    let mut total = 0.0;
    bounce_samples(nu, n, rng, samples, |c| total += c)?;
    Ok(total / samples as f64)
}

/// Monte-Carlo estimate of the mean bounce angle in radians.
pub fn mean_bounce_angle(nu: f64, n: usize, rng: &mut RngStream, samples: usize) -> Result<f64> {
    let mut total = 0.0;
    bounce_samples(nu, n, rng, samples, |c| total += c.clamp(-1.0, 1.0).acos())?;
    Ok(total / samples as f64)
}

/// Suggested chaos strength for `eta > 1`, `F0 = 0`, `s = 1`.
pub fn nu_star_concentrating(b: &BasinSpec, dt: f64) -> Result<f64> {
    if !(b.eta > 1.0) {
        return Err(Error::Domain(format!(
            "this suggestion divides by eta - 1; got eta = {}",
            b.eta
        )));
    }
    if b.f0 != 0.0 {
        return Err(Error::Domain("this suggestion assumes F0 = 0".into()));
    }
    if !(b.f_min > 0.0 && b.f_init > 0.0 && b.f2 > 0.0 && b.n > 0) {
        return Err(Error::Domain("needs F_min, F_init, F2 > 0".into()));
    }
    let eta = b.eta;
    let n = b.n as f64;
    Ok(dt / n.sqrt()
        * (b.f2 / b.f_min).sqrt()
        * (b.f_min / b.f_init).powf(eta / 2.0)
        * (eta / (eta - 1.0)).powf(eta / 2.0)
        * (eta - 1.0).sqrt())
}

/// Suggested chaos strength for `eta = 1`: `dt / sqrt(n) sqrt(F2 / (F_init - F0))`.
pub fn nu_star_linear(b: &BasinSpec, dt: f64) -> Result<f64> {
    let gap = b.f_init - b.f0;
    if !(gap > 0.0 && b.f2 > 0.0 && b.n > 0) {
        return Err(Error::Domain("needs F_init > F0 and F2 > 0".into()));
    }
    Ok(dt / (b.n as f64).sqrt() * (b.f2 / gap).sqrt())
}

/// Chaos-strength suggestion, dispatching on `eta`.
pub fn nu_star(b: &BasinSpec, dt: f64) -> Result<f64> {
    if b.eta == 1.0 {
        nu_star_linear(b, dt)
    } else {
        nu_star_concentrating(b, dt)
    }
}
