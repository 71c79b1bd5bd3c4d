use std::fmt::Write as _;

use serde::Serialize;

use crate::benchmarks::QuadraticBasin;
use crate::ecdsep::{EcdHyperParams, Ecdsep};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::rng::RngStream;
use crate::theory::{self, BasinSpec};
use crate::trajectory::Num;
use crate::vector::ParamVector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Histogram of `|theta|` along a trajectory next to the closed-form
/// predictions for the basin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    #[serde(skip)]
    pub histogram: Vec<HistogramBin>,
    pub samples: u64,
    pub burn_in: u64,
    pub energy: f64,
    /// Centre of the most populated radius bin.
    pub mode_radius: f64,
    /// `f2 * mode_radius^2 + f_min`.
    pub empirical_mode_f: f64,
    pub median_radius: f64,
    pub mean_f: f64,
    pub predicted_theta_star_sq: f64,
    /// `f2 * theta_star^2 + f_min`.
    pub predicted_f: f64,
    pub mode_f_rel_deviation: f64,
    /// Mean `|theta_{t+1} - theta_t| / dt` over samples in the mode bin.
    pub empirical_speed_at_mode: f64,
    pub predicted_speed: f64,
    pub speed_rel_deviation: f64,
}

impl ConcentrationReport {
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for b in &self.histogram {
            let _ = writeln!(out, "{},{},{}", Num(b.lo), Num(b.hi), b.count);
        }
        out
    }

    pub fn theory_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn rel_dev(empirical: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        (empirical - predicted).abs()
    } else {
        ((empirical - predicted) / predicted).abs()
    }
}

/// Runs ECDSep on `basin` from `theta0` for `steps` steps, discards the first
/// `burn_in`, and histograms the remaining radii into `bins` equal bins on
/// `[0, max radius]`.
pub fn concentration_report(
    basin: &QuadraticBasin,
    theta0: ParamVector,
    hp: &EcdHyperParams,
    steps: u64,
    burn_in: u64,
    bins: usize,
    rng: RngStream,
) -> Result<ConcentrationReport> {
    if !(hp.nu > 0.0) {
        return Err(Error::Parameter(
            "the concentration analysis needs nu > 0".into(),
        ));
    }
    if bins == 0 || burn_in >= steps {
        return Err(Error::Parameter(format!(
            "need bins >= 1 and burn_in < steps, got bins = {bins}, burn_in = {burn_in}, steps = {steps}"
        )));
    }
    let mut opt = Ecdsep::new(basin, theta0, hp.clone(), rng)?;
    let energy = opt.state().energy();
    let kept = (steps - burn_in) as usize;
    let mut radii = Vec::with_capacity(kept);
    let mut speeds = Vec::with_capacity(kept);
    let mut f_sum = 0.0;
    for k in 0..steps {
        let before = opt.state().theta().clone();
        opt.step_report(basin, None)?;
        if opt.state().is_terminated() && k + 1 < steps {
            return Err(Error::Terminated {
                step: k + 1,
                needed: steps,
            });
        }
        if k >= burn_in {
            let theta = opt.state().theta();
            let moved: f64 = theta
                .iter()
                .zip(before.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            radii.push(theta.norm());
            speeds.push(moved / hp.dt);
            f_sum += basin.f2 * theta.norm_sq() + basin.f_min;
        }
    }

    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let width = if r_max > 0.0 {
        r_max / bins as f64
    } else {
        1.0
    };
    let bin_of = |r: f64| ((r / width) as usize).min(bins - 1);
    let mut counts = vec![0u64; bins];
    let mut speed_sums = vec![0.0; bins];
    for (&r, &v) in radii.iter().zip(&speeds) {
        let b = bin_of(r);
        counts[b] += 1;
        speed_sums[b] += v;
    }
    let mode = (0..bins).fold(0, |best, b| if counts[b] > counts[best] { b } else { best });
    let mode_radius = (mode as f64 + 0.5) * width;
    let empirical_mode_f = basin.f2 * mode_radius * mode_radius + basin.f_min;

    let mut sorted = radii.clone();
    sorted.sort_by(f64::total_cmp);
    let median_radius = sorted[sorted.len() / 2];

    let spec = BasinSpec {
        n: basin.n,
        f2: basin.f2,
        f_min: basin.f_min,
        f0: hp.f0,
        eta: hp.eta,
        energy,
        f_init: f64::NAN,
    };
    let predicted_theta_star_sq = theory::concentration_radius_sq(&spec)?;
    let predicted_f = basin.f2 * predicted_theta_star_sq + basin.f_min;
    let predicted_speed = theory::speed_at_radius(&spec)?;
    let empirical_speed_at_mode = speed_sums[mode] / counts[mode].max(1) as f64;

    Ok(ConcentrationReport {
        histogram: counts
            .iter()
            .enumerate()
            .map(|(b, &count)| HistogramBin {
                lo: b as f64 * width,
                hi: (b + 1) as f64 * width,
                count,
            })
            .collect(),
        samples: kept as u64,
        burn_in,
        energy,
        mode_radius,
        empirical_mode_f,
        median_radius,
        mean_f: f_sum / kept as f64,
        predicted_theta_star_sq,
        predicted_f,
        mode_f_rel_deviation: rel_dev(empirical_mode_f, predicted_f),
        empirical_speed_at_mode,
        predicted_speed,
        speed_rel_deviation: rel_dev(empirical_speed_at_mode, predicted_speed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaRow {
    pub eta: f64,
    pub tail_mean_f: f64,
    pub final_f: f64,
    pub steps: u64,
}

pub fn eta_rows_csv(rows: &[EtaRow]) -> String {
    let mut out = String::from("eta,tail_mean_f,final_f,steps\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            Num(r.eta),
            Num(r.tail_mean_f),
            Num(r.final_f),
            r.steps
        );
    }
    out
}

/// Runs ECDSep once per `eta` with every other hyperparameter and the seed
/// held fixed, and reports the mean objective over the last `tail_fraction`
/// of each run. Rows are sorted by `eta`.
pub fn eta_monotonicity_report(
    basin: &QuadraticBasin,
    theta0: &ParamVector,
    etas: &[f64],
    hp: &EcdHyperParams,
    steps: u64,
    tail_fraction: f64,
    seed: u64,
) -> Result<Vec<EtaRow>> {
    if etas.is_empty() {
        return Err(Error::Parameter("no eta values given".into()));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) || steps == 0 {
        return Err(Error::Parameter(
            "need steps >= 1 and tail_fraction in (0, 1]".into(),
        ));
    }
    let tail_start = steps - ((steps as f64 * tail_fraction).ceil() as u64).clamp(1, steps);
    let mut sorted = etas.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(sorted.len());
    for eta in sorted {
        let hp = EcdHyperParams { eta, ..hp.clone() };
        let mut opt = Ecdsep::new(basin, theta0.clone(), hp, RngStream::new(seed))?;
        let (mut sum, mut count) = (0.0, 0u64);
        for k in 0..steps {
            if opt.state().is_terminated() {
                break;
            }
            opt.step_report(basin, None)?;
            if k >= tail_start {
                sum += basin.value(opt.state().theta(), None)?;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::Terminated {
                step: opt.state().step(),
                needed: steps,
            });
        }
        rows.push(EtaRow {
            eta,
            tail_mean_f: sum / count as f64,
            final_f: basin.value(opt.state().theta(), None)?,
            steps: opt.state().step(),
        });
    }
    Ok(rows)
}
