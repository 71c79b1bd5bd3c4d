use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::vector::ParamVector;

/// Arithmetic mean of `thetas[start_index..]`.
pub fn swa_average(thetas: &[ParamVector], start_index: usize) -> Result<ParamVector> {
    let tail = thetas.get(start_index..).unwrap_or(&[]);
    let Some(first) = tail.first() else {
        return Err(Error::Parameter(format!(
            "empty averaging tail: start index {start_index} of {}",
            thetas.len()
        )));
    };
    let mut sum = vec![0.0; first.len()];
    for theta in tail {
        theta.check_len(sum.len())?;
        sum.iter_mut().zip(theta.iter()).for_each(|(s, t)| *s += t);
    }
    let m = tail.len() as f64;
    Ok(ParamVector::from_vec_unchecked(
        sum.into_iter().map(|s| s / m).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailAverage {
    pub theta: ParamVector,
    pub start_index: usize,
    pub f: f64,
}

/// Scans every start index in the last half of `thetas`, scores each tail
/// average with the full objective, and returns the best one. Ties keep the
/// earliest start.
pub fn best_tail_average(thetas: &[ParamVector], metric: &dyn Objective) -> Result<TailAverage> {
    let len = thetas.len();
    if len < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 iterates, got {len}"
        )));
    }
    let n = thetas[0].len();
    let mut suffix = vec![0.0; n];
    let mut best: Option<TailAverage> = None;
    for start in (len / 2..len).rev() {
        thetas[start].check_len(n)?;
        suffix
            .iter_mut()
            .zip(thetas[start].iter())
            .for_each(|(s, t)| *s += t);
        let m = (len - start) as f64;
        let theta = ParamVector::from_vec_unchecked(suffix.iter().map(|s| s / m).collect());
        let f = metric.value(&theta, None)?;
        if best.as_ref().is_none_or(|b| !(b.f < f)) {
            best = Some(TailAverage {
                theta,
                start_index: start,
                f,
            });
        }
    }
    Ok(best.expect("at least one tail scanned"))
}
