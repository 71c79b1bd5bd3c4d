use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense parameter or momentum vector.
///
/// The length is fixed at construction and every entry is finite when built
/// through [`ParamVector::new`]. In-place arithmetic used by the optimizers can
/// still overflow, which [`ParamVector::is_finite`] detects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::filled(n, 0.0)
    }

    pub fn filled(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &ParamVector) -> Result<f64> {
        dot(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub(crate) fn scale_in_place(&mut self, factor: f64) {
        self.0.iter_mut().for_each(|v| *v *= factor);
    }

    /// `self += alpha * other`, lengths assumed equal.
    pub(crate) fn axpy_in_place(&mut self, alpha: f64, other: &[f64]) {
        debug_assert_eq!(self.0.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(other) {
            *a += alpha * b;
        }
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for ParamVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ParamVector> for Vec<f64> {
    fn from(v: ParamVector) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for ParamVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for ParamVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub fn dot(a: &ParamVector, b: &ParamVector) -> Result<f64> {
    b.check_len(a.len())?;
    Ok(a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum())
}

pub fn norm(a: &ParamVector) -> f64 {
    a.norm_sq().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ParamVector {
        ParamVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&pv(&[1.0, 2.0]), &pv(&[3.0, 4.0])).unwrap(), 11.0);
        let v = pv(&[1.5, -2.0, 7.0]);
        assert_eq!(dot(&v, &ParamVector::zeros(3).unwrap()).unwrap(), 0.0);
        // oracle: eight products of 0.25
        let halves = pv(&[0.5; 8]);
        let expected: f64 = std::iter::repeat(0.25).take(8).sum();
        assert_eq!(dot(&halves, &halves).unwrap(), expected);
        assert_eq!(expected, 2.0);
    }

    #[test]
    fn dot_length_mismatch() {
        let err = dot(&pv(&[1.0]), &pv(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 1,
                got: 2
            }
        ));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&pv(&[3.0, 4.0])), 5.0);
        assert_eq!(norm(&ParamVector::zeros(4).unwrap()), 0.0);
        assert_eq!(norm(&pv(&[1.0; 4])), 2.0);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(ParamVector::new(vec![]), Err(Error::EmptyVector)));
        assert!(matches!(
            ParamVector::new(vec![0.0, f64::NAN]),
            Err(Error::NonFiniteEntry { index: 1 })
        ));
        assert!(ParamVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn validity_check_sees_overflow() {
        let mut v = pv(&[1e308, 1.0]);
        assert!(v.is_finite());
        v.scale_in_place(10.0);
        assert!(!v.is_finite());
    }

    #[test]
    fn serde_rejects_empty() {
        assert!(serde_json::from_str::<ParamVector>("[]").is_err());
        let v: ParamVector = serde_json::from_str("[1.0,2.0]").unwrap();
        assert_eq!(v.as_slice(), &[1.0, 2.0]);
    }
}
