use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

/// A point of `ℂ^ν`. Real inputs are stored with zero imaginary parts.
///
/// The length is fixed at construction and is never zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid(
                "a complex vector needs at least one component",
            ));
        }
        Ok(Self(components))
    }

    /// Embeds a real vector into `ℂ^ν`.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|c| c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|c| c.conj()).collect())
    }

    /// `⟨self, other⟩ = Σ selfᵢ · conj(otherᵢ)`, linear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dims(self.len(), other.len())?;
        Ok(inner(&self.0, &other.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVector {
    type Error = Error;

    fn try_from(value: Vec<Complex64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ComplexVector> for Vec<Complex64> {
    fn from(value: ComplexVector) -> Self {
        value.0
    }
}

/// Sesquilinear inner product on equal-length slices (linear in `a`).
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x * y.conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty() {
        assert!(ComplexVector::new(vec![]).is_err());
    }

    #[test]
    fn inner_is_linear_in_first_slot() {
        let a = ComplexVector::new(vec![Complex64::new(0.0, 1.0)]).unwrap();
        let b = ComplexVector::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(a.inner(&b).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(b.inner(&a).unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn serde_rejects_empty_arrays() {
        assert!(serde_json::from_str::<ComplexVector>("[]").is_err());
        let v: ComplexVector = serde_json::from_str("[[1.0,2.0]]").unwrap();
        assert_eq!(v[0], Complex64::new(1.0, 2.0));
    }
}
