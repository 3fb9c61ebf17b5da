//! Normalized complex LMS and its widely-linear (augmented) variant.
//!
//! NCLMS:
//!
//! ```text
//! d̂ = ⟨z, w⟩ = Σ zᵢ conj(wᵢ)
//! w ← w + μ / (ε + ‖z‖²) · conj(e) · z
//! ```
//!
//! WL-NCLMS runs the same recursion on the augmented regressor `[z; conj(z)]`
//! with weights `[w; g]`, so `d̂ = ⟨z, w⟩ + ⟨conj(z), g⟩` and the step is
//! normalized by `ε + 2‖z‖²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_finite, StepRecord};
use crate::error::{check_dims, Error, Result};
use crate::vector::{inner, ComplexVector};

/// Default normalization regularizer.
pub const DEFAULT_EPSILON: f64 = 1e-6;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon >= 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "regularizer epsilon must be finite and nonnegative, got {epsilon}"
        )))
    }
}

fn normalized_gain(mu: f64, epsilon: f64, power: f64) -> Result<f64> {
    let denom = epsilon + power;
    if denom > 0.0 {
        Ok(mu / denom)
    } else {
        Err(Error::Numeric(
            "normalization by zero input power (set epsilon > 0)".into(),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nclms {
    w: ComplexVector,
    epsilon: f64,
}

impl Nclms {
    pub fn new(dim: usize, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            w: ComplexVector::zeros(dim)?,
            epsilon,
        })
    }

    pub fn weights(&self) -> &ComplexVector {
        &self.w
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn predict(&self, z: &ComplexVector) -> Result<Complex64> {
        z.inner(&self.w)
    }

    pub fn step(&mut self, z: &ComplexVector, d: Complex64, mu: f64) -> Result<StepRecord> {
        check_dims(self.w.len(), z.len())?;
        check_finite(z, d)?;
        let prediction = inner(z.as_slice(), self.w.as_slice());
        let error = d - prediction;
        let gain = normalized_gain(mu, self.epsilon, z.norm_sqr())? * error.conj();
        for (w, x) in self.w.as_mut_slice().iter_mut().zip(z.as_slice()) {
            *w += gain * x;
        }
        Ok(StepRecord::new(prediction, error, true, 0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WlNclms {
    w: ComplexVector,
    g: ComplexVector,
    epsilon: f64,
}

impl WlNclms {
    pub fn new(dim: usize, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            w: ComplexVector::zeros(dim)?,
            g: ComplexVector::zeros(dim)?,
            epsilon,
        })
    }

    /// Weights applied to `z`.
    pub fn weights(&self) -> &ComplexVector {
        &self.w
    }

    /// Weights applied to `conj(z)`.
    pub fn conjugate_weights(&self) -> &ComplexVector {
        &self.g
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn output(&self, z: &[Complex64]) -> Complex64 {
        // ⟨conj(z), g⟩ = Σ conj(zᵢ) conj(gᵢ)
        let conj_part = z
            .iter()
            .zip(self.g.as_slice())
            .fold(Complex64::new(0.0, 0.0), |acc, (x, g)| acc + (x * g).conj());
        inner(z, self.w.as_slice()) + conj_part
    }

    pub fn predict(&self, z: &ComplexVector) -> Result<Complex64> {
        check_dims(self.w.len(), z.len())?;
        Ok(self.output(z.as_slice()))
    }

    pub fn step(&mut self, z: &ComplexVector, d: Complex64, mu: f64) -> Result<StepRecord> {
        check_dims(self.w.len(), z.len())?;
        check_finite(z, d)?;
        let prediction = self.output(z.as_slice());
        let error = d - prediction;
        let gain = normalized_gain(mu, self.epsilon, 2.0 * z.norm_sqr())? * error.conj();
        for ((w, g), x) in self
            .w
            .as_mut_slice()
            .iter_mut()
            .zip(self.g.as_mut_slice())
            .zip(z.as_slice())
        {
            *w += gain * x;
            *g += gain * x.conj();
        }
        Ok(StepRecord::new(prediction, error, true, 0))
    }
}
