//! Complex kernel LMS with novelty-criterion sparsification.
//!
//! Each step:
//!
//! ```text
//! d̂(n) = Σₖ a(k) κ(z(n), z(k))
//! e(n) = d(n) − d̂(n)
//! a(n) = μ e(n)            (only if z(n) is admitted)
//! ```
//!
//! A sample is admitted when the dictionary is empty, or when both
//! `min_k ‖Φ(z(n)) − Φ(z(k))‖ ≥ δ₁` and `|e(n)| ≥ δ₂`. The distance test runs
//! first. Rejected samples leave the dictionary untouched.
//!
//! By default no normalization by `κ(z, z)` is applied. For the complex
//! Gaussian kernel `κ(z, z) = exp(4 Σ (Im zᵢ)² / σ²)` can exceed 2, and the
//! plain recursion is then unstable at `μ = 1`; [`CklmsState::normalized`]
//! switches to `a(n) = μ e(n) / κ(z(n), z(n))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_finite, StepRecord};
use crate::error::{check_dims, Error, Result};
use crate::kernel::{distance_sq_from_parts, Kernel, KernelSpec};
use crate::vector::ComplexVector;

/// Novelty-criterion thresholds. Both zero disables sparsification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNovelty")]
pub struct NoveltyConfig {
    delta1: f64,
    delta2: f64,
}

#[derive(Deserialize)]
struct RawNovelty {
    delta1: f64,
    delta2: f64,
}

impl TryFrom<RawNovelty> for NoveltyConfig {
    type Error = Error;

    fn try_from(raw: RawNovelty) -> Result<Self> {
        NoveltyConfig::new(raw.delta1, raw.delta2)
    }
}

impl NoveltyConfig {
    pub fn new(delta1: f64, delta2: f64) -> Result<Self> {
        if !(delta1 >= 0.0 && delta1.is_finite() && delta2 >= 0.0 && delta2.is_finite()) {
            return Err(Error::invalid(format!(
                "novelty thresholds must be finite and nonnegative, got delta1={delta1}, delta2={delta2}"
            )));
        }
        Ok(Self { delta1, delta2 })
    }

    /// Every sample is admitted.
    pub fn disabled() -> Self {
        Self {
            delta1: 0.0,
            delta2: 0.0,
        }
    }

    /// RKHS distance threshold.
    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    /// Prediction-error magnitude threshold.
    pub fn delta2(&self) -> f64 {
        self.delta2
    }
}

/// Append-only list of centers `z(k)` and coefficients `a(k)`.
///
/// Centers are stored contiguously; `κ(z(k), z(k))` is cached per center for
/// the distance test.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    dim: usize,
    centers: Vec<Complex64>,
    coefficients: Vec<Complex64>,
    self_kernel: Vec<f64>,
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Dimension of the stored centers, `None` while empty.
    pub fn dim(&self) -> Option<usize> {
        (!self.is_empty()).then_some(self.dim)
    }

    pub fn centers(&self) -> impl ExactSizeIterator<Item = &[Complex64]> + '_ {
        // `chunks_exact(0)` panics, and an empty dictionary has no centers anyway.
        self.centers.chunks_exact(self.dim.max(1))
    }

    pub fn center(&self, k: usize) -> &[Complex64] {
        &self.centers[k * self.dim..(k + 1) * self.dim]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    fn push(&mut self, center: &[Complex64], coefficient: Complex64, self_kernel: f64) {
        if self.is_empty() {
            self.dim = center.len();
        }
        debug_assert_eq!(self.dim, center.len());
        self.centers.extend_from_slice(center);
        self.coefficients.push(coefficient);
        self.self_kernel.push(self_kernel);
    }
}

/// Kernel LMS filter state.
#[derive(Debug, Clone)]
pub struct CklmsState<K = KernelSpec> {
    kernel: K,
    mu: f64,
    novelty: NoveltyConfig,
    dictionary: Dictionary,
    iteration: usize,
    normalize: bool,
}

impl<K: Kernel> CklmsState<K> {
    pub fn new(kernel: K, mu: f64, novelty: NoveltyConfig) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::invalid(format!(
                "step size mu must be positive, got {mu}"
            )));
        }
        Ok(Self {
            kernel,
            mu,
            novelty,
            dictionary: Dictionary::default(),
            iteration: 0,
            normalize: false,
        })
    }

    /// Divides the admitted coefficient by `κ(z, z)`: `a(n) = μ e(n) / κ(z(n), z(n))`.
    pub fn normalized(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize
    }

    pub fn kernel(&self) -> &K {
        &self.kernel
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn novelty(&self) -> NoveltyConfig {
        self.novelty
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    /// Number of samples processed so far, admitted or not.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    fn check_input(&self, z: &ComplexVector) -> Result<()> {
        match self.dictionary.dim() {
            Some(dim) => check_dims(dim, z.len()),
            None => Ok(()),
        }
    }

    /// Filter output `Σₖ a(k) κ(z, z(k))`; zero for an empty dictionary.
    pub fn predict(&self, z: &ComplexVector) -> Result<Complex64> {
        self.check_input(z)?;
        let z = z.as_slice();
        Ok(self
            .dictionary
            .centers()
            .zip(&self.dictionary.coefficients)
            .fold(Complex64::new(0.0, 0.0), |acc, (c, a)| {
                acc + a * self.kernel.eval(z, c)
            }))
    }

    /// Processes one sample `(z, d)`, updating the dictionary if the novelty
    /// criterion admits it.
    pub fn step(&mut self, z: &ComplexVector, d: Complex64) -> Result<StepRecord> {
        self.check_input(z)?;
        check_finite(z, d)?;
        let zs = z.as_slice();

        // One pass gives both the prediction and the nearest-center distance,
        // since Re κ(c, z) = Re κ(z, c).
        let self_z = self.kernel.self_eval(zs);
        let mut prediction = Complex64::new(0.0, 0.0);
        let mut min_dist_sq = f64::INFINITY;
        for ((c, a), self_c) in self
            .dictionary
            .centers()
            .zip(&self.dictionary.coefficients)
            .zip(&self.dictionary.self_kernel)
        {
            let k = self.kernel.eval(zs, c);
            prediction += a * k;
            min_dist_sq = min_dist_sq.min(distance_sq_from_parts(self_z, *self_c, k));
        }

        let error = d - prediction;
        let admitted = if self.dictionary.is_empty() {
            true
        } else if min_dist_sq < self.novelty.delta1 * self.novelty.delta1 {
            false
        } else {
            error.norm() >= self.novelty.delta2
        };

        if !(prediction.is_finite() && error.norm_sqr().is_finite()) {
            return Err(Error::Numeric(format!(
                "filter output diverged at iteration {}",
                self.iteration + 1
            )));
        }

        if admitted {
            let step = if self.normalize {
                self.mu / self_z
            } else {
                self.mu
            };
            self.dictionary.push(zs, error * step, self_z);
        }
        self.iteration += 1;

        Ok(StepRecord::new(
            prediction,
            error,
            admitted,
            self.dictionary.len(),
        ))
    }
}

impl CklmsState<KernelSpec> {
    pub fn snapshot(&self) -> CklmsSnapshot {
        CklmsSnapshot {
            kernel: self.kernel,
            mu: self.mu,
            novelty: self.novelty,
            normalize: self.normalize,
            iteration: self.iteration,
            centers: self
                .dictionary
                .centers()
                .map(|c| ComplexVector::new(c.to_vec()).expect("centers are non-empty"))
                .collect(),
            coefficients: self.dictionary.coefficients.clone(),
        }
    }

    pub fn from_snapshot(snapshot: &CklmsSnapshot) -> Result<Self> {
        if snapshot.centers.len() != snapshot.coefficients.len() {
            return Err(Error::invalid(format!(
                "snapshot has {} centers but {} coefficients",
                snapshot.centers.len(),
                snapshot.coefficients.len()
            )));
        }
        if snapshot.iteration < snapshot.centers.len() {
            return Err(Error::invalid(
                "snapshot iteration count is smaller than its dictionary",
            ));
        }
        let mut state = Self::new(snapshot.kernel, snapshot.mu, snapshot.novelty)?
            .normalized(snapshot.normalize);
        for (c, a) in snapshot.centers.iter().zip(&snapshot.coefficients) {
            if let Some(dim) = state.dictionary.dim() {
                check_dims(dim, c.len())?;
            }
            let self_c = state.kernel.self_eval(c.as_slice());
            state.dictionary.push(c.as_slice(), *a, self_c);
        }
        state.iteration = snapshot.iteration;
        Ok(state)
    }
}

/// JSON form of a kernel LMS filter:
///
/// ```json
/// {
///   "kernel": {"family": "complex-gaussian", "sigma": 5.0},
///   "mu": 1.0,
///   "novelty": {"delta1": 0.1, "delta2": 0.2},
///   "normalize": true,
///   "iteration": 4995,
///   "centers": [[[re, im], ...], ...],
///   "coefficients": [[re, im], ...]
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CklmsSnapshot {
    pub kernel: KernelSpec,
    pub mu: f64,
    pub novelty: NoveltyConfig,
    #[serde(default)]
    pub normalize: bool,
    pub iteration: usize,
    pub centers: Vec<ComplexVector>,
    pub coefficients: Vec<Complex64>,
}
