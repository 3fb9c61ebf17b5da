//! Gaussian reproducing kernels on `ℂ^ν`, Gram matrices and RKHS distances.
//!
//! The complex Gaussian kernel is
//!
//! ```text
//! κ(z, w) = exp( -Σᵢ (zᵢ - conj(wᵢ))² / σ² )
//! ```
//!
//! with the entire complex exponential `exp(a + ib) = eᵃ (cos b + i sin b)`.
//! On real inputs it coincides with the real Gaussian kernel
//! `exp(-Σᵢ (xᵢ - yᵢ)² / σ²)`.
//!
//! Note that `κ(z, z) = exp(4 Σᵢ (Im zᵢ)² / σ²)`, so the diagonal of a complex
//! Gram matrix is only 1 on the real subspace.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::vector::{inner, ComplexVector};

/// Absolute slack accepted when testing a matrix for Hermitian symmetry,
/// scaled by the entry magnitude when that exceeds one.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    ComplexGaussian,
    RealGaussian,
}

/// A Gaussian kernel family together with its width `σ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKernelSpec")]
pub struct KernelSpec {
    family: KernelFamily,
    sigma: f64,
}

#[derive(Deserialize)]
struct RawKernelSpec {
    family: KernelFamily,
    sigma: f64,
}

impl TryFrom<RawKernelSpec> for KernelSpec {
    type Error = Error;

    fn try_from(raw: RawKernelSpec) -> Result<Self> {
        KernelSpec::new(raw.family, raw.sigma)
    }
}

impl KernelSpec {
    pub fn new(family: KernelFamily, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "kernel width sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self { family, sigma })
    }

    pub fn complex_gaussian(sigma: f64) -> Result<Self> {
        Self::new(KernelFamily::ComplexGaussian, sigma)
    }

    pub fn real_gaussian(sigma: f64) -> Result<Self> {
        Self::new(KernelFamily::RealGaussian, sigma)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// A reproducing kernel usable by the kernel LMS filter.
///
/// Implementations must be Hermitian: `eval(w, z) == conj(eval(z, w))`.
/// Both slices always have the same length when called from this crate.
pub trait Kernel: Send + Sync {
    fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64;

    /// `κ(z, z)`, which is real for any Hermitian kernel.
    fn self_eval(&self, z: &[Complex64]) -> f64 {
        self.eval(z, z).re
    }
}

impl Kernel for KernelSpec {
    #[inline]
    fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        let inv_sigma_sq = 1.0 / (self.sigma * self.sigma);
        match self.family {
            KernelFamily::ComplexGaussian => {
                let sum = z
                    .iter()
                    .zip(w)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| {
                        let d = a - b.conj();
                        acc + d * d
                    });
                (-sum * inv_sigma_sq).exp()
            }
            // Applied to complex data this is the real Gaussian on ℝ^{2ν}.
            KernelFamily::RealGaussian => {
                let sum: f64 = z.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum();
                Complex64::new((-sum * inv_sigma_sq).exp(), 0.0)
            }
        }
    }

    #[inline]
    fn self_eval(&self, z: &[Complex64]) -> f64 {
        match self.family {
            KernelFamily::ComplexGaussian => {
                let inv_sigma_sq = 1.0 / (self.sigma * self.sigma);
                let im_sq: f64 = z.iter().map(|c| c.im * c.im).sum();
                (4.0 * im_sq * inv_sigma_sq).exp()
            }
            KernelFamily::RealGaussian => 1.0,
        }
    }
}

/// The linear kernel `κ(z, w) = ⟨z, w⟩ = Σ zᵢ conj(wᵢ)`.
///
/// With this kernel the kernel LMS filter is algebraically the complex LMS
/// filter in `ℂ^ν`, which makes it a useful reference.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LinearKernel;

impl Kernel for LinearKernel {
    #[inline]
    fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        inner(z, w)
    }

    fn self_eval(&self, z: &[Complex64]) -> f64 {
        z.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Complex Gaussian kernel `κ(z, w)`.
pub fn eval_complex_gaussian(
    z: &ComplexVector,
    w: &ComplexVector,
    spec: &KernelSpec,
) -> Result<Complex64> {
    if spec.family != KernelFamily::ComplexGaussian {
        return Err(Error::invalid("expected a complex-gaussian kernel spec"));
    }
    check_dims(z.len(), w.len())?;
    Ok(spec.eval(z.as_slice(), w.as_slice()))
}

/// Real Gaussian kernel on real inputs; rejects any nonzero imaginary part.
pub fn eval_real_gaussian(x: &ComplexVector, y: &ComplexVector, spec: &KernelSpec) -> Result<f64> {
    if spec.family != KernelFamily::RealGaussian {
        return Err(Error::invalid("expected a real-gaussian kernel spec"));
    }
    check_dims(x.len(), y.len())?;
    if !x.is_real() || !y.is_real() {
        return Err(Error::invalid(
            "real Gaussian kernel requires inputs with zero imaginary parts",
        ));
    }
    Ok(spec.eval(x.as_slice(), y.as_slice()).re)
}

/// Squared RKHS distance `‖Φ(z) − Φ(c)‖² = κ(z,z) + κ(c,c) − 2 Re κ(c,z)`.
///
/// Small negative values caused by rounding are clamped to zero.
pub fn rkhs_distance_sq<K: Kernel + ?Sized>(
    z: &ComplexVector,
    c: &ComplexVector,
    kernel: &K,
) -> Result<f64> {
    check_dims(z.len(), c.len())?;
    let z = z.as_slice();
    let c = c.as_slice();
    Ok(distance_sq_from_parts(
        kernel.self_eval(z),
        kernel.self_eval(c),
        kernel.eval(c, z),
    ))
}

/// Combines precomputed kernel values into a squared RKHS distance.
///
/// `cross` may be either `κ(c, z)` or `κ(z, c)`: only its real part is used.
#[inline]
pub(crate) fn distance_sq_from_parts(self_z: f64, self_c: f64, cross: Complex64) -> f64 {
    (self_z + self_c - 2.0 * cross.re).max(0.0)
}

/// Gram matrix `K[i][j] = κ(pᵢ, pⱼ)` together with its generating points.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: DMatrix<Complex64>,
    points: Vec<ComplexVector>,
}

impl GramMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn points(&self) -> &[ComplexVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> Result<bool> {
        is_positive_semidefinite(&self.entries, tol)
    }
}

/// Builds the Gram matrix of `points`. The upper triangle is evaluated and
/// mirrored, so the result is exactly Hermitian.
pub fn gram<K: Kernel + ?Sized>(points: &[ComplexVector], kernel: &K) -> Result<GramMatrix> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("Gram matrix needs at least one point"))?;
    for p in points {
        check_dims(first.len(), p.len())?;
    }
    let n = points.len();
    let mut entries = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        entries[(i, i)] = Complex64::new(kernel.self_eval(points[i].as_slice()), 0.0);
        for j in (i + 1)..n {
            let k = kernel.eval(points[i].as_slice(), points[j].as_slice());
            entries[(i, j)] = k;
            entries[(j, i)] = k.conj();
        }
    }
    Ok(GramMatrix {
        entries,
        points: points.to_vec(),
    })
}

pub fn is_hermitian(k: &DMatrix<Complex64>) -> bool {
    if !k.is_square() {
        return false;
    }
    let n = k.nrows();
    (0..n).all(|i| {
        let d = k[(i, i)];
        d.im.abs() <= HERMITIAN_TOL * d.norm().max(1.0)
            && (i + 1..n).all(|j| {
                let a = k[(i, j)];
                (a - k[(j, i)].conj()).norm() <= HERMITIAN_TOL * a.norm().max(1.0)
            })
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(k: &DMatrix<Complex64>) -> Result<f64> {
    if !is_hermitian(k) {
        return Err(Error::invalid("matrix is not Hermitian"));
    }
    if k.is_empty() {
        return Err(Error::invalid("empty matrix"));
    }
    let eig = SymmetricEigen::new(k.clone());
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::Numeric(
            "eigenvalue computation did not converge".into(),
        ));
    }
    Ok(min)
}

/// Spectral positive-semidefiniteness test:
/// `λ_min ≥ −tol · (1 + |trace|)`.
pub fn is_positive_semidefinite(k: &DMatrix<Complex64>, tol: f64) -> Result<bool> {
    let min = min_eigenvalue(k)?;
    let trace = k.trace().norm();
    Ok(min >= -tol * (1.0 + trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cv(values: &[Complex64]) -> ComplexVector {
        ComplexVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn sigma_must_be_positive() {
        assert!(KernelSpec::complex_gaussian(0.0).is_err());
        assert!(KernelSpec::complex_gaussian(-1.0).is_err());
        assert!(KernelSpec::real_gaussian(f64::NAN).is_err());
        assert!(
            serde_json::from_str::<KernelSpec>(r#"{"family":"real-gaussian","sigma":0}"#).is_err()
        );
    }

    #[test]
    fn complex_gaussian_equal_real_points_is_one() {
        let z = ComplexVector::from_real(&[0.3, -1.2]).unwrap();
        for sigma in [0.1, 1.0, 7.5] {
            let spec = KernelSpec::complex_gaussian(sigma).unwrap();
            assert_eq!(eval_complex_gaussian(&z, &z, &spec).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn complex_gaussian_imaginary_unit_against_origin() {
        let spec = KernelSpec::complex_gaussian(1.0).unwrap();
        let k = eval_complex_gaussian(&cv(&[c(0.0, 1.0)]), &cv(&[c(0.0, 0.0)]), &spec).unwrap();
        assert!((k.re - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(k.im, 0.0);
    }

    #[test]
    fn complex_gaussian_is_hermitian_on_example() {
        let spec = KernelSpec::complex_gaussian(2.0).unwrap();
        let z = cv(&[c(1.0, 2.0)]);
        let w = cv(&[c(0.5, -0.5)]);
        let a = eval_complex_gaussian(&z, &w, &spec).unwrap();
        let b = eval_complex_gaussian(&w, &z, &spec).unwrap();
        assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        assert!(a.im != 0.0);
    }

    #[test]
    fn family_and_dimension_checks() {
        let cg = KernelSpec::complex_gaussian(1.0).unwrap();
        let rg = KernelSpec::real_gaussian(1.0).unwrap();
        let a = cv(&[c(1.0, 0.0)]);
        let b = cv(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            eval_complex_gaussian(&a, &b, &cg),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(eval_complex_gaussian(&a, &a, &rg).is_err());
        assert!(eval_real_gaussian(&a, &a, &cg).is_err());
        let imag = cv(&[c(1.0, 0.5)]);
        assert!(eval_real_gaussian(&imag, &a, &rg).is_err());
        assert!(rkhs_distance_sq(&a, &b, &cg).is_err());
    }

    #[test]
    fn real_gaussian_values() {
        let spec = KernelSpec::real_gaussian(1.0).unwrap();
        let x = ComplexVector::from_real(&[0.0]).unwrap();
        let y = ComplexVector::from_real(&[1.0]).unwrap();
        assert_eq!(eval_real_gaussian(&x, &x, &spec).unwrap(), 1.0);
        let k = eval_real_gaussian(&x, &y, &spec).unwrap();
        assert!((k - 0.367_879_441_171_442_3).abs() < 1e-15);
    }

    #[test]
    fn self_eval_matches_eval_off_real_subspace() {
        let spec = KernelSpec::complex_gaussian(1.3).unwrap();
        let z = [c(0.4, -0.7), c(-1.1, 0.2)];
        let direct = spec.eval(&z, &z);
        let im_sq: f64 = z.iter().map(|v| v.im * v.im).sum();
        assert!((spec.self_eval(&z) - direct.re).abs() < 1e-14 * direct.re);
        assert!(direct.im.abs() < 1e-14);
        assert!((direct.re - (4.0 * im_sq / (1.3 * 1.3)).exp()).abs() < 1e-13);
        assert!(direct.re > 1.0);
    }

    #[test]
    fn gram_small_cases() {
        let spec = KernelSpec::complex_gaussian(1.0).unwrap();
        let p = cv(&[c(0.2, 0.3)]);
        let g = gram(std::slice::from_ref(&p), &spec).unwrap();
        assert_eq!(g.len(), 1);
        let expect = spec.eval(p.as_slice(), p.as_slice());
        assert!((g.get(0, 0) - expect).norm() < 1e-14);

        let r = ComplexVector::from_real(&[0.5, 0.5]).unwrap();
        let g = gram(&[r.clone(), r], &spec).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g.get(i, j), c(1.0, 0.0));
            }
        }
        assert!(gram::<KernelSpec>(&[], &spec).is_err());
    }

    #[test]
    fn psd_examples() {
        let one = DMatrix::from_element(1, 1, c(1.0, 0.0));
        assert!(is_positive_semidefinite(&one, 1e-10).unwrap());

        let swap =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((min_eigenvalue(&swap).unwrap() + 1.0).abs() < 1e-12);
        assert!(!is_positive_semidefinite(&swap, 1e-10).unwrap());

        let skew =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(matches!(
            is_positive_semidefinite(&skew, 1e-10),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn distance_examples() {
        let spec = KernelSpec::complex_gaussian(2.0).unwrap();
        let z = cv(&[c(1.0, 1.0)]);
        assert_eq!(rkhs_distance_sq(&z, &z, &spec).unwrap(), 0.0);

        let far_a = ComplexVector::from_real(&[0.0]).unwrap();
        let far_b = ComplexVector::from_real(&[100.0]).unwrap();
        assert!((rkhs_distance_sq(&far_a, &far_b, &spec).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn linear_kernel_is_inner_product() {
        let a = [c(1.0, 2.0), c(-0.5, 0.25)];
        let b = [c(0.0, 1.0), c(3.0, -1.0)];
        let expect = a[0] * b[0].conj() + a[1] * b[1].conj();
        assert_eq!(LinearKernel.eval(&a, &b), expect);
        assert!((LinearKernel.self_eval(&a) - LinearKernel.eval(&a, &a).re).abs() < 1e-15);
    }
}
