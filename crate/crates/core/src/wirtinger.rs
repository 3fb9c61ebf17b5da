//! Finite-difference Wirtinger calculus on `ℂ^ν`.
//!
//! For `T(z) = u(x, y) + i v(x, y)` with `z = x + iy`:
//!
//! ```text
//! ∂T/∂z  = ½(∂u/∂x + ∂v/∂y) + (i/2)(∂v/∂x − ∂u/∂y) = ½(∂T/∂x − i ∂T/∂y)
//! ∂T/∂z* = ½(∂u/∂x − ∂v/∂y) + (i/2)(∂v/∂x + ∂u/∂y) = ½(∂T/∂x + i ∂T/∂y)
//! ```
//!
//! Every partial is a central difference on one of the `2ν` real coordinates.
//! The checks here exercise the inner-product gradient rules, the first-order
//! Taylor expansion and the steepest-ascent property of `∇_{z*}T` for
//! real-valued `T`, all with `⟨a, b⟩ = Σ aᵢ conj(bᵢ)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dims, Error, Result};
use crate::vector::{inner, ComplexVector};

pub const DEFAULT_STEP: f64 = 1e-5;

type EvalFn<'a> = dyn Fn(&[Complex64]) -> Complex64 + Send + Sync + 'a;

/// A map `ℂ^ν → ℂ` with a known input dimension.
pub struct ComplexFunctional<'a> {
    dim: usize,
    eval: Box<EvalFn<'a>>,
}

impl<'a> ComplexFunctional<'a> {
    pub fn new<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[Complex64]) -> Complex64 + Send + Sync + 'a,
    {
        Self {
            dim,
            eval: Box::new(eval),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, z: &ComplexVector) -> Result<Complex64> {
        check_dims(self.dim, z.len())?;
        Ok((self.eval)(z.as_slice()))
    }

    fn eval_finite(&self, z: &[Complex64]) -> Result<Complex64> {
        let v = (self.eval)(z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!(
                "functional returned {v} at a probe point"
            )))
        }
    }
}

/// `∇_z T` and `∇_{z*} T` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct WirtingerGradient {
    pub r_derivative: ComplexVector,
    pub conj_r_derivative: ComplexVector,
}

/// Central-difference Wirtinger gradient of `t` at `z`.
pub fn numeric_wirtinger_gradient(
    t: &ComplexFunctional<'_>,
    z: &ComplexVector,
    step: f64,
) -> Result<WirtingerGradient> {
    check_dims(t.dim, z.len())?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let mut probe = z.as_slice().to_vec();
    let mut r = Vec::with_capacity(z.len());
    let mut conj_r = Vec::with_capacity(z.len());
    for k in 0..z.len() {
        let base = probe[k];
        let mut central = |delta: Complex64| -> Result<Complex64> {
            probe[k] = base + delta;
            let plus = t.eval_finite(&probe)?;
            probe[k] = base - delta;
            let minus = t.eval_finite(&probe)?;
            probe[k] = base;
            Ok((plus - minus) / (2.0 * step))
        };
        let d_dx = central(Complex64::new(step, 0.0))?;
        let d_dy = central(Complex64::new(0.0, step))?;
        let i_d_dy = Complex64::i() * d_dy;
        r.push((d_dx - i_d_dy) * 0.5);
        conj_r.push((d_dx + i_d_dy) * 0.5);
    }
    Ok(WirtingerGradient {
        r_derivative: ComplexVector::new(r)?,
        conj_r_derivative: ComplexVector::new(conj_r)?,
    })
}

fn max_deviation(a: &ComplexVector, b: &[Complex64]) -> f64 {
    a.as_slice()
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks the four inner-product rules at `probe`:
///
/// | `T(f)`        | `∇_f T` | `∇_{f*} T` |
/// |---------------|---------|------------|
/// | `⟨f, w⟩`      | `w*`    | `0`        |
/// | `⟨w, f⟩`      | `0`     | `w`        |
/// | `⟨f*, w⟩`     | `0`     | `w*`       |
/// | `⟨w, f*⟩`     | `w`     | `0`        |
///
/// Returns the largest absolute deviation from the closed forms.
pub fn check_inner_product_gradients(
    w: &ComplexVector,
    probe: &ComplexVector,
    step: f64,
) -> Result<f64> {
    check_dims(w.len(), probe.len())?;
    let dim = w.len();
    let ws = w.as_slice();
    let w_conj = w.conj();
    let zero = vec![Complex64::new(0.0, 0.0); dim];

    let cases: [(ComplexFunctional<'_>, &[Complex64], &[Complex64]); 4] = [
        (
            ComplexFunctional::new(dim, |f| inner(f, ws)),
            w_conj.as_slice(),
            &zero,
        ),
        (ComplexFunctional::new(dim, |f| inner(ws, f)), &zero, ws),
        (
            ComplexFunctional::new(dim, |f| {
                let fc: Vec<_> = f.iter().map(|c| c.conj()).collect();
                inner(&fc, ws)
            }),
            &zero,
            w_conj.as_slice(),
        ),
        (
            ComplexFunctional::new(dim, |f| {
                let fc: Vec<_> = f.iter().map(|c| c.conj()).collect();
                inner(ws, &fc)
            }),
            ws,
            &zero,
        ),
    ];

    let mut worst: f64 = 0.0;
    for (t, expect_r, expect_conj) in &cases {
        let g = numeric_wirtinger_gradient(t, probe, step)?;
        worst = worst
            .max(max_deviation(&g.r_derivative, expect_r))
            .max(max_deviation(&g.conj_r_derivative, expect_conj));
    }
    Ok(worst)
}

/// First-order Taylor prediction
/// `T(z) + ⟨h, (∇_z T)*⟩ + ⟨h*, (∇_{z*} T)*⟩`, using numeric gradients.
pub fn taylor_first_order(
    t: &ComplexFunctional<'_>,
    z: &ComplexVector,
    h: &ComplexVector,
    step: f64,
) -> Result<Complex64> {
    check_dims(z.len(), h.len())?;
    let g = numeric_wirtinger_gradient(t, z, step)?;
    let r_conj = g.r_derivative.conj();
    let c_conj = g.conj_r_derivative.conj();
    Ok(t.eval_finite(z.as_slice())?
        + inner(h.as_slice(), r_conj.as_slice())
        + inner(h.conj().as_slice(), c_conj.as_slice()))
}

/// `|T(z + h) − first-order prediction|`.
pub fn check_taylor_first_order(
    t: &ComplexFunctional<'_>,
    z: &ComplexVector,
    h: &ComplexVector,
) -> Result<f64> {
    let predicted = taylor_first_order(t, z, h, DEFAULT_STEP)?;
    let shifted: Vec<_> = z
        .as_slice()
        .iter()
        .zip(h.as_slice())
        .map(|(a, b)| a + b)
        .collect();
    Ok((t.eval_finite(&shifted)? - predicted).norm())
}

/// Probe length used to measure directional increase in
/// [`check_steepest_ascent`].
pub const ASCENT_PROBE: f64 = 1e-4;

/// Draws `n_directions` random unit directions and checks that none of them
/// increases the real-valued `t` faster than `∇_{z*}T(z) / ‖∇_{z*}T(z)‖`.
///
/// Directional increase is the central difference
/// `(T(z + εd) − T(z − εd)) / 2ε` with `ε = ASCENT_PROBE`.
pub fn check_steepest_ascent(
    t: &ComplexFunctional<'_>,
    z: &ComplexVector,
    n_directions: usize,
    seed: u64,
) -> Result<bool> {
    let grad = numeric_wirtinger_gradient(t, z, DEFAULT_STEP)?.conj_r_derivative;
    let norm = grad.norm_sqr().sqrt();
    if norm <= 1e-12 {
        return Err(Error::invalid(
            "steepest-ascent check needs a nonzero gradient",
        ));
    }
    let slope = |d: &[Complex64]| -> Result<f64> {
        let plus: Vec<_> = z
            .as_slice()
            .iter()
            .zip(d)
            .map(|(a, b)| a + b * ASCENT_PROBE)
            .collect();
        let minus: Vec<_> = z
            .as_slice()
            .iter()
            .zip(d)
            .map(|(a, b)| a - b * ASCENT_PROBE)
            .collect();
        Ok((t.eval_finite(&plus)?.re - t.eval_finite(&minus)?.re) / (2.0 * ASCENT_PROBE))
    };
    let best = slope(grad.scale(1.0 / norm).as_slice())?;
    // Slack for the O(ε²) error of the central difference.
    let slack = 1e-6 * best.abs().max(1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_directions {
        let d = random_unit(&mut rng, z.len());
        if slope(&d)? > best + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Uniformly distributed unit vector in `ℂ^dim`.
pub fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// The kernel LMS instantaneous loss `L(w) = |d − ⟨φ, w⟩|²` in `ℂ^m`.
pub fn lms_loss<'a>(phi: &'a ComplexVector, d: Complex64) -> ComplexFunctional<'a> {
    ComplexFunctional::new(phi.len(), move |w| {
        Complex64::new((d - inner(phi.as_slice(), w)).norm_sqr(), 0.0)
    })
}

/// Closed-form `∇_{w*} L = −conj(e) φ` with `e = d − ⟨φ, w⟩`.
pub fn lms_loss_gradient(
    phi: &ComplexVector,
    d: Complex64,
    w: &ComplexVector,
) -> Result<ComplexVector> {
    let e = d - phi.inner(w)?;
    ComplexVector::new(phi.as_slice().iter().map(|p| -e.conj() * p).collect())
}

/// Scalar test functions with known Wirtinger derivatives.
pub mod battery {
    use super::*;

    /// A named scalar function of one complex variable with closed-form
    /// `(∂T/∂z, ∂T/∂z*)`.
    pub struct ScalarCase {
        pub name: &'static str,
        pub f: fn(Complex64) -> Complex64,
        pub grads: fn(Complex64) -> (Complex64, Complex64),
        pub real_valued: bool,
    }

    impl ScalarCase {
        pub fn functional(&self) -> ComplexFunctional<'static> {
            let f = self.f;
            ComplexFunctional::new(1, move |z| f(z[0]))
        }
    }

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const HALF: Complex64 = Complex64::new(0.5, 0.0);

    pub fn scalar_cases() -> Vec<ScalarCase> {
        vec![
            ScalarCase {
                name: "z",
                f: |z| z,
                grads: |_| (ONE, ZERO),
                real_valued: false,
            },
            ScalarCase {
                name: "conj(z)",
                f: |z| z.conj(),
                grads: |_| (ZERO, ONE),
                real_valued: false,
            },
            ScalarCase {
                name: "z^3",
                f: |z| z * z * z,
                grads: |z| (z * z * 3.0, ZERO),
                real_valued: false,
            },
            ScalarCase {
                name: "conj(z)^2",
                f: |z| z.conj() * z.conj(),
                grads: |z| (ZERO, z.conj() * 2.0),
                real_valued: false,
            },
            ScalarCase {
                name: "z*conj(z)",
                f: |z| z * z.conj(),
                grads: |z| (z.conj(), z),
                real_valued: true,
            },
            ScalarCase {
                name: "z*conj(z)^2",
                f: |z| z * z.conj() * z.conj(),
                grads: |z| (z.conj() * z.conj(), z * z.conj() * 2.0),
                real_valued: false,
            },
            ScalarCase {
                name: "re(z)",
                f: |z| Complex64::new(z.re, 0.0),
                grads: |_| (HALF, HALF),
                real_valued: true,
            },
            ScalarCase {
                name: "|z|^4",
                f: |z| Complex64::new(z.norm_sqr() * z.norm_sqr(), 0.0),
                // |z|⁴ = z² conj(z)²
                grads: |z| (z * z.conj() * z.conj() * 2.0, z * z * z.conj() * 2.0),
                real_valued: true,
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar(v: Complex64) -> ComplexVector {
        ComplexVector::new(vec![v]).unwrap()
    }

    #[test]
    fn identity_is_holomorphic() {
        let t = ComplexFunctional::new(1, |z| z[0]);
        let g = numeric_wirtinger_gradient(&t, &scalar(c(0.3, -2.0)), DEFAULT_STEP).unwrap();
        assert!((g.r_derivative[0] - c(1.0, 0.0)).norm() < 1e-9);
        assert!(g.conj_r_derivative[0].norm() < 1e-9);
    }

    #[test]
    fn worked_example_z_conj_z_squared() {
        let t = ComplexFunctional::new(1, |z| z[0] * z[0].conj() * z[0].conj());
        let g = numeric_wirtinger_gradient(&t, &scalar(c(1.0, 1.0)), DEFAULT_STEP).unwrap();
        assert!((g.r_derivative[0] - c(0.0, -2.0)).norm() < 1e-8);
        assert!((g.conj_r_derivative[0] - c(4.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn modulus_squared() {
        let z = c(-0.7, 1.9);
        let t = ComplexFunctional::new(1, |z| z[0] * z[0].conj());
        let g = numeric_wirtinger_gradient(&t, &scalar(z), DEFAULT_STEP).unwrap();
        assert!((g.r_derivative[0] - z.conj()).norm() < 1e-8);
        assert!((g.conj_r_derivative[0] - z).norm() < 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = ComplexFunctional::new(1, |z| z[0]);
        assert!(numeric_wirtinger_gradient(&t, &scalar(c(0.0, 0.0)), 0.0).is_err());
        let two = ComplexVector::zeros(2).unwrap();
        assert!(numeric_wirtinger_gradient(&t, &two, DEFAULT_STEP).is_err());
        let bad = ComplexFunctional::new(1, |z| c(1.0, 0.0) / z[0].re);
        assert!(matches!(
            numeric_wirtinger_gradient(&bad, &scalar(c(0.0, 0.0)), DEFAULT_STEP),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn inner_product_rules_trivial_cases() {
        let zero = ComplexVector::zeros(3).unwrap();
        let probe = ComplexVector::new(vec![c(1.0, 2.0), c(0.0, -1.0), c(0.5, 0.5)]).unwrap();
        assert!(check_inner_product_gradients(&zero, &probe, DEFAULT_STEP).unwrap() < 1e-12);

        let one = scalar(c(1.0, 0.0));
        let t = ComplexFunctional::new(1, |f| inner(f, one.as_slice()));
        let g = numeric_wirtinger_gradient(&t, &scalar(c(0.2, 0.1)), DEFAULT_STEP).unwrap();
        assert!((g.r_derivative[0] - c(1.0, 0.0)).norm() < 1e-9);
        assert!(g.conj_r_derivative[0].norm() < 1e-9);
    }

    #[test]
    fn taylor_is_exact_for_linear_functionals() {
        let a = c(0.3, -1.0);
        let b = c(2.0, 0.5);
        let t = ComplexFunctional::new(1, move |z| a * z[0] + b * z[0].conj() + c(1.0, 1.0));
        let residual =
            check_taylor_first_order(&t, &scalar(c(0.4, 0.4)), &scalar(c(0.7, -0.3))).unwrap();
        assert!(residual < 1e-9, "{residual}");
    }

    #[test]
    fn real_valued_taylor_increment() {
        // For real T the first-order increment is 2 Re⟨h, ∇_{z*}T⟩.
        let t = ComplexFunctional::new(1, |z| c(z[0].norm_sqr().powi(2), 0.0));
        let z = scalar(c(0.6, -0.8));
        let h = scalar(c(1e-3, 2e-3));
        let g = numeric_wirtinger_gradient(&t, &z, DEFAULT_STEP).unwrap();
        let increment = 2.0 * h.inner(&g.conj_r_derivative).unwrap().re;
        let predicted = taylor_first_order(&t, &z, &h, DEFAULT_STEP).unwrap();
        let base = t.eval(&z).unwrap();
        assert!(((predicted - base).re - increment).abs() < 1e-12);
        assert!((predicted - base).im.abs() < 1e-12);
    }

    #[test]
    fn steepest_ascent_simple_cases() {
        let modsq = ComplexFunctional::new(1, |z| c(z[0].norm_sqr(), 0.0));
        assert!(check_steepest_ascent(&modsq, &scalar(c(1.0, 0.0)), 200, 5).unwrap());

        let re = ComplexFunctional::new(1, |z| c(z[0].re, 0.0));
        let g = numeric_wirtinger_gradient(&re, &scalar(c(0.3, 0.3)), DEFAULT_STEP).unwrap();
        assert!((g.conj_r_derivative[0] - c(0.5, 0.0)).norm() < 1e-9);
        assert!(check_steepest_ascent(&re, &scalar(c(0.3, 0.3)), 200, 6).unwrap());

        // ∇_{z*}(−|z|²) = −z, so the winning direction is −1.
        let neg = ComplexFunctional::new(1, |z| c(-z[0].norm_sqr(), 0.0));
        assert!(check_steepest_ascent(&neg, &scalar(c(1.0, 0.0)), 200, 7).unwrap());
    }

    #[test]
    fn steepest_ascent_needs_nonzero_gradient() {
        let modsq = ComplexFunctional::new(1, |z| c(z[0].norm_sqr(), 0.0));
        assert!(check_steepest_ascent(&modsq, &scalar(c(0.0, 0.0)), 10, 0).is_err());
    }

    #[test]
    fn battery_closed_forms_match_numeric() {
        let z = c(0.8, -0.45);
        for case in battery::scalar_cases() {
            let g =
                numeric_wirtinger_gradient(&case.functional(), &scalar(z), DEFAULT_STEP).unwrap();
            let (r, cr) = (case.grads)(z);
            assert!((g.r_derivative[0] - r).norm() < 1e-8, "{}", case.name);
            assert!((g.conj_r_derivative[0] - cr).norm() < 1e-8, "{}", case.name);
        }
    }
}
