//! Self-checks behind `verify-wirtinger` and `verify-kernel`.

use cklms_core::kernel::{
    eval_complex_gaussian, eval_real_gaussian, gram, is_hermitian, min_eigenvalue, KernelSpec,
};
use cklms_core::wirtinger::battery::scalar_cases;
use cklms_core::wirtinger::{
    check_inner_product_gradients, check_steepest_ascent, check_taylor_first_order, lms_loss,
    lms_loss_gradient, numeric_wirtinger_gradient, random_unit, DEFAULT_STEP,
};
use cklms_core::{Complex64, ComplexVector, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const WIRTINGER_TOL: f64 = 1e-6;
pub const PSD_TOL: f64 = 1e-10;
pub const RESTRICTION_TOL: f64 = 1e-14;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            pass,
            detail,
        }
    }
}

fn random_vec(rng: &mut impl Rng, dim: usize, scale: f64) -> ComplexVector {
    ComplexVector::new(
        (0..dim)
            .map(|_| {
                Complex64::new(
                    rng.random_range(-scale..scale),
                    rng.random_range(-scale..scale),
                )
            })
            .collect(),
    )
    .expect("dim > 0")
}

pub fn wirtinger(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    for case in scalar_cases() {
        let t = case.functional();
        let mut dev = 0.0f64;
        let mut taylor = 0.0f64;
        for _ in 0..10 {
            let z = random_vec(&mut rng, 1, 1.0);
            let g = numeric_wirtinger_gradient(&t, &z, DEFAULT_STEP)?;
            let (dz, dzc) = (case.grads)(z[0]);
            dev = dev
                .max((g.r_derivative[0] - dz).norm())
                .max((g.conj_r_derivative[0] - dzc).norm());
            let h = ComplexVector::new(random_unit(&mut rng, 1))?.scale(1e-4);
            taylor = taylor.max(check_taylor_first_order(&t, &z, &h)?);
        }
        checks.push(Check::new(
            format!("derivatives of {}", case.name),
            dev <= WIRTINGER_TOL && taylor <= WIRTINGER_TOL,
            format!("max deviation {dev:.2e}, taylor residual {taylor:.2e}"),
        ));
    }

    let mut inner_dev = 0.0f64;
    for dim in 1..=8 {
        let w = random_vec(&mut rng, dim, 1.0);
        let probe = random_vec(&mut rng, dim, 1.0);
        inner_dev = inner_dev.max(check_inner_product_gradients(&w, &probe, DEFAULT_STEP)?);
    }
    checks.push(Check::new(
        "inner-product rules",
        inner_dev <= WIRTINGER_TOL,
        format!("max deviation {inner_dev:.2e}"),
    ));

    let mut worst = 0.0f64;
    let mut ascent = 0;
    for trial in 0..100u64 {
        let m = rng.random_range(1..=8);
        let phi = random_vec(&mut rng, m, 1.0);
        let w = random_vec(&mut rng, m, 1.0);
        let d = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let loss = lms_loss(&phi, d);
        let numeric = numeric_wirtinger_gradient(&loss, &w, DEFAULT_STEP)?.conj_r_derivative;
        let closed = lms_loss_gradient(&phi, d, &w)?;
        let diff = numeric
            .as_slice()
            .iter()
            .zip(closed.as_slice())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(diff / closed.norm_sqr().sqrt().max(f64::MIN_POSITIVE));
        if trial < 50 && check_steepest_ascent(&loss, &w, 200, seed ^ trial)? {
            ascent += 1;
        }
    }
    checks.push(Check::new(
        "LMS loss gradient is -conj(e) phi",
        worst <= WIRTINGER_TOL,
        format!("max relative error {worst:.2e} over 100 instances"),
    ));
    checks.push(Check::new(
        "conjugate gradient is the steepest ascent",
        ascent == 50,
        format!("{ascent}/50 trials"),
    ));
    Ok(checks)
}

pub fn kernel(n_points: usize, sigma: f64, dim: usize, seed: u64) -> Result<Vec<Check>> {
    let spec = KernelSpec::complex_gaussian(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..n_points)
        .map(|_| random_vec(&mut rng, dim, 1.0))
        .collect();
    let g = gram(&points, &spec)?;
    let trace: Complex64 = g.entries().diagonal().iter().sum();
    let min = min_eigenvalue(g.entries())?;
    let bound = -PSD_TOL * (1.0 + trace.norm());

    let real = KernelSpec::real_gaussian(sigma)?;
    let mut worst = 0.0f64;
    for _ in 0..n_points {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (x, y) = (ComplexVector::from_real(&x)?, ComplexVector::from_real(&y)?);
        let a = eval_complex_gaussian(&x, &y, &spec)?;
        let b = eval_real_gaussian(&x, &y, &real)?;
        worst = worst.max((a - Complex64::new(b, 0.0)).norm() / b);
    }

    Ok(vec![
        Check::new(
            "gram matrix is hermitian",
            is_hermitian(g.entries()),
            format!("{n_points} points in C^{dim}, sigma {sigma}"),
        ),
        Check::new(
            "gram matrix is positive semidefinite",
            min >= bound,
            format!(
                "min eigenvalue {min:.3e}, bound {bound:.3e}, trace {:.3e}",
                trace.re
            ),
        ),
        Check::new(
            "real inputs give the real gaussian kernel",
            worst <= RESTRICTION_TOL,
            format!("max relative error {worst:.1e}"),
        ),
    ])
}
