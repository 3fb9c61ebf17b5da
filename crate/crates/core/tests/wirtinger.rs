use cklms_core::kernel::KernelSpec;
use cklms_core::vector::inner;
use cklms_core::wirtinger::battery::scalar_cases;
use cklms_core::wirtinger::{
    check_inner_product_gradients, check_steepest_ascent, check_taylor_first_order, lms_loss,
    lms_loss_gradient, numeric_wirtinger_gradient, random_unit, taylor_first_order,
    ComplexFunctional, DEFAULT_STEP,
};
use cklms_core::{Complex64, ComplexVector, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_vec(rng: &mut impl Rng, dim: usize) -> ComplexVector {
    ComplexVector::new(
        (0..dim)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn scalar_battery_matches_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in scalar_cases() {
        let t = case.functional();
        for _ in 0..20 {
            let z = random_vec(&mut rng, 1);
            let g = numeric_wirtinger_gradient(&t, &z, DEFAULT_STEP).unwrap();
            let (dz, dzc) = (case.grads)(z[0]);
            let tol = 1e-6 * (1.0 + dz.norm() + dzc.norm());
            assert!(
                (g.r_derivative[0] - dz).norm() <= tol,
                "{} d/dz at {}",
                case.name,
                z[0]
            );
            assert!(
                (g.conj_r_derivative[0] - dzc).norm() <= tol,
                "{} d/dz* at {}",
                case.name,
                z[0]
            );
            if case.real_valued {
                // For real T, ∂T/∂z* = conj(∂T/∂z).
                assert!((g.conj_r_derivative[0] - g.r_derivative[0].conj()).norm() <= tol);
            }
        }
    }
}

#[test]
fn holomorphic_functions_have_zero_conjugate_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let t = ComplexFunctional::new(3, |z| (z[0] * z[1]).exp() + z[2].sin() * z[0]);
    let anti = ComplexFunctional::new(3, |z| (z[0].conj() * z[1].conj()).exp() + z[2].conj().cos());
    for _ in 0..20 {
        let z = random_vec(&mut rng, 3);
        let g = numeric_wirtinger_gradient(&t, &z, DEFAULT_STEP).unwrap();
        let h = numeric_wirtinger_gradient(&anti, &z, DEFAULT_STEP).unwrap();
        for k in 0..3 {
            assert!(g.conj_r_derivative[k].norm() <= 1e-8);
            assert!(h.r_derivative[k].norm() <= 1e-8);
        }
        let want = (z[0] * z[1]).exp() * z[1] + z[2].sin();
        assert!((g.r_derivative[0] - want).norm() <= 1e-7 * (1.0 + want.norm()));
    }
}

#[test]
fn inner_product_rules_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for dim in [1, 3, 6] {
        let w = random_vec(&mut rng, dim);
        let probe = random_vec(&mut rng, dim);
        let dev = check_inner_product_gradients(&w, &probe, DEFAULT_STEP).unwrap();
        assert!(dev <= 1e-8, "dim {dim}: {dev}");
    }
}

#[test]
fn kernel_gradient_in_its_second_argument() {
    // κ(z, w) depends on w only through conj(w):
    // ∂κ/∂w* = 2(z − conj w) κ / σ² and ∂κ/∂w = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let spec = KernelSpec::complex_gaussian(2.0).unwrap();
    let z = random_vec(&mut rng, 2);
    let zs = z.as_slice().to_vec();
    let t = ComplexFunctional::new(2, move |w| spec.eval(&zs, w));
    let w = random_vec(&mut rng, 2);
    let g = numeric_wirtinger_gradient(&t, &w, DEFAULT_STEP).unwrap();
    let k = spec.eval(z.as_slice(), w.as_slice());
    for i in 0..2 {
        let want = (z[i] - w[i].conj()) * k * 2.0 / 4.0;
        assert!((g.conj_r_derivative[i] - want).norm() <= 1e-8);
        assert!(g.r_derivative[i].norm() <= 1e-8);
    }
}

#[test]
fn taylor_residual_is_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let t = ComplexFunctional::new(3, |z| z[0] * z[1].conj() * z[2] + z[0].conj().powi(2));
    for _ in 0..10 {
        let z = random_vec(&mut rng, 3);
        let dir = ComplexVector::new(random_unit(&mut rng, 3)).unwrap();
        let big = check_taylor_first_order(&t, &z, &dir.scale(1e-3)).unwrap();
        let small = check_taylor_first_order(&t, &z, &dir.scale(1e-4)).unwrap();
        let ratio = big / small;
        assert!((70.0..=130.0).contains(&ratio), "ratio {ratio}");
        let linear = taylor_first_order(&t, &z, &dir.scale(1e-3), DEFAULT_STEP).unwrap();
        assert!((linear - t.eval(&z).unwrap()).norm() > 10.0 * big);
    }
}

#[test]
fn conjugate_gradient_is_the_steepest_ascent_of_the_lms_loss() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for trial in 0..10 {
        let phi = random_vec(&mut rng, 4);
        let d = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let w = random_vec(&mut rng, 4);
        let loss = lms_loss(&phi, d);
        assert!(check_steepest_ascent(&loss, &w, 200, trial).unwrap());
    }
}

#[test]
fn lms_loss_gradient_has_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..100 {
        let phi = random_vec(&mut rng, 3);
        let d = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let w = random_vec(&mut rng, 3);
        let numeric = numeric_wirtinger_gradient(&lms_loss(&phi, d), &w, DEFAULT_STEP).unwrap();
        let closed = lms_loss_gradient(&phi, d, &w).unwrap();
        let e = d - inner(phi.as_slice(), w.as_slice());
        for k in 0..3 {
            assert!((numeric.conj_r_derivative[k] - closed[k]).norm() <= 1e-8);
            assert!((closed[k] + e.conj() * phi[k]).norm() <= 1e-15);
        }
    }
}
