mod common;

use lattice_cft_core::theta::{
    canonical_theta, classical_automorphy, convergence_slope, heat_equation_residual, theta, theta_space_dimension,
    theta_with_radius, FiniteDifference, HeisenbergAction, SiegelPoint, ThetaSpec, DEFAULT_STEP,
};
use lattice_cft_core::Rational;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_tau<R: Rng>(g: usize, rng: &mut R) -> SiegelPoint {
    loop {
        let mut m = nalgebra::DMatrix::from_element(g, g, c(0.0, 0.0));
        for i in 0..g {
            for j in i..g {
                let x = rng.gen_range(-0.5..0.5);
                let y = if i == j { rng.gen_range(0.8..1.5) } else { rng.gen_range(-0.2..0.2) };
                m[(i, j)] = c(x, y);
                m[(j, i)] = c(x, y);
            }
        }
        if let Ok(t) = SiegelPoint::new(m) {
            if t.lambda_min() >= 0.5 {
                return t;
            }
        }
    }
}

fn random_z<R: Rng>(g: usize, rng: &mut R) -> Vec<Complex64> {
    (0..g).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5))).collect()
}

/// Plain double loop over `|n| ≤ 20`.
fn theta3_direct(tau: f64) -> f64 {
    (-20i32..=20).map(|n| (-std::f64::consts::PI * tau * (n * n) as f64).exp()).sum()
}

#[test]
fn theta3_matches_direct_sum() {
    let tau = SiegelPoint::imaginary_identity(1);
    let v = theta(&ThetaSpec::zero(1), &[c(0.0, 0.0)], &tau, 1e-12).unwrap();
    assert!((v.value.re - theta3_direct(1.0)).abs() < 1e-9);
    assert!((v.value.re - 1.086_434_811_213_308).abs() < 1e-9);
}

#[test]
fn quasi_periodicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in 1..=2 {
        let tau = random_tau(g, &mut rng);
        let spec = ThetaSpec::with_characteristic(
            (0..g).map(|i| Rational::new(i as i64 + 1, 3)).collect(),
            (0..g).map(|_| Rational::new(1, 2)).collect(),
        )
        .unwrap();
        let act = HeisenbergAction::new(&tau);
        for _ in 0..20 {
            let z = random_z(g, &mut rng);
            let m: Vec<i64> = (0..g).map(|_| rng.gen_range(-2..=2)).collect();
            let n: Vec<i64> = (0..g).map(|_| rng.gen_range(-2..=2)).collect();
            let lam = tau.lattice_vector(&m, &n);
            let shifted: Vec<Complex64> = z.iter().zip(&lam).map(|(a, b)| a + b).collect();
            let base = theta(&spec, &z, &tau, 1e-14).unwrap().value;
            let moved = theta(&spec, &shifted, &tau, 1e-14).unwrap().value;
            let predicted = classical_automorphy(&spec, &m, &n, &z, &tau) * base;
            assert!((moved - predicted).norm() < 1e-8 * predicted.norm().max(1.0));
            let f = |w: &[Complex64]| canonical_theta(&spec, w, &tau, 1e-14).unwrap();
            let lhs = act.translate(&lam, f, &z);
            let rhs = act.semicharacter(&spec, &m, &n) * f(&z);
            assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
        }
    }
}

#[test]
fn heisenberg_cocycle_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for g in 1..=3 {
        let tau = random_tau(g, &mut rng);
        let act = HeisenbergAction::new(&tau);
        let f = |w: &[Complex64]| w.iter().enumerate().map(|(i, x)| x * (i as f64 + 1.0)).sum::<Complex64>().exp();
        for _ in 0..100 {
            let v1 = random_z(g, &mut rng);
            let v2 = random_z(g, &mut rng);
            let w = random_z(g, &mut rng);
            let sum: Vec<Complex64> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
            let composed = act.translate(&v1, |x: &[Complex64]| act.translate(&v2, f, x), &w);
            let direct = act.cocycle(&v1, &v2) * act.translate(&sum, f, &w);
            assert!((composed - direct).norm() < 1e-10 * direct.norm().max(1.0));
        }
        let zero = vec![c(0.0, 0.0); g];
        let w = random_z(g, &mut rng);
        assert!((act.translate(&zero, f, &w) - f(&w)).norm() < 1e-15);
    }
}

#[test]
fn heat_equation_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let g = rng.gen_range(1..=2);
        let tau = random_tau(g, &mut rng);
        let z = random_z(g, &mut rng);
        let spec = ThetaSpec::zero(g);
        let r = heat_equation_residual(&spec, &z, &tau, DEFAULT_STEP, FiniteDifference::Richardson).unwrap();
        assert!(r < 1e-6, "{r}");
    }
    let tau = SiegelPoint::imaginary_identity(1);
    let z = [c(0.3, 0.2)];
    let hs = [0.08, 0.04, 0.02, 0.01];
    let rs: Vec<f64> = hs
        .iter()
        .map(|&h| heat_equation_residual(&ThetaSpec::zero(1), &z, &tau, h, FiniteDifference::Central).unwrap())
        .collect();
    let slope = convergence_slope(&hs, &rs);
    assert!((1.8..=2.2).contains(&slope), "{slope}");
}

#[test]
fn dimensions_match_heisenberg_irreps() {
    use lattice_cft_core::heisenberg::schroedinger_irrep;
    use lattice_cft_core::lattice::{catalog, discriminant_group};
    use lattice_cft_core::surface::Surface;
    for (pol, lat) in [(vec![2u64], catalog::a(1)), (vec![3], catalog::a(2)), (vec![4], catalog::a(3))] {
        let d = theta_space_dimension(&pol).unwrap();
        let rep = schroedinger_irrep(&discriminant_group(&lat), &Surface::closed(1)).unwrap();
        assert_eq!(d.numerical_rank, rep.dimension());
    }
    for pol in [vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 2], vec![1, 1, 2]] {
        let d = theta_space_dimension(&pol).unwrap();
        assert_eq!(d.numerical_rank as u64, pol.iter().product::<u64>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncation_is_honest(seed in any::<u64>(), g in 1usize..=2, tol_exp in 4i32..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_tau(g, &mut rng);
        let z = random_z(g, &mut rng);
        let spec = ThetaSpec::zero(g);
        let v = theta(&spec, &z, &tau, 10f64.powi(-tol_exp)).unwrap();
        let wider = theta_with_radius(&spec, &z, &tau, v.radius + 2);
        prop_assert!((wider.value - v.value).norm() < v.error_bound() + wider.rounding_bound);
    }

    #[test]
    fn integer_shift_invariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_tau(2, &mut rng);
        let z = random_z(2, &mut rng);
        let spec = ThetaSpec::zero(2);
        let mut z1 = z.clone();
        z1[1] += 1.0;
        let a = theta(&spec, &z, &tau, 1e-13).unwrap().value;
        let b = theta(&spec, &z1, &tau, 1e-13).unwrap().value;
        prop_assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
    }
}

