mod common;

use common::{cis, dual_cosets, to_f64};
use lattice_cft_core::lattice::{catalog, discriminant_group, gauss_sum, EvenLattice};
use lattice_cft_core::modular::{
    block_dimension, fusion_is_associative, fusion_rules, genus1_mcg_rep, random_connected_surface, random_labels,
    random_split, s_matrix, t_matrix, verify_factorization, verify_tensor_duality, verlinde_check,
};
use lattice_cft_core::surface::{BlockLabel, Orientation, Surface};
use lattice_cft_core::Rational;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_lattices() -> Vec<(&'static str, EvenLattice)> {
    catalog::bundled().into_iter().filter(|(_, l)| l.det() <= 16).collect()
}

fn gram_rows(l: &EvenLattice) -> Vec<Vec<i64>> {
    l.gram().to_rows()
}

#[test]
fn sphere_normalization() {
    for (_, l) in catalog::bundled() {
        let disc = discriminant_group(&l);
        assert_eq!(block_dimension(&Surface::sphere(), &BlockLabel::new(), &disc).unwrap(), 1);
    }
}

#[test]
fn factorization_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, l) in small_lattices() {
        let disc = discriminant_group(&l);
        for _ in 0..40 {
            let s = random_connected_surface(rng.gen_range(0..=3), rng.gen_range(0..=4), &mut rng);
            let split = random_split(&s, &mut rng);
            let labels = random_labels(&s, &disc, 0.7, &mut rng);
            let r = verify_factorization(&s, &split, &labels, &disc, false).unwrap();
            assert!(r.equal(), "{name}: {s:?} {split:?}");
        }
    }
}

#[test]
fn tensor_duality_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (_, l) in small_lattices() {
        let disc = discriminant_group(&l);
        for _ in 0..10 {
            let s1 = random_connected_surface(rng.gen_range(0..=2), rng.gen_range(0..=3), &mut rng);
            let mut s2 = random_connected_surface(rng.gen_range(0..=2), rng.gen_range(0..=3), &mut rng);
            s2 = Surface::new(
                s2.components()
                    .iter()
                    .map(|c| {
                        let mut c = c.clone();
                        for b in &mut c.boundaries {
                            b.id = format!("t{}", b.id);
                        }
                        c
                    })
                    .collect(),
            )
            .unwrap();
            let l1 = random_labels(&s1, &disc, 0.5, &mut rng);
            let l2 = random_labels(&s2, &disc, 0.5, &mut rng);
            assert!(verify_tensor_duality(&s1, &l1, &s2, &l2, &disc).unwrap().holds());
        }
    }
}

/// Basis-free comparison against modular data built from `G⁻¹Z^r / Z^r` directly.
#[test]
fn modular_data_against_coset_oracle() {
    for l in [catalog::a(1), catalog::a(2), catalog::d(4), catalog::e(8), catalog::a(1).direct_sum(&catalog::a(2))] {
        let cosets = dual_cosets(&gram_rows(&l));
        let n = cosets.len();
        assert_eq!(n as i64, l.det());
        let pair = |x: &[Rational], y: &[Rational]| -> Rational {
            let mut acc = Rational::from_integer(0);
            let g = gram_rows(&l);
            for i in 0..x.len() {
                for j in 0..x.len() {
                    acc += x[i] * Rational::from_integer(g[i][j]) * y[j];
                }
            }
            acc
        };
        let norm = 1.0 / (n as f64).sqrt();
        let s = nalgebra::DMatrix::from_fn(n, n, |i, j| cis(-to_f64(pair(&cosets[i].0, &cosets[j].0))) * norm);
        let t = nalgebra::DMatrix::from_fn(n, n, |i, j| if i == j { cis(to_f64(cosets[i].1) / 2.0) } else { Complex64::new(0.0, 0.0) });
        let gauss: Complex64 = cosets.iter().map(|(_, q)| cis(to_f64(*q) / 2.0)).sum();
        let disc = discriminant_group(&l);
        let g = gauss_sum(&disc);
        assert!((g.value - gauss).norm() < 1e-9);
        let sigma = (gauss.arg() / (std::f64::consts::PI / 4.0)).round().rem_euclid(8.0) as u8;
        assert_eq!(g.sigma, sigma);
        let st = &s * &t;
        let lhs = &st * &st * &st;
        let rhs = (&s * &s) * cis(sigma as f64 / 8.0);
        assert!((lhs - rhs).iter().all(|x| x.norm() < 1e-9));

        let ms = s_matrix(&disc);
        let mt = t_matrix(&disc);
        assert!((ms.trace() - s.trace()).norm() < 1e-9);
        assert!((mt.trace() - t.trace()).norm() < 1e-9);
        assert!(((&ms * &mt).trace() - st.trace()).norm() < 1e-9);
        let mut q1: Vec<Rational> = cosets.iter().map(|c| c.1).collect();
        let mut q2: Vec<Rational> = disc.elements().map(|a| disc.quadratic(&a)).collect();
        q1.sort();
        q2.sort();
        assert_eq!(q1, q2);

        let r = genus1_mcg_rep(&disc);
        assert!(r.max_defect() < 1e-9);
    }
}

#[test]
fn fusion_is_group_law() {
    for (_, l) in small_lattices().into_iter().filter(|(_, l)| l.det() <= 8) {
        let disc = discriminant_group(&l);
        let n = fusion_rules(&disc);
        assert!(fusion_is_associative(&n));
        let elems: Vec<_> = disc.elements().collect();
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let k = disc.index_of(&disc.add(a, b));
                for c in 0..elems.len() {
                    assert_eq!(n[i][j][c], (c == k) as u128);
                }
            }
        }
    }
}

#[test]
fn verlinde_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lats = small_lattices();
    for _ in 0..500 {
        let (_, l) = &lats[rng.gen_range(0..lats.len())];
        let disc = discriminant_group(l);
        let s = random_connected_surface(rng.gen_range(0..=3), rng.gen_range(0..=4), &mut rng);
        let labels = random_labels(&s, &disc, 0.6, &mut rng);
        let r = verlinde_check(&s, &labels, &disc).unwrap();
        assert!(r.agrees() && r.deviation < 1e-6, "{r:?}");
    }
}

#[test]
fn closed_surface_dimensions() {
    let z3 = discriminant_group(&catalog::a(2));
    for g in 0..4 {
        assert_eq!(block_dimension(&Surface::closed(g), &BlockLabel::new(), &z3).unwrap(), 3u128.pow(g));
    }
    let pants = Surface::connected(0, &[("a", Orientation::In), ("b", Orientation::In), ("c", Orientation::Out)]).unwrap();
    let one = z3.generator(0);
    let two = z3.add(&one, &one);
    let l = BlockLabel::new().with("a", one.clone()).with("b", one).with("c", two);
    assert_eq!(block_dimension(&pants, &l, &z3).unwrap(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_holds(seed in any::<u64>(), which in 0usize..8) {
        let lats = small_lattices();
        let (_, l) = &lats[which % lats.len()];
        let disc = discriminant_group(l);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_connected_surface(rng.gen_range(0..=3), rng.gen_range(0..=4), &mut rng);
        let split = random_split(&s, &mut rng);
        let labels = random_labels(&s, &disc, 0.8, &mut rng);
        prop_assert!(verify_factorization(&s, &split, &labels, &disc, false).unwrap().equal());
    }
}
