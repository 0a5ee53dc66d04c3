mod common;

use common::{cw_homology, random_matching, random_piece};
use lattice_cft_core::lattice::{catalog, discriminant_group};
use lattice_cft_core::surface::{delta_obstruction, glue, BlockLabel, Orientation, Surface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn glued_homology_matches_cell_complex() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 50 {
        let a = random_piece("p", &mut rng);
        let two = rng.gen_bool(0.6);
        let pieces = if two { a.disjoint_union(&random_piece("q", &mut rng)).unwrap() } else { a.clone() };
        let matching = random_matching(&pieces, &mut rng);
        if matching.is_empty() {
            continue;
        }
        let glued = glue(&pieces, None, &matching).unwrap();
        let (components, h1) = cw_homology(&pieces, &matching);
        assert_eq!(glued.components().len(), components, "{pieces:?} {matching:?}");
        assert_eq!(glued.h1_rank(), h1, "{pieces:?} {matching:?}");
        assert_eq!(glued.euler_characteristic(), pieces.euler_characteristic());
        checked += 1;
    }
}

#[test]
fn two_piece_gluing_agrees_with_union() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let a = random_piece("p", &mut rng);
        let b = random_piece("q", &mut rng);
        let union = a.disjoint_union(&b).unwrap();
        let matching = random_matching(&union, &mut rng);
        assert_eq!(glue(&a, Some(&b), &matching).unwrap(), glue(&union, None, &matching).unwrap());
    }
}

#[test]
fn gluing_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let a = random_piece("a", &mut rng);
        let b = random_piece("b", &mut rng);
        let c = random_piece("c", &mut rng);
        let all = a.disjoint_union(&b).unwrap().disjoint_union(&c).unwrap();
        let m = random_matching(&all, &mut rng);
        let split = rng.gen_range(0..=m.len());
        let (first, second) = m.split_at(split);
        let stepwise = glue(&glue(&all, None, first).unwrap(), None, second).unwrap();
        let reversed = glue(&glue(&all, None, second).unwrap(), None, first).unwrap();
        let direct = glue(&all, None, &m).unwrap();
        assert_eq!(stepwise.shape(), direct.shape());
        assert_eq!(reversed.shape(), direct.shape());
    }
}

#[test]
fn delta_is_additive_under_gluing() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let disc = discriminant_group(&catalog::a(3));
    for _ in 0..100 {
        let pieces = random_piece("p", &mut rng).disjoint_union(&random_piece("q", &mut rng)).unwrap();
        let matching = random_matching(&pieces, &mut rng);
        let glued = glue(&pieces, None, &matching).unwrap();
        let mut labels = BlockLabel::new();
        for b in pieces.boundaries() {
            labels.insert(&b.id, disc.element_at(rng.gen_range(0..disc.order())));
        }
        for (x, y) in &matching {
            let a = labels.get(x).unwrap().clone();
            labels.insert(y, a);
        }
        let before = delta_obstruction(&pieces, &labels, &disc).unwrap();
        let after = delta_obstruction(&glued, &labels, &disc).unwrap();
        let sum = |v: &[_]| v.iter().fold(disc.zero(), |acc, d| disc.add(&acc, d));
        assert_eq!(sum(&before), sum(&after));
        if glued.is_connected() {
            assert_eq!(after[0], sum(&before));
        }
    }
}

#[test]
fn gluing_errors() {
    let s = Surface::connected(0, &[("x", Orientation::Out), ("y", Orientation::Out)]).unwrap();
    assert!(glue(&s, None, &[("x".into(), "y".into())]).is_err());
    assert!(glue(&s, None, &[("x".into(), "z".into())]).is_err());
}
