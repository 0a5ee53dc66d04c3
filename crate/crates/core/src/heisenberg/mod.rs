//! Finite Heisenberg groups `H̃ = H × U(1)` over a finite abelian group `H`
//! with a bilinear cocycle `c`, product `(x, m)(y, n) = (x + y, m + n + c(x, y))`.
//!
//! Phases are exact rationals mod 1. The commutator pairing is
//! `ω(x, y) = c(x, y) − c(y, x)`.

mod decompose;
mod rep;
mod subgroup;

pub use decompose::{check_induced_decomposition, DecompositionReport};
pub use rep::{
    induce_from_isotropic, schroedinger_irrep, stone_von_neumann, IntertwinerReport, Monomial,
    UnitaryRep, NULLSPACE_DIM_LIMIT,
};
pub use subgroup::{isotropic_subgroups, Splitting, Subgroup};

use alloc::vec::Vec;

use num_integer::Integer;
use thiserror::Error;

use crate::lattice::DiscriminantGroup;
use crate::phase::Phase;
use crate::surface::{intersection_pairing, HomologyClass, HomologyVector, Surface};

/// Largest `|H|` that is ever enumerated element by element.
pub const ENUMERATION_CAP: usize = 1 << 17;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subgroup is not isotropic: generators {0} and {1} do not commute")]
    NotIsotropic(usize, usize),
    #[error("phase assignment is not a splitting of the subgroup")]
    NotASplitting,
    #[error("surface has boundary; the Schrödinger model needs a closed surface")]
    NonclosedSurface,
    #[error("group of order {size} exceeds the enumeration cap {cap}")]
    GroupTooLarge { size: usize, cap: usize },
    #[error("cocycle entry ({0}, {1}) is not well defined on the group")]
    IllDefinedCocycle(usize, usize),
}

/// Which bilinear cocycle represents the intersection pairing `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cocycle {
    /// `c = S`, the literal product; commutator `2S`.
    Antisymmetric,
    /// `c(X, Y) = Σ b(x_{aᵢ}, y_{bᵢ})`; commutator `S`.
    Polarized,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeisenbergElement {
    pub x: Vec<i64>,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergGroup {
    moduli: Vec<i64>,
    /// `c_ij = cnum[i][j] / cden`.
    cnum: Vec<Vec<i64>>,
    cden: i64,
}

impl HeisenbergGroup {
    /// `⊕ Z/mᵢ` with cocycle matrix `c_ij`; requires `mᵢ·c_ij ≡ m_j·c_ij ≡ 0`.
    pub fn new(moduli: Vec<i64>, cocycle: &[Vec<Phase>]) -> Result<Self, HeisenbergError> {
        let n = moduli.len();
        if cocycle.len() != n {
            return Err(HeisenbergError::DimensionMismatch {
                expected: n,
                got: cocycle.len(),
            });
        }
        let cden = cocycle
            .iter()
            .flatten()
            .fold(1i64, |acc, p| acc.lcm(&p.denom()));
        let mut cnum = alloc::vec![alloc::vec![0i64; n]; n];
        for (i, row) in cocycle.iter().enumerate() {
            if row.len() != n {
                return Err(HeisenbergError::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, p) in row.iter().enumerate() {
                if !(*p * moduli[i]).is_zero() || !(*p * moduli[j]).is_zero() {
                    return Err(HeisenbergError::IllDefinedCocycle(i, j));
                }
                cnum[i][j] = *p.value().numer() * (cden / p.denom());
            }
        }
        Ok(HeisenbergGroup { moduli, cnum, cden })
    }

    /// `H₁(Σ; A)` in the fixed homology basis, flattened slot by slot.
    pub fn from_surface(s: &Surface, disc: &DiscriminantGroup, kind: Cocycle) -> Self {
        let pairing = intersection_pairing(s, disc);
        let k = disc.num_factors();
        let n = pairing.rank() * k;
        let moduli: Vec<i64> = (0..n).map(|i| disc.invariant_factors()[i % k]).collect();
        let mut c = alloc::vec![alloc::vec![Phase::ZERO; n]; n];
        let b = disc.bilinear_matrix();
        for &(sa, sb) in pairing.symplectic_pairs() {
            for j in 0..k {
                for l in 0..k {
                    c[sa * k + j][sb * k + l] = b[j][l];
                    if kind == Cocycle::Antisymmetric {
                        c[sb * k + j][sa * k + l] = -b[j][l];
                    }
                }
            }
        }
        HeisenbergGroup::new(moduli, &c).expect("intersection cocycle is well defined")
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    /// `|H|`, the order of the group modulo its circle.
    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    pub fn check_enumerable(&self) -> Result<(), HeisenbergError> {
        let size = self
            .moduli
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))
            .unwrap_or(usize::MAX);
        if size > ENUMERATION_CAP {
            Err(HeisenbergError::GroupTooLarge {
                size,
                cap: ENUMERATION_CAP,
            })
        } else {
            Ok(())
        }
    }

    /// Denominator shared by every cocycle value.
    pub fn cocycle_denominator(&self) -> i64 {
        self.cden
    }

    pub fn cocycle_matrix(&self) -> Vec<Vec<Phase>> {
        self.cnum
            .iter()
            .map(|row| row.iter().map(|&v| Phase::new(v, self.cden)).collect())
            .collect()
    }

    /// Numerator of `c(x, y)` over [`Self::cocycle_denominator`], reduced.
    pub fn cocycle_num(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = &self.cnum[i];
            let s: i64 = y.iter().zip(row).map(|(&yj, &c)| yj * c).sum();
            acc = (acc + xi * s).rem_euclid(self.cden);
        }
        acc
    }

    pub fn cocycle(&self, x: &[i64], y: &[i64]) -> Phase {
        Phase::new(self.cocycle_num(x, y), self.cden)
    }

    /// `ω(x, y) = c(x, y) − c(y, x)`.
    pub fn commutator_pairing(&self, x: &[i64], y: &[i64]) -> Phase {
        self.cocycle(x, y) - self.cocycle(y, x)
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.moduli).map(|(a, m)| a.rem_euclid(*m)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), m)| (a + b).rem_euclid(*m))
            .collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.moduli).map(|(a, m)| (-a).rem_euclid(*m)).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<i64> {
        let mut x = alloc::vec![0; self.rank()];
        x[i] = 1 % self.moduli[i];
        x
    }

    pub fn index_of(&self, x: &[i64]) -> usize {
        x.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (c, m)| acc * *m as usize + *c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Vec<i64> {
        let mut x = alloc::vec![0i64; self.rank()];
        for (slot, m) in x.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % *m as usize) as i64;
            index /= *m as usize;
        }
        x
    }

    pub fn identity(&self) -> HeisenbergElement {
        HeisenbergElement {
            x: alloc::vec![0; self.rank()],
            phase: Phase::ZERO,
        }
    }

    fn check_len(&self, x: &[i64]) -> Result<(), HeisenbergError> {
        if x.len() != self.rank() {
            return Err(HeisenbergError::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn element(&self, x: &[i64], phase: Phase) -> Result<HeisenbergElement, HeisenbergError> {
        self.check_len(x)?;
        Ok(HeisenbergElement {
            x: self.reduce(x),
            phase,
        })
    }

    /// `(x, m)·(y, n) = (x + y, m + n + c(x, y))`.
    pub fn mul(&self, a: &HeisenbergElement, b: &HeisenbergElement) -> Result<HeisenbergElement, HeisenbergError> {
        self.check_len(&a.x)?;
        self.check_len(&b.x)?;
        Ok(HeisenbergElement {
            x: self.add(&a.x, &b.x),
            phase: a.phase + b.phase + self.cocycle(&a.x, &b.x),
        })
    }

    /// `(x, m)⁻¹ = (−x, −m + c(x, x))`.
    pub fn inverse(&self, a: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement {
            x: self.neg(&a.x),
            phase: -a.phase + self.cocycle(&a.x, &a.x),
        }
    }

    pub fn commutator(&self, a: &HeisenbergElement, b: &HeisenbergElement) -> Result<HeisenbergElement, HeisenbergError> {
        let ab = self.mul(a, b)?;
        let ab_ai = self.mul(&ab, &self.inverse(a))?;
        self.mul(&ab_ai, &self.inverse(b))
    }

    /// Elements of `H` with `ω(x, ·) ≡ 0`, found by enumeration.
    pub fn radical(&self) -> Result<Subgroup, HeisenbergError> {
        self.check_enumerable()?;
        let units: Vec<Vec<i64>> = (0..self.rank()).map(|i| self.unit(i)).collect();
        let members: Vec<usize> = (0..self.order())
            .filter(|&i| {
                let x = self.element_at(i);
                units.iter().all(|u| self.commutator_pairing(&x, u).is_zero())
            })
            .collect();
        Ok(Subgroup::from_members(self, members))
    }

    /// `{x : ω(x, b) = 0 for all b ∈ B}`.
    pub fn perp(&self, b: &Subgroup) -> Result<Subgroup, HeisenbergError> {
        self.check_enumerable()?;
        let members: Vec<usize> = (0..self.order())
            .filter(|&i| {
                let x = self.element_at(i);
                b.generators().iter().all(|g| self.commutator_pairing(&x, g).is_zero())
            })
            .collect();
        Ok(Subgroup::from_members(self, members))
    }
}

/// Flatten a homology vector into group coordinates.
pub fn flatten(v: &HomologyVector) -> Vec<i64> {
    v.iter().flat_map(|g| g.coords.iter().copied()).collect()
}

/// Center of the Heisenberg group of `Σ`: the image of `H₁(∂Σ; A)`,
/// returned as generators in group coordinates (the circle is always central).
pub fn center(disc: &DiscriminantGroup, s: &Surface) -> Vec<Vec<i64>> {
    intersection_pairing(s, disc)
        .boundary_image_generators()
        .iter()
        .map(flatten)
        .collect()
}

/// Basis slots of the `a`-cycles, in group coordinates, for the closed genus-`g` surface.
pub(crate) fn lagrangian_slots(s: &Surface, want_a: bool) -> Vec<usize> {
    s.homology_basis()
        .iter()
        .enumerate()
        .filter(|(_, c)| match c {
            HomologyClass::A { .. } => want_a,
            HomologyClass::B { .. } => !want_a,
            HomologyClass::Boundary { .. } => false,
        })
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{catalog, discriminant_group};
    use crate::surface::Orientation;
    use alloc::vec;
    use proptest::prelude::*;

    fn torus_z2(kind: Cocycle) -> HeisenbergGroup {
        HeisenbergGroup::from_surface(&Surface::closed(1), &discriminant_group(&catalog::a(1)), kind)
    }

    #[test]
    fn identity_and_inverse() {
        let h = torus_z2(Cocycle::Antisymmetric);
        let x = h.element(&[1, 1], Phase::new(1, 4)).unwrap();
        assert_eq!(h.mul(&x, &h.identity()).unwrap(), x);
        assert_eq!(h.mul(&x, &h.inverse(&x)).unwrap(), h.identity());
        let bad = HeisenbergElement {
            x: vec![1],
            phase: Phase::ZERO,
        };
        assert_eq!(
            h.mul(&x, &bad),
            Err(HeisenbergError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn commutator_is_twice_s_for_literal_product() {
        let disc = discriminant_group(&catalog::a(2));
        let h = HeisenbergGroup::from_surface(&Surface::closed(1), &disc, Cocycle::Antisymmetric);
        let pairing = intersection_pairing(&Surface::closed(1), &disc);
        for i in 0..h.order() {
            for j in 0..h.order() {
                let (x, y) = (h.element_at(i), h.element_at(j));
                let xe = HeisenbergElement { x: x.clone(), phase: Phase::ZERO };
                let ye = HeisenbergElement { x: y.clone(), phase: Phase::ZERO };
                let comm = h.commutator(&xe, &ye).unwrap();
                let xs = vec![disc.reduce(&x[0..1]), disc.reduce(&x[1..2])];
                let ys = vec![disc.reduce(&y[0..1]), disc.reduce(&y[1..2])];
                let s = pairing.pair(&xs, &ys);
                assert_eq!(comm, HeisenbergElement { x: vec![0, 0], phase: s + s });
            }
        }
        // for A = Z/2 the literal product is commutative
        let h2 = torus_z2(Cocycle::Antisymmetric);
        assert!(h2.commutator_pairing(&[1, 0], &[0, 1]).is_zero());
        let p2 = torus_z2(Cocycle::Polarized);
        assert_eq!(p2.commutator_pairing(&[1, 0], &[0, 1]), Phase::new(1, 2));
    }

    #[test]
    fn centers() {
        let disc = discriminant_group(&catalog::a(2));
        let closed = HeisenbergGroup::from_surface(&Surface::closed(2), &disc, Cocycle::Polarized);
        assert_eq!(closed.radical().unwrap().order(), 1);
        assert!(center(&disc, &Surface::closed(2)).is_empty());

        let s = Surface::connected(0, &[("x", Orientation::Out), ("y", Orientation::In), ("z", Orientation::In)]).unwrap();
        let g0 = HeisenbergGroup::from_surface(&s, &disc, Cocycle::Polarized);
        assert_eq!(g0.radical().unwrap().order(), g0.order());

        let s = Surface::connected(1, &[("x", Orientation::Out), ("y", Orientation::In)]).unwrap();
        let h = HeisenbergGroup::from_surface(&s, &disc, Cocycle::Polarized);
        let rad = h.radical().unwrap();
        let gen = Subgroup::generated_by(&h, &center(&disc, &s)).unwrap();
        assert_eq!(rad, gen);
        assert_eq!(rad.order(), 3);
    }

    #[test]
    fn enumeration_cap() {
        let disc = discriminant_group(&catalog::scaled(8));
        let h = HeisenbergGroup::from_surface(&Surface::closed(3), &disc, Cocycle::Polarized);
        assert!(matches!(h.radical(), Err(HeisenbergError::GroupTooLarge { .. })));
    }

    proptest! {
        #[test]
        fn associativity_is_exact(
            lat_idx in 0usize..6,
            g in 0u32..=2,
            seeds in proptest::collection::vec(any::<u64>(), 6),
        ) {
            let lats = [catalog::a(1), catalog::a(2), catalog::a(3), catalog::d(4), catalog::scaled(2), catalog::a(1).direct_sum(&catalog::a(3))];
            let disc = discriminant_group(&lats[lat_idx]);
            for kind in [Cocycle::Antisymmetric, Cocycle::Polarized] {
                let h = HeisenbergGroup::from_surface(&Surface::closed(g), &disc, kind);
                let pick = |s: u64| HeisenbergElement {
                    x: h.element_at((s % h.order() as u64) as usize),
                    phase: Phase::new((s >> 32) as i64 % 12, 12),
                };
                let (a, b, c) = (pick(seeds[0]), pick(seeds[1]), pick(seeds[2]));
                let left = h.mul(&h.mul(&a, &b).unwrap(), &c).unwrap();
                let right = h.mul(&a, &h.mul(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }
        }
    }
}
