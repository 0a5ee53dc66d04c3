//! Exact check that an induced representation decomposes into
//! irreducibles of `H̃` as predicted, via characters over `Z[ζ_N]`.
//!
//! Irreducibles with the standard circle action are labelled by splittings
//! `ζ` of the radical `Z`; their characters are
//! `√|H/Z|·e^{−2πiζ(x)}·1_Z(x)`. Inducing from `(B, χ)` yields each `ζ`
//! agreeing with `χ` on `B ∩ Z`, with multiplicity `√(|B^⊥| / |B + Z|)`.

use alloc::vec::Vec;

use num_integer::{Integer, Roots};

use crate::cyclotomic::Cyclotomic;

use super::{induce_from_isotropic, HeisenbergError, HeisenbergGroup, Splitting, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub induced_dimension: usize,
    pub irrep_dimension: usize,
    pub multiplicity: usize,
    pub constituents: usize,
    /// Number of group elements where the two characters differ.
    pub mismatches: usize,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0 && self.induced_dimension == self.multiplicity * self.constituents * self.irrep_dimension
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn check_induced_decomposition(
    h: &HeisenbergGroup,
    b: &Subgroup,
    chi: &Splitting,
) -> Result<DecompositionReport, HeisenbergError> {
    let induced = induce_from_isotropic(h, b, chi)?;
    let z = h.radical()?;
    let bz = b.intersection(&z, h);
    let b_perp = h.perp(b)?;
    let b_plus_z = b.sum(&z, h)?;
    let irrep_dimension = exact_sqrt(h.order() / z.order()).ok_or(HeisenbergError::NotASplitting)?;
    let multiplicity = if b_perp.order() % b_plus_z.order() == 0 {
        exact_sqrt(b_perp.order() / b_plus_z.order())
    } else {
        None
    };
    let constituents: Vec<Splitting> = Splitting::all_for(h, &z)?
        .into_iter()
        .filter(|zeta| zeta.agrees_on(chi, &bz))
        .collect();

    let mut n = induced.rep.root_order();
    for zeta in &constituents {
        n = n.lcm(&(zeta.denominator() as u64));
    }
    let lhs = induced.rep.characters_exact(n)?;
    let m = multiplicity.unwrap_or(0) as i64;
    let mut mismatches = 0;
    for (idx, l) in lhs.into_iter().enumerate() {
        let mut r = Cyclotomic::zero(n as usize);
        if z.contains_index(idx) {
            for zeta in &constituents {
                let p = zeta.value(idx).expect("ζ is defined on Z");
                let e = *p.value().numer() * (n as i64 / p.denom());
                r.add_root(-e, m * irrep_dimension as i64);
            }
        }
        if l != r {
            mismatches += 1;
        }
    }
    Ok(DecompositionReport {
        induced_dimension: induced.rep.dimension(),
        irrep_dimension,
        multiplicity: multiplicity.unwrap_or(0),
        constituents: constituents.len(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{isotropic_subgroups, Cocycle};
    use crate::lattice::{catalog, discriminant_group};
    use crate::surface::{Orientation, Surface};

    #[test]
    fn all_isotropic_subgroups_of_small_tori() {
        for l in [catalog::a(1), catalog::a(2), catalog::scaled(2), catalog::d(4)] {
            let disc = discriminant_group(&l);
            let h = HeisenbergGroup::from_surface(&Surface::closed(1), &disc, Cocycle::Polarized);
            for b in isotropic_subgroups(&h).unwrap() {
                for chi in Splitting::all_for(&h, &b).unwrap() {
                    let rep = check_induced_decomposition(&h, &b, &chi).unwrap();
                    assert!(rep.holds(), "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn degenerate_groups_with_boundary() {
        let disc = discriminant_group(&catalog::a(1));
        let s = Surface::connected(1, &[("x", Orientation::Out), ("y", Orientation::In)]).unwrap();
        let h = HeisenbergGroup::from_surface(&s, &disc, Cocycle::Polarized);
        for b in isotropic_subgroups(&h).unwrap() {
            let chi = Splitting::default_for(&h, &b).unwrap();
            let rep = check_induced_decomposition(&h, &b, &chi).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
        // regular representation: every central character appears
        let triv = Subgroup::trivial(&h);
        let rep = check_induced_decomposition(&h, &triv, &Splitting::default_for(&h, &triv).unwrap()).unwrap();
        assert_eq!(rep.constituents, 2);
        assert_eq!(rep.multiplicity, 2);
    }

    #[test]
    fn wrong_multiplicity_is_detected() {
        // sanity: corrupt the induced character by comparing against a different splitting
        let disc = discriminant_group(&catalog::a(1));
        let s = Surface::connected(0, &[("x", Orientation::Out), ("y", Orientation::In)]).unwrap();
        let h = HeisenbergGroup::from_surface(&s, &disc, Cocycle::Polarized);
        let all = Subgroup::generated_by(&h, &[alloc::vec![1]]).unwrap();
        let chis = Splitting::all_for(&h, &all).unwrap();
        assert_eq!(chis.len(), 2);
        for chi in &chis {
            let rep = check_induced_decomposition(&h, &all, chi).unwrap();
            assert!(rep.holds());
            assert_eq!(rep.constituents, 1);
        }
    }
}
