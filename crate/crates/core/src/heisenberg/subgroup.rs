//! Subgroups of `H`, isotropic subgroups and splittings over them.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::phase::Phase;
use crate::Rational;

use super::{HeisenbergError, HeisenbergGroup};

/// A subgroup of `H` stored as its sorted element indices plus generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<Vec<i64>>,
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(h: &HeisenbergGroup) -> Self {
        Subgroup {
            generators: Vec::new(),
            members: alloc::vec![h.index_of(&alloc::vec![0; h.rank()])],
        }
    }

    /// Closure of `gens` under addition.
    pub fn generated_by(h: &HeisenbergGroup, gens: &[Vec<i64>]) -> Result<Self, HeisenbergError> {
        h.check_enumerable()?;
        for g in gens {
            if g.len() != h.rank() {
                return Err(HeisenbergError::DimensionMismatch {
                    expected: h.rank(),
                    got: g.len(),
                });
            }
        }
        let gens: Vec<Vec<i64>> = gens.iter().map(|g| h.reduce(g)).collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let zero = alloc::vec![0i64; h.rank()];
        seen.insert(h.index_of(&zero));
        queue.push_back(zero);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = h.add(&x, g);
                if seen.insert(h.index_of(&y)) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup {
            generators: gens,
            members: seen.into_iter().collect(),
        })
    }

    /// Subgroup given by its full element list; every element is a generator.
    pub(crate) fn from_members(h: &HeisenbergGroup, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        let generators = minimal_generators(h, &members);
        Subgroup { generators, members }
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn contains(&self, h: &HeisenbergGroup, x: &[i64]) -> bool {
        self.contains_index(h.index_of(x))
    }

    pub fn is_isotropic(&self, h: &HeisenbergGroup) -> Result<(), HeisenbergError> {
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate().skip(i + 1) {
                if !h.commutator_pairing(a, b).is_zero() {
                    return Err(HeisenbergError::NotIsotropic(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn intersection(&self, other: &Subgroup, h: &HeisenbergGroup) -> Subgroup {
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&i| other.contains_index(i))
            .collect();
        Subgroup::from_members(h, members)
    }

    pub fn sum(&self, other: &Subgroup, h: &HeisenbergGroup) -> Result<Subgroup, HeisenbergError> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Subgroup::generated_by(h, &gens)
    }
}

/// Greedy generating set: add an element whenever it is not yet reached.
fn minimal_generators(h: &HeisenbergGroup, members: &[usize]) -> Vec<Vec<i64>> {
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut reached = BTreeSet::new();
    reached.insert(h.index_of(&alloc::vec![0; h.rank()]));
    for &m in members {
        if reached.contains(&m) {
            continue;
        }
        gens.push(h.element_at(m));
        // close up
        let mut frontier: Vec<usize> = reached.iter().copied().collect();
        while let Some(i) = frontier.pop() {
            let x = h.element_at(i);
            for g in &gens {
                let j = h.index_of(&h.add(&x, g));
                if reached.insert(j) {
                    frontier.push(j);
                }
            }
        }
    }
    gens
}

/// A function `χ: B → Q/Z` with `χ(b₁ + b₂) = χ(b₁) + χ(b₂) + c(b₁, b₂)`,
/// so that `b ↦ (b, χ(b))` is a homomorphism into `H̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    values: BTreeMap<usize, Phase>,
}

impl Splitting {
    /// Extend values on the generators of `b` to all of `b`, checking consistency.
    pub fn from_generator_values(
        h: &HeisenbergGroup,
        b: &Subgroup,
        values: &[Phase],
    ) -> Result<Self, HeisenbergError> {
        if values.len() != b.generators().len() {
            return Err(HeisenbergError::DimensionMismatch {
                expected: b.generators().len(),
                got: values.len(),
            });
        }
        b.is_isotropic(h)?;
        extend(h, b.generators(), values).map(|values| Splitting { values })
    }

    /// A canonical splitting built one generator at a time.
    pub fn default_for(h: &HeisenbergGroup, b: &Subgroup) -> Result<Self, HeisenbergError> {
        b.is_isotropic(h)?;
        let gens = b.generators();
        let mut values: Vec<Phase> = Vec::new();
        let mut current = extend(h, &[], &[])?;
        for (k, g) in gens.iter().enumerate() {
            let (n, ng) = first_multiple_inside(h, &current, g);
            let v = lift_value(h, g, n, current[&ng], 0);
            values.push(v);
            current = extend(h, &gens[..=k], &values)?;
        }
        Ok(Splitting { values: current })
    }

    /// Every splitting of `b`; there are `|b|` of them.
    pub fn all_for(h: &HeisenbergGroup, b: &Subgroup) -> Result<Vec<Self>, HeisenbergError> {
        b.is_isotropic(h)?;
        let gens = b.generators();
        let mut partial: Vec<(Vec<Phase>, BTreeMap<usize, Phase>)> = alloc::vec![(Vec::new(), extend(h, &[], &[])?)];
        for (k, g) in gens.iter().enumerate() {
            let mut next = Vec::new();
            for (vals, current) in &partial {
                let (n, ng) = first_multiple_inside(h, current, g);
                for t in 0..n {
                    let mut v = vals.clone();
                    v.push(lift_value(h, g, n, current[&ng], t));
                    let ext = extend(h, &gens[..=k], &v)?;
                    next.push((v, ext));
                }
            }
            partial = next;
        }
        Ok(partial
            .into_iter()
            .map(|(_, values)| Splitting { values })
            .collect())
    }

    pub fn value(&self, index: usize) -> Option<Phase> {
        self.values.get(&index).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Phase)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Denominator shared by all values.
    pub fn denominator(&self) -> i64 {
        use num_integer::Integer;
        self.values.values().fold(1i64, |acc, p| acc.lcm(&p.denom()))
    }

    /// Whether `self` and `other` agree on every element of `on`.
    pub fn agrees_on(&self, other: &Splitting, on: &Subgroup) -> bool {
        on.members()
            .iter()
            .all(|&i| self.value(i) == other.value(i))
    }
}

/// Smallest `n ≥ 1` with `n·g` already in the domain of `current`.
fn first_multiple_inside(h: &HeisenbergGroup, current: &BTreeMap<usize, Phase>, g: &[i64]) -> (usize, usize) {
    let mut acc = h.reduce(g);
    let mut n = 1usize;
    loop {
        let i = h.index_of(&acc);
        if current.contains_key(&i) {
            return (n, i);
        }
        acc = h.add(&acc, g);
        n += 1;
    }
}

/// Solve `n·v + c(g,g)·n(n−1)/2 = target` for `v`, choosing the `t`-th root.
fn lift_value(h: &HeisenbergGroup, g: &[i64], n: usize, target: Phase, t: usize) -> Phase {
    let n = n as i64;
    let cgg = h.cocycle(g, g).value();
    let rhs = target.value() - cgg * Rational::from_integer(n * (n - 1) / 2) + Rational::from_integer(t as i64);
    Phase::from_rational(rhs / Rational::from_integer(n))
}

/// Breadth-first extension `χ(x + g) = χ(x) + χ(g) + c(x, g)`.
fn extend(h: &HeisenbergGroup, gens: &[Vec<i64>], values: &[Phase]) -> Result<BTreeMap<usize, Phase>, HeisenbergError> {
    let mut out = BTreeMap::new();
    let zero = alloc::vec![0i64; h.rank()];
    out.insert(h.index_of(&zero), Phase::ZERO);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        let chi_x = out[&h.index_of(&x)];
        for (g, &v) in gens.iter().zip(values) {
            let y = h.add(&x, g);
            let val = chi_x + v + h.cocycle(&x, g);
            match out.get(&h.index_of(&y)) {
                Some(&old) if old != val => return Err(HeisenbergError::NotASplitting),
                Some(_) => {}
                None => {
                    out.insert(h.index_of(&y), val);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(out)
}

/// All isotropic subgroups of `H`, in order of discovery (by size, then
/// lexicographically by generating element).
pub fn isotropic_subgroups(h: &HeisenbergGroup) -> Result<Vec<Subgroup>, HeisenbergError> {
    h.check_enumerable()?;
    let mut found: Vec<Subgroup> = alloc::vec![Subgroup::trivial(h)];
    let mut keys: BTreeSet<Vec<usize>> = BTreeSet::new();
    keys.insert(found[0].members.clone());
    let mut cursor = 0;
    while cursor < found.len() {
        let s = found[cursor].clone();
        cursor += 1;
        let perp = h.perp(&s)?;
        for &i in perp.members() {
            if s.contains_index(i) {
                continue;
            }
            let x = h.element_at(i);
            let mut gens = s.generators.clone();
            gens.push(x);
            let t = Subgroup::generated_by(h, &gens)?;
            if keys.insert(t.members.clone()) {
                found.push(t);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::Cocycle;
    use crate::lattice::{catalog, discriminant_group};
    use crate::surface::Surface;

    fn torus(l: &crate::EvenLattice) -> HeisenbergGroup {
        HeisenbergGroup::from_surface(&Surface::closed(1), &discriminant_group(l), Cocycle::Polarized)
    }

    #[test]
    fn generated_orders() {
        let h = torus(&catalog::scaled(2));
        assert_eq!(Subgroup::generated_by(&h, &[alloc::vec![1, 0]]).unwrap().order(), 4);
        assert_eq!(Subgroup::generated_by(&h, &[alloc::vec![2, 2]]).unwrap().order(), 2);
        assert_eq!(Subgroup::generated_by(&h, &[alloc::vec![1, 0], alloc::vec![0, 1]]).unwrap().order(), 16);
    }

    #[test]
    fn isotropic_subgroup_counts() {
        // F_2² with the symplectic form: trivial, three lines
        assert_eq!(isotropic_subgroups(&torus(&catalog::a(1))).unwrap().len(), 4);
        // F_3²: trivial and four lines
        assert_eq!(isotropic_subgroups(&torus(&catalog::a(2))).unwrap().len(), 5);
    }

    #[test]
    fn splittings() {
        let h = torus(&catalog::scaled(2));
        let full = Subgroup::generated_by(&h, &[alloc::vec![1, 0], alloc::vec![0, 1]]).unwrap();
        assert!(matches!(Splitting::default_for(&h, &full), Err(HeisenbergError::NotIsotropic(0, 1))));
        let lag = Subgroup::generated_by(&h, &[alloc::vec![1, 0]]).unwrap();
        let all = Splitting::all_for(&h, &lag).unwrap();
        assert_eq!(all.len(), 4);
        let chi = Splitting::default_for(&h, &lag).unwrap();
        assert!(all.contains(&chi));
        assert_eq!(
            Splitting::from_generator_values(&h, &lag, &[Phase::new(1, 3)]),
            Err(HeisenbergError::NotASplitting)
        );
        assert!(Splitting::from_generator_values(&h, &lag, &[Phase::new(1, 4)]).is_ok());
    }

    #[test]
    fn splitting_rule_holds_on_all_pairs() {
        for kind in [Cocycle::Antisymmetric, Cocycle::Polarized] {
            let disc = discriminant_group(&catalog::scaled(2));
            let h = HeisenbergGroup::from_surface(&Surface::closed(1), &disc, kind);
            for b in isotropic_subgroups(&h).unwrap() {
                for chi in Splitting::all_for(&h, &b).unwrap() {
                    for &i in b.members() {
                        for &j in b.members() {
                            let (x, y) = (h.element_at(i), h.element_at(j));
                            let k = h.index_of(&h.add(&x, &y));
                            let lhs = chi.value(k).unwrap();
                            let rhs = chi.value(i).unwrap() + chi.value(j).unwrap() + h.cocycle(&x, &y);
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}
