//! Combinatorial oriented surfaces with parametrized boundary circles.
//!
//! A surface is a list of connected components, each recorded by its genus
//! and its boundary circles. Homology is taken in the fixed basis
//! `a₁, b₁, …, a_g, b_g` per component followed by the boundary-parallel
//! classes of every circle but the last one on that component.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::{DiscriminantGroup, GroupElement};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    In,
    Out,
}

impl Orientation {
    /// `+1` for outgoing, `−1` for incoming.
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Out => 1,
            Orientation::In => -1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Out => Orientation::In,
            Orientation::In => Orientation::Out,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub id: String,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub genus: u32,
    pub boundaries: Vec<Boundary>,
}

impl Component {
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundaries.len() as i64
    }

    pub fn h1_rank(&self) -> usize {
        2 * self.genus as usize + self.boundaries.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("circle id {0:?} appears more than once")]
    DuplicateCircle(String),
    #[error("unknown boundary circle {0:?}")]
    UnknownCircle(String),
    #[error("circles {0:?} and {1:?} must have opposite orientations")]
    OrientationMismatch(String, String),
    #[error("circle {0:?} is glued more than once")]
    CircleReused(String),
    #[error("boundary circle {0:?} has no label")]
    MissingLabel(String),
    #[error("label for circle {0:?} is not an element of the discriminant group")]
    InvalidLabel(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Surface {
    components: Vec<Component>,
}

impl Surface {
    pub fn new(components: Vec<Component>) -> Result<Self, SurfaceError> {
        let mut seen = BTreeSet::new();
        for b in components.iter().flat_map(|c| &c.boundaries) {
            if !seen.insert(b.id.clone()) {
                return Err(SurfaceError::DuplicateCircle(b.id.clone()));
            }
        }
        Ok(Surface { components })
    }

    /// Connected surface of genus `g` with the given circles.
    pub fn connected(genus: u32, boundaries: &[(&str, Orientation)]) -> Result<Self, SurfaceError> {
        Surface::new(alloc::vec![Component {
            genus,
            boundaries: boundaries
                .iter()
                .map(|(id, o)| Boundary {
                    id: String::from(*id),
                    orientation: *o,
                })
                .collect(),
        }])
    }

    pub fn closed(genus: u32) -> Self {
        Surface::connected(genus, &[]).unwrap()
    }

    pub fn sphere() -> Self {
        Surface::closed(0)
    }

    pub fn empty() -> Self {
        Surface::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_closed(&self) -> bool {
        self.components.iter().all(|c| c.boundaries.is_empty())
    }

    pub fn boundaries(&self) -> impl Iterator<Item = &Boundary> {
        self.components.iter().flat_map(|c| &c.boundaries)
    }

    pub fn boundary(&self, id: &str) -> Option<(usize, &Boundary)> {
        self.components
            .iter()
            .enumerate()
            .find_map(|(k, c)| c.boundaries.iter().find(|b| b.id == id).map(|b| (k, b)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(Component::euler_characteristic).sum()
    }

    pub fn h1_rank(&self) -> usize {
        self.components.iter().map(Component::h1_rank).sum()
    }

    pub fn total_genus(&self) -> u32 {
        self.components.iter().map(|c| c.genus).sum()
    }

    /// Same surface with every circle's orientation flipped.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        for b in out.components.iter_mut().flat_map(|c| c.boundaries.iter_mut()) {
            b.orientation = b.orientation.reversed();
        }
        out
    }

    pub fn disjoint_union(&self, other: &Surface) -> Result<Self, SurfaceError> {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        Surface::new(comps)
    }

    /// `(genus, boundary count)` per component, sorted.
    pub fn shape(&self) -> Vec<(u32, usize)> {
        let mut v: Vec<(u32, usize)> = self
            .components
            .iter()
            .map(|c| (c.genus, c.boundaries.len()))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn homology_basis(&self) -> Vec<HomologyClass> {
        let mut basis = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for i in 0..c.genus as usize {
                basis.push(HomologyClass::A { component: k, index: i });
                basis.push(HomologyClass::B { component: k, index: i });
            }
            let n = c.boundaries.len();
            for b in c.boundaries.iter().take(n.saturating_sub(1)) {
                basis.push(HomologyClass::Boundary {
                    component: k,
                    circle: b.id.clone(),
                });
            }
        }
        basis
    }

    /// Integer intersection numbers on the homology basis.
    pub fn intersection_numbers(&self) -> Vec<Vec<i64>> {
        let basis = self.homology_basis();
        basis
            .iter()
            .map(|x| basis.iter().map(|y| x.intersect(y)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HomologyClass {
    A { component: usize, index: usize },
    B { component: usize, index: usize },
    Boundary { component: usize, circle: String },
}

impl HomologyClass {
    /// Algebraic intersection number `x ∩ y`.
    pub fn intersect(&self, other: &HomologyClass) -> i64 {
        use HomologyClass::{A, B};
        match (self, other) {
            (A { component: c1, index: i }, B { component: c2, index: j }) if c1 == c2 && i == j => 1,
            (B { component: c1, index: i }, A { component: c2, index: j }) if c1 == c2 && i == j => -1,
            _ => 0,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, HomologyClass::Boundary { .. })
    }
}

/// A vector of `H₁(Σ; A)`: one group element per basis class.
pub type HomologyVector = Vec<GroupElement>;

/// The pairing `S = b ⊗ ∩` on `H₁(Σ; A)`.
#[derive(Clone, Debug)]
pub struct IntersectionPairing {
    basis: Vec<HomologyClass>,
    /// `(a-index, b-index)` pairs into `basis`.
    symplectic_pairs: Vec<(usize, usize)>,
    disc: DiscriminantGroup,
}

pub fn intersection_pairing(s: &Surface, disc: &DiscriminantGroup) -> IntersectionPairing {
    let basis = s.homology_basis();
    let mut symplectic_pairs = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        if let HomologyClass::A { .. } = x {
            let j = basis.iter().position(|y| x.intersect(y) == 1).unwrap();
            symplectic_pairs.push((i, j));
        }
    }
    IntersectionPairing {
        basis,
        symplectic_pairs,
        disc: disc.clone(),
    }
}

impl IntersectionPairing {
    pub fn basis(&self) -> &[HomologyClass] {
        &self.basis
    }

    pub fn disc(&self) -> &DiscriminantGroup {
        &self.disc
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn symplectic_pairs(&self) -> &[(usize, usize)] {
        &self.symplectic_pairs
    }

    /// `S(X, Y) = Σᵢ b(x_{aᵢ}, y_{bᵢ}) − b(x_{bᵢ}, y_{aᵢ})`.
    pub fn pair(&self, x: &[GroupElement], y: &[GroupElement]) -> Phase {
        self.symplectic_pairs
            .iter()
            .fold(Phase::ZERO, |acc, &(a, b)| {
                acc + self.disc.bilinear(&x[a], &y[b]) - self.disc.bilinear(&x[b], &y[a])
            })
    }

    /// Pairing on the elementary vectors `g_j` placed in basis slot `k`,
    /// indexed by `k·(#factors) + j`.
    pub fn matrix(&self) -> Vec<Vec<Phase>> {
        let gens = self.elementary_vectors();
        gens.iter()
            .map(|x| gens.iter().map(|y| self.pair(x, y)).collect())
            .collect()
    }

    pub fn elementary_vectors(&self) -> Vec<HomologyVector> {
        let k = self.disc.num_factors();
        let mut out = Vec::new();
        for slot in 0..self.rank() {
            for j in 0..k {
                let mut v: HomologyVector = (0..self.rank()).map(|_| self.disc.zero()).collect();
                v[slot] = self.disc.generator(j);
                out.push(v);
            }
        }
        out
    }

    /// Generators of the image of `H₁(∂Σ; A)`: boundary slots times generators of `A`.
    pub fn boundary_image_generators(&self) -> Vec<HomologyVector> {
        let k = self.disc.num_factors();
        self.elementary_vectors()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| self.basis[i / k.max(1)].is_boundary())
            .map(|(_, v)| v)
            .collect()
    }
}

/// One label per boundary circle.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BlockLabel {
    labels: BTreeMap<String, GroupElement>,
}

impl BlockLabel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, id: &str, a: GroupElement) -> Self {
        self.insert(id, a);
        self
    }

    pub fn insert(&mut self, id: &str, a: GroupElement) {
        self.labels.insert(String::from(id), a);
    }

    pub fn get(&self, id: &str) -> Option<&GroupElement> {
        self.labels.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &GroupElement)> {
        self.labels.iter()
    }

    /// Every label replaced by its negative.
    pub fn negated(&self, disc: &DiscriminantGroup) -> Self {
        BlockLabel {
            labels: self
                .labels
                .iter()
                .map(|(k, v)| (k.clone(), disc.neg(v)))
                .collect(),
        }
    }

    /// All labels zero on the circles of `s`.
    pub fn zeros(s: &Surface, disc: &DiscriminantGroup) -> Self {
        BlockLabel {
            labels: s.boundaries().map(|b| (b.id.clone(), disc.zero())).collect(),
        }
    }
}

/// Per component, `Σ ±λ` over its circles (outgoing `+`, incoming `−`).
pub fn delta_obstruction(
    s: &Surface,
    labels: &BlockLabel,
    disc: &DiscriminantGroup,
) -> Result<Vec<GroupElement>, SurfaceError> {
    s.components()
        .iter()
        .map(|c| {
            c.boundaries.iter().try_fold(disc.zero(), |acc, b| {
                let l = labels
                    .get(&b.id)
                    .ok_or_else(|| SurfaceError::MissingLabel(b.id.clone()))?;
                if !disc.contains(l) {
                    return Err(SurfaceError::InvalidLabel(b.id.clone()));
                }
                Ok(disc.add(&acc, &disc.scale(b.orientation.sign(), l)))
            })
        })
        .collect()
}

/// Glue `s₁` (and `s₂`, if given) along `(out, in)` circle pairs.
///
/// Pairs may be listed in either order as long as the orientations differ.
pub fn glue(s1: &Surface, s2: Option<&Surface>, matching: &[(String, String)]) -> Result<Surface, SurfaceError> {
    let all = match s2 {
        Some(s2) => s1.disjoint_union(s2)?,
        None => s1.clone(),
    };
    let comps = all.components();
    let mut parent: Vec<usize> = (0..comps.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut used = BTreeSet::new();
    for (x, y) in matching {
        let (kx, bx) = all.boundary(x).ok_or_else(|| SurfaceError::UnknownCircle(x.clone()))?;
        let (ky, by) = all.boundary(y).ok_or_else(|| SurfaceError::UnknownCircle(y.clone()))?;
        if x == y || bx.orientation == by.orientation {
            return Err(SurfaceError::OrientationMismatch(x.clone(), y.clone()));
        }
        for id in [x, y] {
            if !used.insert(id.clone()) {
                return Err(SurfaceError::CircleReused(id.clone()));
            }
        }
        let (rx, ry) = (find(&mut parent, kx), find(&mut parent, ky));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    let mut classes: BTreeMap<usize, (i64, Vec<Boundary>)> = BTreeMap::new();
    for (k, c) in comps.iter().enumerate() {
        let root = find(&mut parent, k);
        let entry = classes.entry(root).or_insert((0, Vec::new()));
        // gluing along circles leaves χ unchanged
        entry.0 += c.euler_characteristic();
        entry
            .1
            .extend(c.boundaries.iter().filter(|b| !used.contains(&b.id)).cloned());
    }
    let components = classes
        .into_values()
        .map(|(chi, boundaries)| {
            let twice_g = 2 - chi - boundaries.len() as i64;
            debug_assert!(twice_g >= 0 && twice_g % 2 == 0);
            Component {
                genus: (twice_g / 2) as u32,
                boundaries,
            }
        })
        .collect();
    Surface::new(components)
}
