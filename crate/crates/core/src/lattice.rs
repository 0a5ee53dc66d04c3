//! Even positive-definite lattices and their discriminant groups.
//!
//! A lattice is given by its Gram matrix `G` in a basis of `Λ = Z^r`. The
//! dual lattice is `Λ° = G⁻¹·Z^r`, and `A = Λ°/Λ ≅ coker(G)`. Elements of
//! `A` are written in invariant-factor coordinates obtained from the Smith
//! normal form `U·G·V = D`: an integer vector `y ∈ Z^r` of dual coordinates
//! (`y_i = ⟨λ, e_i⟩`) maps to `U·y` reduced modulo the invariant factors.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::intmat::{smith_normal_form, IntMatrix};
use crate::math;
use crate::phase::{reduce_mod, Phase};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix must be square and nonempty")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("diagonal entry {index} is odd; odd lattices need a spin structure and are not supported")]
    OddDiagonal { index: usize },
    #[error("Gram matrix is not positive definite (leading minor {index} is {minor})")]
    NotPositiveDefinite { index: usize, minor: i128 },
}

/// An even, positive-definite integral lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    gram: IntMatrix,
    det: i64,
    level_ell: i64,
}

impl EvenLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        validate_even_lattice(gram)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    /// gcd of all Gram entries.
    pub fn level_ell(&self) -> i64 {
        self.level_ell
    }

    /// `⟨u, v⟩ = uᵀ·G·v` for rational lattice coordinates.
    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let r = self.rank();
        let mut acc = Rational::zero();
        for i in 0..r {
            for j in 0..r {
                acc += u[i] * Rational::from_integer(self.gram[(i, j)]) * v[j];
            }
        }
        acc
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &EvenLattice) -> EvenLattice {
        let (r1, r2) = (self.rank(), other.rank());
        let mut g = IntMatrix::zeros(r1 + r2, r1 + r2);
        for i in 0..r1 {
            for j in 0..r1 {
                g[(i, j)] = self.gram[(i, j)];
            }
        }
        for i in 0..r2 {
            for j in 0..r2 {
                g[(r1 + i, r1 + j)] = other.gram[(i, j)];
            }
        }
        validate_even_lattice(g).expect("direct sum of even lattices is even")
    }
}

pub fn validate_even_lattice(gram: IntMatrix) -> Result<EvenLattice, LatticeError> {
    if !gram.is_square() || gram.rows() == 0 {
        return Err(LatticeError::NotSquare);
    }
    if !gram.is_symmetric() {
        return Err(LatticeError::NotSymmetric);
    }
    if let Some(index) = (0..gram.rows()).find(|&i| gram[(i, i)] % 2 != 0) {
        return Err(LatticeError::OddDiagonal { index });
    }
    let minors = gram.leading_minors();
    if let Some((i, &minor)) = minors.iter().enumerate().find(|(_, &m)| m <= 0) {
        return Err(LatticeError::NotPositiveDefinite { index: i + 1, minor });
    }
    let det = i64::try_from(*minors.last().unwrap()).expect("determinant exceeds i64");
    let level_ell = gram.to_rows().iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
    Ok(EvenLattice {
        gram,
        det,
        level_ell,
    })
}

/// An element of `A` in invariant-factor coordinates, `0 ≤ c_i < d_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub coords: Vec<i64>,
}

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupElement { coords }
    }
}

/// `A = Λ°/Λ` with its discriminant forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<i64>,
    bilinear: Vec<Vec<Phase>>,
    quadratic_diag: Vec<Rational>,
    /// Dual coordinates `y ∈ Z^r` of each generator.
    generator_duals: Vec<Vec<i64>>,
    /// Rows of `U` belonging to nontrivial invariant factors.
    projection: Vec<Vec<i64>>,
    gram_inverse: Vec<Vec<Rational>>,
    rank: usize,
}

impl DiscriminantGroup {
    /// Finite abelian group `⊕ Z/d_i` with a user-supplied nondegenerate
    /// symmetric bilinear form, not tied to a lattice. The quadratic form is
    /// the one with `q(g_i) = b(g_i, g_i)` lifted to `[0, 1)`; callers that
    /// need a specific refinement should build the group from a lattice.
    pub fn from_form(invariant_factors: Vec<i64>, bilinear: Vec<Vec<Phase>>) -> Self {
        let quadratic_diag = bilinear
            .iter()
            .enumerate()
            .map(|(i, row)| row[i].value())
            .collect();
        DiscriminantGroup {
            invariant_factors,
            bilinear,
            quadratic_diag,
            generator_duals: Vec::new(),
            projection: Vec::new(),
            gram_inverse: Vec::new(),
            rank: 0,
        }
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    /// Number of cyclic factors.
    pub fn num_factors(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> usize {
        self.invariant_factors.iter().product::<i64>() as usize
    }

    /// Exponent of the group (lcm of the invariant factors).
    pub fn exponent(&self) -> i64 {
        self.invariant_factors.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn bilinear_matrix(&self) -> &[Vec<Phase>] {
        &self.bilinear
    }

    pub fn quadratic_diagonal(&self) -> &[Rational] {
        &self.quadratic_diag
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(alloc::vec![0; self.num_factors()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = alloc::vec![0; self.num_factors()];
        c[i] = 1 % self.invariant_factors[i];
        GroupElement::new(c)
    }

    pub fn reduce(&self, coords: &[i64]) -> GroupElement {
        GroupElement::new(
            coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(c, d)| c.rem_euclid(*d))
                .collect(),
        )
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.num_factors()
            && a.coords
                .iter()
                .zip(&self.invariant_factors)
                .all(|(c, d)| (0..*d).contains(c))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let s: Vec<i64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let s: Vec<i64> = a.coords.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let s: Vec<i64> = a.coords.iter().map(|x| k * x).collect();
        self.reduce(&s)
    }

    /// Mixed-radix index in lexicographic order.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.coords
            .iter()
            .zip(&self.invariant_factors)
            .fold(0usize, |acc, (c, d)| acc * *d as usize + *c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = alloc::vec![0i64; self.num_factors()];
        for (slot, d) in coords.iter_mut().zip(&self.invariant_factors).rev() {
            *slot = (index % *d as usize) as i64;
            index /= *d as usize;
        }
        GroupElement::new(coords)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// `b(a, c) ∈ Q/Z`.
    pub fn bilinear(&self, a: &GroupElement, c: &GroupElement) -> Phase {
        let mut acc = Phase::ZERO;
        for (i, &ai) in a.coords.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &cj) in c.coords.iter().enumerate() {
                if cj != 0 {
                    acc += self.bilinear[i][j] * (ai * cj);
                }
            }
        }
        acc
    }

    /// `q(a) ∈ Q/2Z`, reduced into `[0, 2)`.
    pub fn quadratic(&self, a: &GroupElement) -> Rational {
        let mut acc = Rational::zero();
        for (i, &ai) in a.coords.iter().enumerate() {
            acc += self.quadratic_diag[i] * Rational::from_integer(ai * ai);
            for (j, &aj) in a.coords.iter().enumerate().skip(i + 1) {
                acc += self.bilinear[i][j].value() * Rational::from_integer(2 * ai * aj);
            }
        }
        reduce_mod(acc, 2)
    }

    /// Dual coordinates `y ∈ Z^r` (so that `G⁻¹·y ∈ Λ°`) of a representative.
    pub fn dual_lift(&self, a: &GroupElement) -> Vec<i64> {
        let mut y = alloc::vec![0i64; self.rank];
        for (gen, &c) in self.generator_duals.iter().zip(&a.coords) {
            for (yi, gi) in y.iter_mut().zip(gen) {
                *yi += c * gi;
            }
        }
        y
    }

    /// Lattice coordinates `x = G⁻¹·y` of a representative in `Λ°`.
    pub fn lift(&self, a: &GroupElement) -> Vec<Rational> {
        let y = self.dual_lift(a);
        self.gram_inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&y)
                    .map(|(g, &yi)| *g * Rational::from_integer(yi))
                    .sum()
            })
            .collect()
    }

    /// Class of the dual vector with dual coordinates `y`.
    pub fn from_dual(&self, y: &[i64]) -> GroupElement {
        let c: Vec<i64> = self
            .projection
            .iter()
            .map(|row| row.iter().zip(y).map(|(u, v)| u * v).sum())
            .collect();
        self.reduce(&c)
    }

    /// Whether `a ↦ b(a, ·)` is injective, checked over the whole group.
    pub fn is_nondegenerate(&self) -> bool {
        let gens: Vec<GroupElement> = (0..self.num_factors()).map(|i| self.generator(i)).collect();
        self.elements()
            .skip(1)
            .all(|a| gens.iter().any(|g| !self.bilinear(&a, g).is_zero()))
    }
}

/// `A = Λ°/Λ` with forms `b(a, c) = yₐᵀ G⁻¹ y_c mod 1` and `q(a) = yₐᵀ G⁻¹ yₐ mod 2`.
pub fn discriminant_group(lat: &EvenLattice) -> DiscriminantGroup {
    let snf = smith_normal_form(lat.gram());
    let r = lat.rank();
    let positions: Vec<usize> = (0..r).filter(|&i| snf.d[(i, i)] > 1).collect();
    let invariant_factors: Vec<i64> = positions.iter().map(|&i| snf.d[(i, i)]).collect();
    let gram_inverse = lat.gram().rational_inverse().expect("positive definite");
    let det = lat.det();
    // adj(G) = det·G⁻¹, integral
    let adj: Vec<Vec<BigInt>> = gram_inverse
        .iter()
        .map(|row| row.iter().map(|x| BigInt::from((x * Rational::from_integer(det)).to_integer())).collect())
        .collect();
    let generator_duals: Vec<Vec<i64>> = positions
        .iter()
        .map(|&p| {
            let y: Vec<BigInt> = (0..r).map(|i| snf.u_inv.entry(i, p).clone()).collect();
            reduced_dual(lat, &adj, det, &y)
        })
        .collect();
    let projection: Vec<Vec<i64>> = positions
        .iter()
        .map(|&p| {
            let d = BigInt::from(snf.d[(p, p)]);
            (0..r)
                .map(|j| snf.u.entry(p, j).mod_floor(&d).to_i64().unwrap())
                .collect()
        })
        .collect();
    let pair = |y1: &[i64], y2: &[i64]| -> Rational {
        let mut acc = Rational::zero();
        for i in 0..r {
            for j in 0..r {
                acc += Rational::from_integer(y1[i]) * gram_inverse[i][j] * Rational::from_integer(y2[j]);
            }
        }
        acc
    };
    let k = positions.len();
    let bilinear: Vec<Vec<Phase>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| Phase::from_rational(pair(&generator_duals[i], &generator_duals[j])))
                .collect()
        })
        .collect();
    let quadratic_diag = (0..k)
        .map(|i| reduce_mod(pair(&generator_duals[i], &generator_duals[i]), 2))
        .collect();
    DiscriminantGroup {
        invariant_factors,
        bilinear,
        quadratic_diag,
        generator_duals,
        projection,
        gram_inverse,
        rank: r,
    }
}

/// Dual coordinates of the representative of `G⁻¹·y + Λ` whose lattice
/// coordinates lie in `[0, 1)`.
fn reduced_dual(lat: &EvenLattice, adj: &[Vec<BigInt>], det: i64, y: &[BigInt]) -> Vec<i64> {
    let det = BigInt::from(det);
    let frac: Vec<Rational> = adj
        .iter()
        .map(|row| {
            let num: BigInt = row.iter().zip(y).map(|(a, b)| a * b).sum();
            let num = num.mod_floor(&det).to_i64().unwrap();
            Rational::new(num, det.to_i64().unwrap())
        })
        .collect();
    (0..lat.rank())
        .map(|i| {
            let v: Rational = (0..lat.rank())
                .map(|j| Rational::from_integer(lat.gram()[(i, j)]) * frac[j])
                .sum();
            v.to_integer()
        })
        .collect()
}

/// Result of a Gauss-sum evaluation with its signature certificate.
#[derive(Clone, Copy, Debug)]
pub struct GaussSum {
    pub value: Complex64,
    /// `||value| − √|A||`.
    pub modulus_error: f64,
    /// Signature mod 8 read off the argument.
    pub sigma: u8,
    /// Distance of the argument from `2π·sigma/8`.
    pub phase_error: f64,
}

/// `Σ_{a∈A} exp(πi·q(a))`.
pub fn gauss_sum(disc: &DiscriminantGroup) -> GaussSum {
    let terms: Vec<Complex64> = disc
        .elements()
        .map(|a| Phase::from_rational(disc.quadratic(&a) / Rational::from_integer(2)).to_complex())
        .collect();
    let value = math::pairwise_sum(&terms);
    let modulus = value.norm();
    let modulus_error = (modulus - math::sqrt(disc.order() as f64)).abs();
    let turns = math::atan2(value.im, value.re) / math::TAU;
    let eighths = math::round(turns * 8.0);
    let sigma = (eighths as i64).rem_euclid(8) as u8;
    let phase_error = (turns * 8.0 - eighths).abs() * math::TAU / 8.0;
    GaussSum {
        value,
        modulus_error,
        sigma,
        phase_error,
    }
}

/// Named lattices used by the CLI and the acceptance suite.
pub mod catalog {
    use super::*;
    use alloc::vec;

    /// Cartan matrix of `A_n`.
    pub fn a(n: usize) -> EvenLattice {
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = 2;
            if i + 1 < n {
                g[(i, i + 1)] = -1;
                g[(i + 1, i)] = -1;
            }
        }
        EvenLattice::new(g).unwrap()
    }

    /// Cartan matrix of `D_n`, `n ≥ 4`.
    pub fn d(n: usize) -> EvenLattice {
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = 2;
        }
        for i in 0..n - 2 {
            g[(i, i + 1)] = -1;
            g[(i + 1, i)] = -1;
        }
        g[(n - 3, n - 1)] = -1;
        g[(n - 1, n - 3)] = -1;
        EvenLattice::new(g).unwrap()
    }

    /// Cartan matrix of `E_n`, `n ∈ {6, 7, 8}` (branch node attached to the third node).
    pub fn e(n: usize) -> EvenLattice {
        assert!((6..=8).contains(&n));
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = 2;
        }
        for i in 0..n - 2 {
            g[(i, i + 1)] = -1;
            g[(i + 1, i)] = -1;
        }
        g[(2, n - 1)] = -1;
        g[(n - 1, 2)] = -1;
        EvenLattice::new(g).unwrap()
    }

    /// Rank-one lattice `√(2k)·Z`.
    pub fn scaled(k: i64) -> EvenLattice {
        EvenLattice::new(IntMatrix::diagonal(&[2 * k])).unwrap()
    }

    /// `(name, lattice)` pairs, ordered by name.
    pub fn bundled() -> Vec<(&'static str, EvenLattice)> {
        let a1 = a(1);
        let a2 = a(2);
        let a3 = a(3);
        vec![
            ("A1", a1.clone()),
            ("A1+A1", a1.direct_sum(&a1)),
            ("A1+A1+A1", a1.direct_sum(&a1).direct_sum(&a1)),
            ("A1+A2", a1.direct_sum(&a2)),
            ("A1+A3", a1.direct_sum(&a3)),
            ("A2", a2.clone()),
            ("A2+A2", a2.direct_sum(&a2)),
            ("A3", a3.clone()),
            ("A3+A3", a3.direct_sum(&a3)),
            ("A4", a(4)),
            ("A6", a(6)),
            ("A7", a(7)),
            ("D4", d(4)),
            ("D5", d(5)),
            ("E6", e(6)),
            ("E7", e(7)),
            ("E8", e(8)),
            ("Z(4)", scaled(2)),
            ("Z(16)", scaled(8)),
        ]
    }
}
