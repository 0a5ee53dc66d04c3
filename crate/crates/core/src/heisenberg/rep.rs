//! Monomial unitary representations of `H̃` with exact phases.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;

use crate::cyclotomic::Cyclotomic;
use crate::lattice::DiscriminantGroup;
use crate::linalg::{self, CMatrix, ZERO};
use crate::phase::Phase;
use crate::surface::Surface;

use super::{lagrangian_slots, Cocycle, HeisenbergElement, HeisenbergError, HeisenbergGroup, Splitting, Subgroup};

/// Above this dimension the commutant is computed from characters only.
pub const NULLSPACE_DIM_LIMIT: usize = 16;

/// Permutation matrix with root-of-unity entries: column `k` holds
/// `ζ_N^{exps[k]}` in row `perm[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    order: u64,
    perm: Vec<u32>,
    exps: Vec<u64>,
}

impl Monomial {
    pub fn identity(dim: usize, order: u64) -> Self {
        Monomial {
            order,
            perm: (0..dim as u32).collect(),
            exps: vec![0; dim],
        }
    }

    pub fn new(order: u64, perm: Vec<u32>, exps: Vec<u64>) -> Self {
        assert_eq!(perm.len(), exps.len());
        let exps = exps.into_iter().map(|e| e % order).collect();
        Monomial { order, perm, exps }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Row index and phase of column `k`.
    pub fn entry(&self, k: usize) -> (usize, Phase) {
        (self.perm[k] as usize, Phase::new(self.exps[k] as i64, self.order as i64))
    }

    /// `self · other`.
    pub fn compose(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.order, other.order);
        let n = self.order;
        let mut perm = Vec::with_capacity(other.dim());
        let mut exps = Vec::with_capacity(other.dim());
        for (&j, &e) in other.perm.iter().zip(&other.exps) {
            perm.push(self.perm[j as usize]);
            exps.push((self.exps[j as usize] + e) % n);
        }
        Monomial { order: n, perm, exps }
    }

    /// Multiply by `ζ_N^e`.
    pub fn scaled(mut self, e: i64) -> Monomial {
        let n = self.order as i64;
        let e = e.rem_euclid(n) as u64;
        for x in self.exps.iter_mut() {
            *x = (*x + e) % self.order;
        }
        self
    }

    pub fn pow(&self, k: u64) -> Monomial {
        let mut acc = Monomial::identity(self.dim(), self.order);
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    /// Re-express over `ζ_M` with `N | M`.
    pub fn with_order(&self, m: u64) -> Monomial {
        assert_eq!(m % self.order, 0);
        let f = m / self.order;
        Monomial {
            order: m,
            perm: self.perm.clone(),
            exps: self.exps.iter().map(|e| e * f).collect(),
        }
    }

    /// Exponents on the diagonal.
    pub fn trace_exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.perm
            .iter()
            .enumerate()
            .filter(|(k, &p)| *k == p as usize)
            .map(|(k, _)| self.exps[k])
    }

    pub fn trace(&self) -> Complex64 {
        self.trace_exponents()
            .map(|e| Phase::new(e as i64, self.order as i64).to_complex())
            .sum()
    }

    pub fn trace_exact(&self) -> Cyclotomic {
        let mut z = Cyclotomic::zero(self.order as usize);
        for e in self.trace_exponents() {
            z.add_root(e as i64, 1);
        }
        z
    }

    /// `Some(e)` if this is `ζ_N^e·I`.
    pub fn scalar(&self) -> Option<u64> {
        let e = *self.exps.first()?;
        let diag = self.perm.iter().enumerate().all(|(k, &p)| k == p as usize);
        (diag && self.exps.iter().all(|&x| x == e)).then_some(e)
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for k in 0..n {
            let (row, p) = self.entry(k);
            m[(row, k)] = p.to_complex();
        }
        m
    }

    pub fn direct_sum(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.order, other.order);
        let off = self.dim() as u32;
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|p| p + off));
        let mut exps = self.exps.clone();
        exps.extend(other.exps.iter().copied());
        Monomial {
            order: self.order,
            perm,
            exps,
        }
    }
}

/// A representation of `H̃` in which the circle acts by `m ↦ e^{2πim}`,
/// given by monomial matrices for the unit vectors `e_i` of `H`.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: HeisenbergGroup,
    order: u64,
    generators: Vec<Monomial>,
}

impl UnitaryRep {
    pub fn new(group: HeisenbergGroup, generators: Vec<Monomial>) -> Result<Self, HeisenbergError> {
        if generators.len() != group.rank() {
            return Err(HeisenbergError::DimensionMismatch {
                expected: group.rank(),
                got: generators.len(),
            });
        }
        let mut order = group.cocycle_denominator() as u64;
        for g in &generators {
            order = order.lcm(&g.order());
        }
        let dim = generators.first().map_or(1, Monomial::dim);
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(HeisenbergError::DimensionMismatch {
                expected: dim,
                got: g.dim(),
            });
        }
        let generators = generators.iter().map(|g| g.with_order(order)).collect();
        Ok(UnitaryRep {
            group,
            order,
            generators,
        })
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn dimension(&self) -> usize {
        self.generators.first().map_or(1, Monomial::dim)
    }

    pub fn root_order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    /// Exponent of `c(x, y)` over `ζ_N`.
    fn cocycle_exp(&self, x: &[i64], y: &[i64]) -> i64 {
        self.group.cocycle_num(x, y) * (self.order as i64 / self.group.cocycle_denominator())
    }

    /// `ρ(x, 0) = e^{−2πiφ(x)}·Πρ(e_i)^{x_i}` where `Π(e_i, 0)^{x_i} = (x, φ(x))`.
    pub fn matrix(&self, x: &[i64]) -> Monomial {
        let x = self.group.reduce(x);
        let mut acc = Monomial::identity(self.dimension(), self.order);
        let mut partial = vec![0i64; x.len()];
        let mut phi = 0i64;
        for (i, &xi) in x.iter().enumerate() {
            let e = self.group.unit(i);
            for _ in 0..xi {
                phi += self.cocycle_exp(&partial, &e);
                partial[i] += 1;
                acc = acc.compose(&self.generators[i]);
            }
        }
        acc.scaled(-phi)
    }

    /// Dense matrix of `ρ(x, m)`.
    pub fn dense(&self, h: &HeisenbergElement) -> CMatrix {
        self.matrix(&h.x).to_dense() * h.phase.to_complex()
    }

    /// Visit `(index, ρ(x, 0))` for every `x ∈ H` in lexicographic order.
    pub fn for_each_element<F: FnMut(usize, &Monomial)>(&self, mut f: F) {
        let n = self.group.rank();
        let mut x = vec![0i64; n];
        let id = Monomial::identity(self.dimension(), self.order);
        let mut index = 0usize;
        self.walk(0, &mut x, id, &mut index, &mut f);
    }

    fn walk<F: FnMut(usize, &Monomial)>(&self, i: usize, x: &mut Vec<i64>, rho: Monomial, index: &mut usize, f: &mut F) {
        if i == x.len() {
            f(*index, &rho);
            *index += 1;
            return;
        }
        let e = self.group.unit(i);
        let m = self.group.moduli()[i];
        let mut cur = rho;
        for v in 0..m {
            x[i] = v;
            if v + 1 < m {
                // ρ(x + e_i) = e^{−2πic(x, e_i)}·ρ(x)·ρ(e_i)
                let next = cur.compose(&self.generators[i]).scaled(-self.cocycle_exp(x, &e));
                self.walk(i + 1, x, cur, index, f);
                cur = next;
            } else {
                self.walk(i + 1, x, cur, index, f);
                break;
            }
        }
        x[i] = 0;
    }

    /// `tr ρ(x, 0)` for every `x`, in lexicographic order.
    pub fn characters(&self) -> Result<Vec<Complex64>, HeisenbergError> {
        self.group.check_enumerable()?;
        let mut out = Vec::with_capacity(self.group.order());
        self.for_each_element(|_, m| out.push(m.trace()));
        Ok(out)
    }

    /// Exact characters over `Z[ζ_M]`, `N | M`.
    pub fn characters_exact(&self, m: u64) -> Result<Vec<Cyclotomic>, HeisenbergError> {
        self.group.check_enumerable()?;
        assert_eq!(m % self.order, 0);
        let f = (m / self.order) as i64;
        let mut out = Vec::with_capacity(self.group.order());
        self.for_each_element(|_, rho| {
            let mut z = Cyclotomic::zero(m as usize);
            for e in rho.trace_exponents() {
                z.add_root(e as i64 * f, 1);
            }
            out.push(z);
        });
        Ok(out)
    }

    /// `(1/|H|)·Σ|tr ρ(x)|²`, the dimension of the commutant.
    pub fn commutant_dimension(&self) -> Result<f64, HeisenbergError> {
        let chars = self.characters()?;
        Ok(chars.iter().map(|c| c.norm_sqr()).sum::<f64>() / chars.len() as f64)
    }

    /// Commutant dimension from the kernel of `M ↦ Mρ(e_i) − ρ(e_i)M`;
    /// `None` above [`NULLSPACE_DIM_LIMIT`].
    pub fn commutant_dimension_linear(&self) -> Option<usize> {
        intertwiner_nullity(self, self)
    }

    /// Irreducible iff the commutant is one-dimensional.
    pub fn verify_irreducible(&self) -> Result<bool, HeisenbergError> {
        let by_chars = self.commutant_dimension()?;
        let ok = (by_chars - 1.0).abs() < 1e-9;
        Ok(match self.commutant_dimension_linear() {
            Some(k) => ok && k == 1,
            None => ok,
        })
    }

    /// Presentation relations, checked exactly:
    /// `ρ(e_i)ρ(e_j) = e^{2πiω(e_i,e_j)}ρ(e_j)ρ(e_i)` and
    /// `ρ(e_i)^{m_i} = e^{2πi·c(e_i,e_i)·m_i(m_i−1)/2}`.
    pub fn relations_hold(&self) -> bool {
        let n = self.group.rank();
        for i in 0..n {
            let ei = self.group.unit(i);
            let m = self.group.moduli()[i];
            let expect = Monomial::identity(self.dimension(), self.order).scaled(self.cocycle_exp(&ei, &ei) * (m * (m - 1) / 2));
            if self.generators[i].pow(m as u64) != expect {
                return false;
            }
            for j in i + 1..n {
                let ej = self.group.unit(j);
                let w = self.cocycle_exp(&ei, &ej) - self.cocycle_exp(&ej, &ei);
                let lhs = self.generators[i].compose(&self.generators[j]);
                let rhs = self.generators[j].compose(&self.generators[i]).scaled(w);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// `ρ(x)ρ(y) = e^{2πic(x,y)}ρ(x + y)` for every pair, exactly.
    pub fn cocycle_holds_exhaustively(&self) -> Result<bool, HeisenbergError> {
        self.group.check_enumerable()?;
        let mut mats = Vec::with_capacity(self.group.order());
        self.for_each_element(|_, m| mats.push(m.clone()));
        for i in 0..mats.len() {
            let x = self.group.element_at(i);
            for (j, my) in mats.iter().enumerate() {
                let y = self.group.element_at(j);
                let k = self.group.index_of(&self.group.add(&x, &y));
                if mats[i].compose(my) != mats[k].clone().scaled(self.cocycle_exp(&x, &y)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| linalg::unitarity_defect(&g.to_dense()))
            .fold(0.0, f64::max)
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<UnitaryRep, HeisenbergError> {
        if self.group != other.group {
            return Err(HeisenbergError::DimensionMismatch {
                expected: self.group.rank(),
                got: other.group.rank(),
            });
        }
        let order = self.order.lcm(&other.order);
        let gens = self
            .generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| a.with_order(order).direct_sum(&b.with_order(order)))
            .collect();
        UnitaryRep::new(self.group.clone(), gens)
    }

    /// The scalar by which a central `(z, 0)` acts, if it does.
    pub fn central_character(&self, z: &[i64]) -> Option<Phase> {
        self.matrix(z)
            .scalar()
            .map(|e| Phase::new(e as i64, self.order as i64))
    }
}

/// `dim Hom(ρ₂, ρ₁)` by solving `W·ρ₂(e_i) = ρ₁(e_i)·W`.
fn intertwiner_nullity(r1: &UnitaryRep, r2: &UnitaryRep) -> Option<usize> {
    let (d1, d2) = (r1.dimension(), r2.dimension());
    if d1.max(d2) > NULLSPACE_DIM_LIMIT {
        return None;
    }
    let n = r1.generators.len();
    if n == 0 {
        return Some(d1 * d2);
    }
    // vec(Wρ₂) = (ρ₂ᵀ ⊗ I)vec W, vec(ρ₁W) = (I ⊗ ρ₁)vec W; the kernel of the
    // stacked system is the kernel of the Hermitian Gram matrix Σ AᵢᴴAᵢ
    let mut gram = CMatrix::zeros(d1 * d2, d1 * d2);
    for (g1, g2) in r1.generators.iter().zip(&r2.generators) {
        let a = linalg::kron(&g2.to_dense().transpose(), &CMatrix::identity(d1, d1))
            - linalg::kron(&CMatrix::identity(d2, d2), &g1.to_dense());
        gram += a.adjoint() * a;
    }
    let eig = linalg::hermitian_eigenvalues(&gram);
    let top = eig.last().copied().unwrap_or(0.0).max(1.0);
    Some(eig.iter().filter(|&&e| e.abs() < 1e-12 * top).count())
}

/// Schrödinger model on functions `A^g → C`, induced from the `a`-cycle
/// Lagrangian: `b`-generators translate, `a`-generators multiply by
/// `u ↦ e^{2πi·b(g, u)}`.
pub fn schroedinger_irrep(disc: &DiscriminantGroup, s: &Surface) -> Result<UnitaryRep, HeisenbergError> {
    if !s.is_closed() {
        return Err(HeisenbergError::NonclosedSurface);
    }
    let group = HeisenbergGroup::from_surface(s, disc, Cocycle::Polarized);
    let a_slots = lagrangian_slots(s, true);
    let b_slots = lagrangian_slots(s, false);
    let k = disc.num_factors();
    let g = a_slots.len();
    // functions on A^g in mixed radix (slot-major, factor-minor)
    let moduli: Vec<i64> = (0..g * k).map(|i| disc.invariant_factors()[i % k]).collect();
    let dim: usize = moduli.iter().map(|&m| m as usize).product();
    let encode = |u: &[i64]| u.iter().zip(&moduli).fold(0usize, |acc, (c, m)| acc * *m as usize + *c as usize);
    let decode = |mut idx: usize| {
        let mut u = vec![0i64; moduli.len()];
        for (slot, m) in u.iter_mut().zip(&moduli).rev() {
            *slot = (idx % *m as usize) as i64;
            idx /= *m as usize;
        }
        u
    };
    let order = group.cocycle_denominator() as u64;
    let bmat = disc.bilinear_matrix();
    let mut gens = Vec::with_capacity(group.rank());
    for slot in 0..group.rank() / k.max(1) {
        for j in 0..k {
            let mut perm = Vec::with_capacity(dim);
            let mut exps = Vec::with_capacity(dim);
            if let Some(t) = a_slots.iter().position(|&x| x == slot) {
                for idx in 0..dim {
                    let u = decode(idx);
                    let p = (0..k).fold(Phase::ZERO, |acc, l| acc + bmat[j][l] * u[t * k + l]);
                    perm.push(idx as u32);
                    exps.push((*p.value().numer() * (order as i64 / p.denom())) as u64);
                }
            } else {
                let t = b_slots.iter().position(|&x| x == slot).expect("closed surface");
                for idx in 0..dim {
                    let mut u = decode(idx);
                    u[t * k + j] = (u[t * k + j] + 1).rem_euclid(moduli[t * k + j]);
                    perm.push(encode(&u) as u32);
                    exps.push(0);
                }
            }
            gens.push(Monomial::new(order, perm, exps));
        }
    }
    UnitaryRep::new(group, gens)
}

/// Induced representation `Ind_{B̃}^{H̃} ψ` with `ψ(b, m) = e^{2πi(m − χ(b))}`,
/// together with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct InducedRep {
    pub rep: UnitaryRep,
    subgroup: Subgroup,
    splitting: Splitting,
    coset_reps: Vec<Vec<i64>>,
    /// For each `x ∈ H`: `(k, b)` with `x = r_k + b`.
    decomposition: Vec<(u32, u32)>,
}

impl InducedRep {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn splitting(&self) -> &Splitting {
        &self.splitting
    }

    pub fn coset_representatives(&self) -> &[Vec<i64>] {
        &self.coset_reps
    }

    /// `e_k ↦ e^{2πi(c(p, r_k) − c(r_l, b) − χ(b))}·e_l` where `p + r_k = r_l + b`
    /// (left), or `r_k + p = r_l + b` with `c(r_k, p)` (right).
    fn action(&self, p: &[i64], right: bool) -> Monomial {
        let h = &self.rep.group;
        let order = self.rep.order;
        let scale = order as i64 / h.cocycle_denominator();
        let mut perm = Vec::with_capacity(self.coset_reps.len());
        let mut exps = Vec::with_capacity(self.coset_reps.len());
        for r in &self.coset_reps {
            let y = h.add(p, r);
            let (l, bi) = self.decomposition[h.index_of(&y)];
            let b = h.element_at(bi as usize);
            let first = if right { h.cocycle_num(r, p) } else { h.cocycle_num(p, r) };
            let chi = self.splitting.value(bi as usize).expect("b lies in B");
            let e = (first - h.cocycle_num(&self.coset_reps[l as usize], &b)) * scale
                - *chi.value().numer() * (order as i64 / chi.denom());
            perm.push(l);
            exps.push(e.rem_euclid(order as i64) as u64);
        }
        Monomial::new(order, perm, exps)
    }

    /// `ρ(x, 0)` straight from the induction formula.
    pub fn left(&self, x: &[i64]) -> Monomial {
        self.action(&self.rep.group.reduce(x), false)
    }

    /// Right action of `p ∈ B^⊥`, commuting with the left action.
    pub fn right(&self, p: &[i64]) -> Result<Monomial, HeisenbergError> {
        let h = &self.rep.group;
        for (i, g) in self.subgroup.generators().iter().enumerate() {
            if !h.commutator_pairing(p, g).is_zero() {
                return Err(HeisenbergError::NotIsotropic(i, usize::MAX));
            }
        }
        Ok(self.action(&h.reduce(p), true))
    }
}

pub fn induce_from_isotropic(h: &HeisenbergGroup, b: &Subgroup, chi: &Splitting) -> Result<InducedRep, HeisenbergError> {
    h.check_enumerable()?;
    b.is_isotropic(h)?;
    // χ must be defined on B and satisfy the splitting rule along generators
    for &i in b.members() {
        let x = h.element_at(i);
        let cx = chi.value(i).ok_or(HeisenbergError::NotASplitting)?;
        for g in b.generators() {
            let gi = h.index_of(g);
            let y = h.index_of(&h.add(&x, g));
            let expect = cx + chi.value(gi).ok_or(HeisenbergError::NotASplitting)? + h.cocycle(&x, g);
            if chi.value(y) != Some(expect) {
                return Err(HeisenbergError::NotASplitting);
            }
        }
    }
    let total = h.order();
    let mut decomposition = vec![(u32::MAX, 0u32); total];
    let mut coset_reps = Vec::new();
    for idx in 0..total {
        if decomposition[idx].0 != u32::MAX {
            continue;
        }
        let r = h.element_at(idx);
        let k = coset_reps.len() as u32;
        for &bi in b.members() {
            let y = h.add(&r, &h.element_at(bi));
            decomposition[h.index_of(&y)] = (k, bi as u32);
        }
        coset_reps.push(r);
    }
    let order = (h.cocycle_denominator() as u64).lcm(&(chi.denominator() as u64));
    let mut induced = InducedRep {
        rep: UnitaryRep {
            group: h.clone(),
            order,
            generators: Vec::new(),
        },
        subgroup: b.clone(),
        splitting: chi.clone(),
        coset_reps,
        decomposition,
    };
    let gens: Vec<Monomial> = (0..h.rank()).map(|i| induced.left(&h.unit(i))).collect();
    induced.rep.generators = gens;
    Ok(induced)
}

/// Outcome of the finite Stone–von Neumann check between the Schrödinger
/// model (`a`-Lagrangian) and the model induced from the `b`-Lagrangian.
#[derive(Clone, Debug)]
pub struct IntertwinerReport {
    pub dimension: usize,
    /// `dim Hom` from the character inner product.
    pub intertwiner_dim_characters: f64,
    /// `dim Hom` from the linear system, when small enough.
    pub intertwiner_dim_linear: Option<usize>,
    pub commutant_dimension: f64,
    pub unitarity_defect: f64,
    pub intertwining_defect: f64,
    pub intertwiner: CMatrix,
}

impl IntertwinerReport {
    pub fn passes(&self, tol: f64) -> bool {
        (self.intertwiner_dim_characters - 1.0).abs() < tol
            && self.intertwiner_dim_linear.is_none_or(|k| k == 1)
            && (self.commutant_dimension - 1.0).abs() < tol
            && self.unitarity_defect < tol
            && self.intertwining_defect < tol
    }
}

pub fn stone_von_neumann(disc: &DiscriminantGroup, s: &Surface) -> Result<IntertwinerReport, HeisenbergError> {
    let rho1 = schroedinger_irrep(disc, s)?;
    let h = rho1.group().clone();
    h.check_enumerable()?;
    let k = disc.num_factors();
    let b_gens: Vec<Vec<i64>> = lagrangian_slots(s, false)
        .iter()
        .flat_map(|&slot| (0..k).map(move |j| slot * k + j))
        .map(|i| h.unit(i))
        .collect();
    let lb = Subgroup::generated_by(&h, &b_gens)?;
    let chi = Splitting::default_for(&h, &lb)?;
    let rho2 = induce_from_isotropic(&h, &lb, &chi)?;
    let dim = rho1.dimension();

    // a vector fixed by every ρ₁(b, χ(b)), b ∈ L_b
    let projector_on = |j: usize| -> Vec<Complex64> {
        let mut v = vec![ZERO; dim];
        for &bi in lb.members() {
            let m = rho1.matrix(&h.element_at(bi));
            let (row, p) = m.entry(j);
            v[row] += p.to_complex() * chi.value(bi).unwrap().to_complex();
        }
        v
    };
    let v = (0..dim)
        .map(projector_on)
        .find(|v| v.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-12)
        .expect("fixed vector exists");
    let norm = crate::math::sqrt(v.iter().map(|x| x.norm_sqr()).sum::<f64>());
    let v: Vec<Complex64> = v.iter().map(|x| x / norm).collect();

    let mut w = CMatrix::zeros(dim, rho2.coset_representatives().len());
    for (col, r) in rho2.coset_representatives().iter().enumerate() {
        let m = rho1.matrix(r);
        for (j, vj) in v.iter().enumerate() {
            let (row, p) = m.entry(j);
            w[(row, col)] += p.to_complex() * vj;
        }
    }
    let intertwining_defect = rho1
        .generators()
        .iter()
        .zip(rho2.rep.generators())
        .map(|(g1, g2)| linalg::max_abs_diff(&(&w * g2.to_dense()), &(g1.to_dense() * &w)))
        .fold(0.0, f64::max);
    let unitarity_defect = if w.nrows() == w.ncols() {
        linalg::unitarity_defect(&w)
    } else {
        f64::INFINITY
    };
    let c1 = rho1.characters()?;
    let c2 = rho2.rep.characters()?;
    let inner = c1.iter().zip(&c2).map(|(a, b)| a * b.conj()).sum::<Complex64>() / c1.len() as f64;
    let commutant_dimension = c1.iter().map(|c| c.norm_sqr()).sum::<f64>() / c1.len() as f64;
    Ok(IntertwinerReport {
        dimension: dim,
        intertwiner_dim_characters: inner.re,
        intertwiner_dim_linear: intertwiner_nullity(&rho1, &rho2.rep),
        commutant_dimension,
        unitarity_defect,
        intertwining_defect,
        intertwiner: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::isotropic_subgroups;
    use crate::lattice::{catalog, discriminant_group};
    use crate::linalg::{from_rows, ONE};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn genus_zero_is_trivial() {
        let disc = discriminant_group(&catalog::a(2));
        let rho = schroedinger_irrep(&disc, &Surface::sphere()).unwrap();
        assert_eq!(rho.dimension(), 1);
        assert!(rho.verify_irreducible().unwrap());
    }

    #[test]
    fn z2_torus_matrices() {
        let disc = discriminant_group(&catalog::a(1));
        let rho = schroedinger_irrep(&disc, &Surface::closed(1)).unwrap();
        assert_eq!(rho.dimension(), 2);
        let mult = rho.generators()[0].to_dense();
        let trans = rho.generators()[1].to_dense();
        assert!(linalg::max_abs_diff(&trans, &from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]])) < 1e-15);
        assert!(linalg::max_abs_diff(&mult, &from_rows(&[vec![ONE, ZERO], vec![ZERO, c(-1.0, 0.0)]])) < 1e-15);
        assert!(rho.relations_hold());
        assert!(rho.cocycle_holds_exhaustively().unwrap());
        assert!(rho.verify_irreducible().unwrap());
        assert_eq!(rho.commutant_dimension_linear(), Some(1));
    }

    #[test]
    fn z3_torus_matrices() {
        let disc = discriminant_group(&catalog::a(2));
        let rho = schroedinger_irrep(&disc, &Surface::closed(1)).unwrap();
        assert_eq!(rho.dimension(), 3);
        let mult = &rho.generators()[0];
        let q = disc.quadratic_diagonal()[0];
        // multiplication by e^{2πi·b(g,u)} with b(g,g) ≡ q(g) mod 1
        for u in 0..3 {
            assert_eq!(mult.entry(u).0, u);
            assert_eq!(mult.entry(u).1, Phase::from_rational(q) * u as i64);
        }
        assert!(rho.cocycle_holds_exhaustively().unwrap());
        assert!(rho.verify_irreducible().unwrap());
    }

    #[test]
    fn direct_sum_is_reducible() {
        let disc = discriminant_group(&catalog::a(1));
        let rho = schroedinger_irrep(&disc, &Surface::closed(1)).unwrap();
        let two = rho.direct_sum(&rho).unwrap();
        assert!(!two.verify_irreducible().unwrap());
        assert!((two.commutant_dimension().unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(two.commutant_dimension_linear(), Some(4));
    }

    #[test]
    fn nonclosed_rejected() {
        let disc = discriminant_group(&catalog::a(1));
        let s = Surface::connected(1, &[("x", crate::Orientation::Out)]).unwrap();
        assert!(matches!(schroedinger_irrep(&disc, &s), Err(HeisenbergError::NonclosedSurface)));
    }

    #[test]
    fn schur_orthogonality() {
        for l in [catalog::a(1), catalog::a(2), catalog::d(4), catalog::scaled(2)] {
            let disc = discriminant_group(&l);
            for g in 0..=2 {
                let rho = schroedinger_irrep(&disc, &Surface::closed(g)).unwrap();
                assert!((rho.commutant_dimension().unwrap() - 1.0).abs() < 1e-9);
                assert!(rho.relations_hold());
                assert!(rho.unitarity_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn incremental_walk_matches_product_formula() {
        let disc = discriminant_group(&catalog::scaled(2));
        let rho = schroedinger_irrep(&disc, &Surface::closed(1)).unwrap();
        rho.for_each_element(|i, m| {
            assert_eq!(*m, rho.matrix(&rho.group().element_at(i)));
        });
    }

    #[test]
    fn induced_examples() {
        let disc = discriminant_group(&catalog::scaled(2));
        let s = Surface::closed(1);
        let h = HeisenbergGroup::from_surface(&s, &disc, Cocycle::Polarized);
        // full Lagrangian: irreducible of dimension |A|
        let lag = Subgroup::generated_by(&h, &[vec![1, 0]]).unwrap();
        let chi = Splitting::default_for(&h, &lag).unwrap();
        let ind = induce_from_isotropic(&h, &lag, &chi).unwrap();
        assert_eq!(ind.rep.dimension(), 4);
        assert!(ind.rep.verify_irreducible().unwrap());
        // trivial: regular, commutant |H/Z| = |A|^2
        let triv = Subgroup::trivial(&h);
        let ind = induce_from_isotropic(&h, &triv, &Splitting::default_for(&h, &triv).unwrap()).unwrap();
        assert_eq!(ind.rep.dimension(), 16);
        assert!((ind.rep.commutant_dimension().unwrap() - 16.0).abs() < 1e-9);
        // index-2 subgroup of the Lagrangian: dimension 2|A|
        let half = Subgroup::generated_by(&h, &[vec![2, 0]]).unwrap();
        let ind = induce_from_isotropic(&h, &half, &Splitting::default_for(&h, &half).unwrap()).unwrap();
        assert_eq!(ind.rep.dimension(), 8);
        assert!((ind.rep.commutant_dimension().unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn induced_is_a_representation_and_right_action_commutes() {
        let disc = discriminant_group(&catalog::scaled(2));
        let h = HeisenbergGroup::from_surface(&Surface::closed(1), &disc, Cocycle::Polarized);
        for b in isotropic_subgroups(&h).unwrap() {
            let chi = Splitting::default_for(&h, &b).unwrap();
            let ind = induce_from_isotropic(&h, &b, &chi).unwrap();
            assert!(ind.rep.relations_hold());
            ind.rep.for_each_element(|i, m| assert_eq!(*m, ind.left(&h.element_at(i))));
            let perp = h.perp(&b).unwrap();
            for &p in perp.members() {
                let r = ind.right(&h.element_at(p)).unwrap();
                for g in ind.rep.generators() {
                    assert_eq!(g.compose(&r), r.compose(g));
                }
            }
        }
    }

    #[test]
    fn bad_splitting_rejected() {
        let disc = discriminant_group(&catalog::scaled(2));
        let h = HeisenbergGroup::from_surface(&Surface::closed(1), &disc, Cocycle::Polarized);
        let lag = Subgroup::generated_by(&h, &[vec![1, 0]]).unwrap();
        let other = Subgroup::generated_by(&h, &[vec![0, 1]]).unwrap();
        let chi = Splitting::default_for(&h, &other).unwrap();
        assert!(matches!(induce_from_isotropic(&h, &lag, &chi), Err(HeisenbergError::NotASplitting)));
    }

    #[test]
    fn stone_von_neumann_small() {
        for l in [catalog::a(1), catalog::a(2), catalog::d(4)] {
            let disc = discriminant_group(&l);
            for g in 0..=2 {
                let rep = stone_von_neumann(&disc, &Surface::closed(g)).unwrap();
                assert!(rep.passes(1e-9), "{rep:?}");
            }
        }
    }
}
