//! Conformal-block dimensions and modular data of the abelian theory.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::lattice::{gauss_sum, DiscriminantGroup, EvenLattice, GroupElement};
use crate::linalg::{self, CMatrix};
use crate::phase::Phase;
use crate::surface::{delta_obstruction, glue, BlockLabel, Orientation, Surface, SurfaceError};
use crate::{math, Rational};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModularError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("split does not reproduce the surface: {0}")]
    InvalidSplit(String),
    #[error("Verlinde sum {value} is {deviation:e} away from an integer")]
    VerlindeNotIntegral { value: f64, deviation: f64 },
}

/// `Π_components (|A|^g if δ = 0 else 0)`.
pub fn block_dimension(s: &Surface, labels: &BlockLabel, disc: &DiscriminantGroup) -> Result<u128, SurfaceError> {
    let deltas = delta_obstruction(s, labels, disc)?;
    let zero = disc.zero();
    let order = disc.order() as u128;
    Ok(s.components()
        .iter()
        .zip(&deltas)
        .map(|(c, d)| {
            if *d == zero {
                order.checked_pow(c.genus).expect("block dimension overflows u128")
            } else {
                0
            }
        })
        .product())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorDualityReport {
    pub union_dimension: u128,
    pub product_of_dimensions: u128,
    pub original_dimension: u128,
    pub reversed_dimension: u128,
}

impl TensorDualityReport {
    pub fn holds(&self) -> bool {
        self.union_dimension == self.product_of_dimensions && self.original_dimension == self.reversed_dimension
    }
}

/// Tensor property on `s₁ ⊔ s₂` and duality on `s₁` (orientation reversed, labels negated).
pub fn verify_tensor_duality(
    s1: &Surface,
    l1: &BlockLabel,
    s2: &Surface,
    l2: &BlockLabel,
    disc: &DiscriminantGroup,
) -> Result<TensorDualityReport, SurfaceError> {
    let union = s1.disjoint_union(s2)?;
    let mut labels = l1.clone();
    for (k, v) in l2.iter() {
        labels.insert(k, v.clone());
    }
    let d1 = block_dimension(s1, l1, disc)?;
    let d2 = block_dimension(s2, l2, disc)?;
    Ok(TensorDualityReport {
        union_dimension: block_dimension(&union, &labels, disc)?,
        product_of_dimensions: d1 * d2,
        original_dimension: d1,
        reversed_dimension: block_dimension(&s1.reversed(), &l1.negated(disc), disc)?,
    })
}

/// A surface cut into one or two pieces along matched circle pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub first: Surface,
    pub second: Option<Surface>,
    /// `(out, in)` circle pairs.
    pub matching: Vec<(String, String)>,
}

impl Split {
    pub fn pieces(&self) -> Result<Surface, SurfaceError> {
        match &self.second {
            Some(s) => self.first.disjoint_union(s),
            None => Ok(self.first.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub lhs: u128,
    pub rhs: u128,
    /// Nonzero `(λ_S, product)` terms when requested.
    pub terms: Option<Vec<(Vec<GroupElement>, u128)>>,
}

impl FactorizationReport {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `dim E(Σ, λ) = Σ_{λ_S} dim E(pieces, λ ∪ λ_S ∪ λ_S)`.
pub fn verify_factorization(
    s: &Surface,
    split: &Split,
    labels: &BlockLabel,
    disc: &DiscriminantGroup,
    keep_terms: bool,
) -> Result<FactorizationReport, ModularError> {
    let glued = glue(&split.first, split.second.as_ref(), &split.matching)?;
    if glued.shape() != s.shape() {
        return Err(ModularError::InvalidSplit(format!(
            "glued shape {:?} differs from {:?}",
            glued.shape(),
            s.shape()
        )));
    }
    let mut ids_s: Vec<&str> = s.boundaries().map(|b| b.id.as_str()).collect();
    let mut ids_g: Vec<&str> = glued.boundaries().map(|b| b.id.as_str()).collect();
    ids_s.sort_unstable();
    ids_g.sort_unstable();
    if ids_s != ids_g {
        return Err(ModularError::InvalidSplit(String::from("boundary circles differ")));
    }
    let lhs = block_dimension(s, labels, disc)?;
    let pieces = split.pieces()?;
    let k = split.matching.len();
    let order = disc.order();
    let total = order.checked_pow(k as u32).expect("too many glued circles");
    let mut rhs = 0u128;
    let mut terms = keep_terms.then(Vec::new);
    for idx in 0..total {
        let mut rest = idx;
        let mut lambda = Vec::with_capacity(k);
        let mut l = labels.clone();
        for (out_id, in_id) in &split.matching {
            let a = disc.element_at(rest % order);
            rest /= order;
            l.insert(out_id, a.clone());
            l.insert(in_id, a.clone());
            lambda.push(a);
        }
        let d = block_dimension(&pieces, &l, disc)?;
        rhs += d;
        if d != 0 {
            if let Some(t) = terms.as_mut() {
                t.push((lambda, d));
            }
        }
    }
    Ok(FactorizationReport { lhs, rhs, terms })
}

/// A random cut of a connected surface: separating (two pieces with
/// `g₁ + g₂ + k − 1 = g`) or non-separating (one piece of genus `g − k`).
pub fn random_split<R: Rng + ?Sized>(s: &Surface, rng: &mut R) -> Split {
    assert!(s.is_connected(), "random_split expects a connected surface");
    let c = &s.components()[0];
    let g = c.genus;
    let fresh = |i: usize, o: Orientation| {
        let tag = if o == Orientation::Out { "o" } else { "i" };
        (format!("cut{i}{tag}"), o)
    };
    let separating = g == 0 || rng.gen_bool(0.5);
    if separating {
        let k = rng.gen_range(1..=(g + 1).min(3)) as usize;
        let spare = g + 1 - k as u32;
        let g1 = rng.gen_range(0..=spare);
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        for b in &c.boundaries {
            if rng.gen_bool(0.5) {
                b1.push((b.id.clone(), b.orientation));
            } else {
                b2.push((b.id.clone(), b.orientation));
            }
        }
        let mut matching = Vec::new();
        for i in 0..k {
            let (o, _) = fresh(i, Orientation::Out);
            let (n, _) = fresh(i, Orientation::In);
            b1.push((o.clone(), Orientation::Out));
            b2.push((n.clone(), Orientation::In));
            matching.push((o, n));
        }
        let mk = |genus: u32, bs: &[(String, Orientation)]| {
            let refs: Vec<(&str, Orientation)> = bs.iter().map(|(i, o)| (i.as_str(), *o)).collect();
            Surface::connected(genus, &refs).expect("fresh ids are unique")
        };
        Split {
            first: mk(g1, &b1),
            second: Some(mk(spare - g1, &b2)),
            matching,
        }
    } else {
        let k = rng.gen_range(1..=g.min(3)) as usize;
        let mut bs: Vec<(String, Orientation)> = c.boundaries.iter().map(|b| (b.id.clone(), b.orientation)).collect();
        let mut matching = Vec::new();
        for i in 0..k {
            let (o, _) = fresh(i, Orientation::Out);
            let (n, _) = fresh(i, Orientation::In);
            bs.push((o.clone(), Orientation::Out));
            bs.push((n.clone(), Orientation::In));
            matching.push((o, n));
        }
        let refs: Vec<(&str, Orientation)> = bs.iter().map(|(i, o)| (i.as_str(), *o)).collect();
        Split {
            first: Surface::connected(g - k as u32, &refs).expect("fresh ids are unique"),
            second: None,
            matching,
        }
    }
}

/// Connected surface of genus `g` with `b` circles `c0, c1, …` of random orientation.
pub fn random_connected_surface<R: Rng + ?Sized>(g: u32, b: usize, rng: &mut R) -> Surface {
    let ids: Vec<String> = (0..b).map(|i| format!("c{i}")).collect();
    let bs: Vec<(&str, Orientation)> = ids
        .iter()
        .map(|id| (id.as_str(), if rng.gen_bool(0.5) { Orientation::Out } else { Orientation::In }))
        .collect();
    Surface::connected(g, &bs).unwrap()
}

/// Uniform labels; with probability `balance` the last circle of each
/// component is chosen so that `δ = 0`.
pub fn random_labels<R: Rng + ?Sized>(s: &Surface, disc: &DiscriminantGroup, balance: f64, rng: &mut R) -> BlockLabel {
    let mut l = BlockLabel::new();
    for c in s.components() {
        let mut acc = disc.zero();
        let n = c.boundaries.len();
        let balanced = rng.gen_bool(balance);
        for (i, b) in c.boundaries.iter().enumerate() {
            let a = if balanced && i + 1 == n {
                // choose a with sign·a = −acc
                disc.scale(-b.orientation.sign(), &acc)
            } else {
                disc.element_at(rng.gen_range(0..disc.order()))
            };
            acc = disc.add(&acc, &disc.scale(b.orientation.sign(), &a));
            l.insert(&b.id, a);
        }
    }
    l
}

/// `S_ab = |A|^{−1/2}·e^{−2πi·b(a,b)}`.
pub fn s_matrix(disc: &DiscriminantGroup) -> CMatrix {
    let n = disc.order();
    let norm = 1.0 / math::sqrt(n as f64);
    let elems: Vec<GroupElement> = disc.elements().collect();
    CMatrix::from_fn(n, n, |i, j| (-disc.bilinear(&elems[i], &elems[j])).to_complex() * norm)
}

/// `T_a = e^{πi·q(a)}`.
pub fn t_matrix(disc: &DiscriminantGroup) -> CMatrix {
    let diag: Vec<Complex64> = disc
        .elements()
        .map(|a| Phase::from_rational(disc.quadratic(&a) / Rational::from_integer(2)).to_complex())
        .collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// `T_a = e^{πi·q(a)}·e^{−2πiσ/24}`.
pub fn framed_t_matrix(disc: &DiscriminantGroup) -> CMatrix {
    let sigma = gauss_sum(disc).sigma as i64;
    t_matrix(disc) * Phase::new(-sigma, 24).to_complex()
}

/// Modular data with the central charge `c = ℓ·rank` kept as metadata.
#[derive(Clone, Debug)]
pub struct ModularData {
    pub s: CMatrix,
    pub t: CMatrix,
    pub sigma: u8,
    pub central_charge: Rational,
}

pub fn modular_data(lat: &EvenLattice, disc: &DiscriminantGroup) -> ModularData {
    ModularData {
        s: s_matrix(disc),
        t: t_matrix(disc),
        sigma: gauss_sum(disc).sigma,
        central_charge: Rational::from_integer(lat.level_ell() * lat.rank() as i64),
    }
}

/// Charge conjugation `a ↦ −a` as a permutation matrix.
pub fn charge_conjugation(disc: &DiscriminantGroup) -> CMatrix {
    let n = disc.order();
    let mut c = CMatrix::zeros(n, n);
    for a in disc.elements() {
        c[(disc.index_of(&disc.neg(&a)), disc.index_of(&a))] = linalg::ONE;
    }
    c
}

/// Defects of the genus-one relations.
#[derive(Clone, Debug)]
pub struct Genus1Report {
    pub s: CMatrix,
    pub t: CMatrix,
    pub sigma: u8,
    pub s_unitarity: f64,
    pub s_symmetry: f64,
    /// `|S² − C|`.
    pub s_squared_conjugation: f64,
    /// `|S⁴ − 1|`.
    pub s_fourth: f64,
    /// `|(ST)³ − e^{2πiσ/8}S²|`.
    pub st_cubed: f64,
    /// `|(ST_f)³ − S²|` with the framed `T`.
    pub st_cubed_framed: f64,
}

impl Genus1Report {
    pub fn max_defect(&self) -> f64 {
        [
            self.s_unitarity,
            self.s_symmetry,
            self.s_squared_conjugation,
            self.s_fourth,
            self.st_cubed,
            self.st_cubed_framed,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Relations of the `SL(2, Z)` action on `C^A` for a given `S`.
pub fn genus1_relations(disc: &DiscriminantGroup, s: &CMatrix) -> Genus1Report {
    let t = t_matrix(disc);
    let tf = framed_t_matrix(disc);
    let sigma = gauss_sum(disc).sigma;
    let n = disc.order();
    let id = CMatrix::identity(n, n);
    let s2 = s * s;
    let st = s * &t;
    let stf = s * &tf;
    let anomaly = Phase::new(sigma as i64, 8).to_complex();
    Genus1Report {
        s_unitarity: linalg::unitarity_defect(s),
        s_symmetry: linalg::max_abs_diff(s, &s.transpose()),
        s_squared_conjugation: linalg::max_abs_diff(&s2, &charge_conjugation(disc)),
        s_fourth: linalg::max_abs_diff(&(&s2 * &s2), &id),
        st_cubed: linalg::max_abs_diff(&(&st * &st * &st), &(&s2 * anomaly)),
        st_cubed_framed: linalg::max_abs_diff(&(&stf * &stf * &stf), &s2),
        s: s.clone(),
        t,
        sigma,
    }
}

pub fn genus1_mcg_rep(disc: &DiscriminantGroup) -> Genus1Report {
    genus1_relations(disc, &s_matrix(disc))
}

/// `N_{ab}^c = dim E(pants; a in, b in, c out)`, indexed `[a][b][c]`.
pub fn fusion_rules(disc: &DiscriminantGroup) -> Vec<Vec<Vec<u128>>> {
    let pants = Surface::connected(0, &[("a", Orientation::In), ("b", Orientation::In), ("c", Orientation::Out)]).unwrap();
    let elems: Vec<GroupElement> = disc.elements().collect();
    elems
        .iter()
        .map(|a| {
            elems
                .iter()
                .map(|b| {
                    elems
                        .iter()
                        .map(|c| {
                            let l = BlockLabel::new().with("a", a.clone()).with("b", b.clone()).with("c", c.clone());
                            block_dimension(&pants, &l, disc).unwrap()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `Σ_e N_{ab}^e N_{ec}^d = Σ_f N_{bc}^f N_{af}^d` for all `a, b, c, d`.
pub fn fusion_is_associative(n: &[Vec<Vec<u128>>]) -> bool {
    let k = n.len();
    (0..k).all(|a| {
        (0..k).all(|b| {
            (0..k).all(|c| {
                (0..k).all(|d| {
                    let l: u128 = (0..k).map(|e| n[a][b][e] * n[e][c][d]).sum();
                    let r: u128 = (0..k).map(|f| n[b][c][f] * n[a][f][d]).sum();
                    l == r
                })
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerlindeReport {
    pub value: f64,
    pub rounded: u128,
    pub block_dimension: u128,
    /// `|value − rounded|` before rounding, maximized over components.
    pub deviation: f64,
}

impl VerlindeReport {
    pub fn agrees(&self) -> bool {
        self.rounded == self.block_dimension
    }
}

/// `Σ_j S_{0j}^{2−2g−n}·Π_i S_{λᵢ j}` per component (incoming labels negated),
/// multiplied over components.
pub fn verlinde_check(s: &Surface, labels: &BlockLabel, disc: &DiscriminantGroup) -> Result<VerlindeReport, ModularError> {
    let smat = s_matrix(disc);
    let zero = disc.index_of(&disc.zero());
    let mut value = 1.0f64;
    let mut rounded = 1u128;
    let mut deviation = 0.0f64;
    for c in s.components() {
        let exponent = 2 - 2 * c.genus as i32 - c.boundaries.len() as i32;
        let mut idx = Vec::with_capacity(c.boundaries.len());
        for b in &c.boundaries {
            let l = labels.get(&b.id).ok_or_else(|| SurfaceError::MissingLabel(b.id.clone()))?;
            if !disc.contains(l) {
                return Err(SurfaceError::InvalidLabel(b.id.clone()).into());
            }
            let l = if b.orientation == Orientation::In { disc.neg(l) } else { l.clone() };
            idx.push(disc.index_of(&l));
        }
        let terms: Vec<Complex64> = (0..disc.order())
            .map(|j| {
                idx.iter()
                    .fold(smat[(zero, j)].powi(exponent), |acc, &i| acc * smat[(i, j)])
            })
            .collect();
        let v = math::pairwise_sum(&terms);
        let r = math::round(v.re);
        let dev = (v - Complex64::new(r, 0.0)).norm();
        if dev > 1e-4 || r < 0.0 {
            return Err(ModularError::VerlindeNotIntegral { value: v.re, deviation: dev });
        }
        value *= v.re;
        rounded *= r as u128;
        deviation = deviation.max(dev);
    }
    Ok(VerlindeReport {
        value,
        rounded,
        block_dimension: block_dimension(s, labels, disc)?,
        deviation,
    })
}
