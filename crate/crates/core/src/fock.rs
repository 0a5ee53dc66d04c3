//! Truncated positive-energy representations of the loop group of a torus.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{DiscriminantGroup, EvenLattice, GroupElement};
use crate::linalg::{self, CMatrix, RMatrix};
use crate::math::{self, PI};
use crate::Rational;

pub const MAX_SEWING_ENERGY: u32 = 12;
pub const MAX_OVERLAP_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FockError {
    #[error("loops have ranks {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("label is not an element of the discriminant group")]
    InvalidLabel,
    #[error("sector energies are not congruent mod 1")]
    NonIntegralEnergy,
    #[error("energy {got} exceeds the supported maximum {max}")]
    EnergyTooLarge { got: u32, max: u32 },
    #[error("T must be square of size at most {max}, got {rows}x{cols}")]
    BadOverlapShape { rows: usize, cols: usize, max: usize },
    #[error("T is not a strict contraction (norm {norm})")]
    NotContractive { norm: f64 },
}

/// `ξ(θ) = Σ_m ξ_m e^{imθ}` with `ξ_m ∈ C^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigLoop {
    rank: usize,
    modes: BTreeMap<i64, Vec<Complex64>>,
}

impl TrigLoop {
    pub fn zero(rank: usize) -> Self {
        TrigLoop { rank, modes: BTreeMap::new() }
    }

    pub fn from_modes(rank: usize, modes: BTreeMap<i64, Vec<Complex64>>) -> Self {
        assert!(modes.values().all(|v| v.len() == rank), "mode vectors must have length rank");
        TrigLoop { rank, modes }
    }

    pub fn constant(v: &[f64]) -> Self {
        let mut l = Self::zero(v.len());
        l.add_mode(0, v.iter().map(|&x| Complex64::new(x, 0.0)).collect());
        l
    }

    /// `v·cos(kθ)`.
    pub fn cos(k: i64, v: &[f64]) -> Self {
        let mut l = Self::zero(v.len());
        let half: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x / 2.0, 0.0)).collect();
        l.add_mode(k, half.clone());
        l.add_mode(-k, half);
        l
    }

    /// `v·sin(kθ)`.
    pub fn sin(k: i64, v: &[f64]) -> Self {
        let mut l = Self::zero(v.len());
        l.add_mode(k, v.iter().map(|&x| Complex64::new(0.0, -x / 2.0)).collect());
        l.add_mode(-k, v.iter().map(|&x| Complex64::new(0.0, x / 2.0)).collect());
        l
    }

    pub fn add_mode(&mut self, m: i64, v: Vec<Complex64>) {
        assert_eq!(v.len(), self.rank);
        let slot = self.modes.entry(m).or_insert_with(|| vec![Complex64::zero(); v.len()]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s += x;
        }
    }

    pub fn plus(&self, other: &TrigLoop) -> TrigLoop {
        let mut out = self.clone();
        for (&m, v) in &other.modes {
            out.add_mode(m, v.clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modes(&self) -> &BTreeMap<i64, Vec<Complex64>> {
        &self.modes
    }

    pub fn eval(&self, theta: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.rank];
        for (&m, v) in &self.modes {
            let e = Complex64::new(0.0, m as f64 * theta).exp();
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * e;
            }
        }
        out
    }

    pub fn derivative(&self) -> TrigLoop {
        let modes = self
            .modes
            .iter()
            .map(|(&m, v)| (m, v.iter().map(|x| x * Complex64::new(0.0, m as f64)).collect()))
            .collect();
        TrigLoop { rank: self.rank, modes }
    }
}

/// `ω(ξ, η) = ∫ ⟨ξ, dη⟩ = −2π Σ_m im·⟨ξ_m, η_{−m}⟩` for the standard inner product on `C^r`.
pub fn loop_cocycle(xi: &TrigLoop, eta: &TrigLoop) -> Result<f64, FockError> {
    if xi.rank != eta.rank {
        return Err(FockError::RankMismatch(xi.rank, eta.rank));
    }
    let mut acc = Complex64::zero();
    for (&m, x) in &xi.modes {
        if let Some(y) = eta.modes.get(&-m) {
            let pair: Complex64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            acc += Complex64::new(0.0, m as f64) * pair;
        }
    }
    Ok((acc * (-2.0 * PI)).re)
}

/// Oscillator truncation: `r` colors, modes `1..=N`, energy at most `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeTruncation {
    pub rank: usize,
    pub max_mode: u32,
    pub max_energy: u32,
}

/// Occupation-number basis ordered by energy, then lexicographically.
/// Slot `(n − 1)·r + c` holds the occupation of mode `n`, color `c`.
#[derive(Clone, Debug)]
pub struct FockBasis {
    truncation: ModeTruncation,
    states: Vec<Vec<u32>>,
    energies: Vec<u32>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(truncation: ModeTruncation) -> Self {
        let slots = truncation.rank * truncation.max_mode as usize;
        let mut states = Vec::new();
        let mut cur = vec![0u32; slots];
        enumerate_occupations(&truncation, 0, 0, &mut cur, &mut states);
        let energy = |s: &Vec<u32>| -> u32 {
            s.iter().enumerate().map(|(i, &k)| k * (i / truncation.rank + 1) as u32).sum()
        };
        states.sort_by(|a, b| energy(a).cmp(&energy(b)).then_with(|| a.cmp(b)));
        let energies = states.iter().map(energy).collect();
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        FockBasis { truncation, states, energies, index }
    }

    pub fn truncation(&self) -> ModeTruncation {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn energy(&self, i: usize) -> u32 {
        self.energies[i]
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    pub fn vacuum(&self) -> usize {
        0
    }

    fn slot(&self, mode: u32, color: usize) -> usize {
        (mode as usize - 1) * self.truncation.rank + color
    }

    /// States whose energy is at most `E − N`.
    pub fn interior_count(&self) -> usize {
        let t = self.truncation;
        self.energies.iter().filter(|&&e| e + t.max_mode <= t.max_energy).count()
    }
}

fn enumerate_occupations(t: &ModeTruncation, slot: usize, energy: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slot == cur.len() {
        out.push(cur.clone());
        return;
    }
    let n = (slot / t.rank + 1) as u32;
    let mut k = 0;
    while energy + k * n <= t.max_energy {
        cur[slot] = k;
        enumerate_occupations(t, slot + 1, energy + k * n, cur, out);
        k += 1;
    }
    cur[slot] = 0;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    Annihilation,
    Creation,
}

/// `a_{n,c}|k⟩ = √(nk)|k−1⟩`, `a†_{n,c}|k⟩ = √(n(k+1))|k+1⟩`, restricted to the basis.
/// Each column holds the target index and the square of the coefficient.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    pub mode: u32,
    pub color: usize,
    pub kind: ModeKind,
    action: Vec<Option<(usize, u64)>>,
}

impl ModeOperator {
    pub fn new(basis: &FockBasis, mode: u32, color: usize, kind: ModeKind) -> Self {
        let slot = basis.slot(mode, color);
        let action = (0..basis.len())
            .map(|i| {
                let mut s = basis.state(i).to_vec();
                let k = s[slot] as u64;
                let coeff = match kind {
                    ModeKind::Annihilation => {
                        if k == 0 {
                            return None;
                        }
                        s[slot] -= 1;
                        mode as u64 * k
                    }
                    ModeKind::Creation => {
                        s[slot] += 1;
                        mode as u64 * (k + 1)
                    }
                };
                basis.index_of(&s).map(|j| (j, coeff))
            })
            .collect();
        ModeOperator { mode, color, kind, action }
    }

    /// Target index and squared coefficient on basis vector `i`.
    pub fn on_basis(&self, i: usize) -> Option<(usize, u64)> {
        self.action[i]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (i, a) in self.action.iter().enumerate() {
            if let Some((j, c)) = a {
                out[*j] += math::sqrt(*c as f64) * v[i];
            }
        }
        out
    }

    pub fn to_dense(&self) -> RMatrix {
        let n = self.action.len();
        let mut m = RMatrix::zeros(n, n);
        for (i, a) in self.action.iter().enumerate() {
            if let Some((j, c)) = a {
                m[(*j, i)] = math::sqrt(*c as f64);
            }
        }
        m
    }
}

/// `a_{n,c}` and `a†_{n,c}` for every mode and color, in that order.
pub fn mode_operators(basis: &FockBasis) -> Vec<(ModeOperator, ModeOperator)> {
    let t = basis.truncation();
    let mut out = Vec::new();
    for n in 1..=t.max_mode {
        for c in 0..t.rank {
            out.push((
                ModeOperator::new(basis, n, c, ModeKind::Annihilation),
                ModeOperator::new(basis, n, c, ModeKind::Creation),
            ));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorReport {
    pub basis_size: usize,
    pub interior_states: usize,
    pub checked: usize,
    pub failures: usize,
}

impl CommutatorReport {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }

    pub fn coverage(&self) -> f64 {
        self.interior_states as f64 / self.basis_size as f64
    }
}

/// `√p = s·√f` with `f` squarefree.
fn split_square(mut p: u64) -> (u64, u64) {
    let mut s = 1;
    let mut f = 1;
    let mut q = 2;
    while q * q <= p {
        while p.is_multiple_of(q * q) {
            p /= q * q;
            s *= q;
        }
        if p.is_multiple_of(q) {
            p /= q;
            f *= q;
        }
        q += 1;
    }
    (s, f * p)
}

/// Exact check of `[a_{m,c}, a†_{n,c'}] = m·δ_{mn}δ_{cc'}` on every state
/// with energy at most `E − max(m, n)`.
pub fn commutator_check(basis: &FockBasis) -> CommutatorReport {
    let ops = mode_operators(basis);
    let e_max = basis.truncation().max_energy;
    let mut checked = 0;
    let mut failures = 0;
    for (a, _) in &ops {
        for (_, ad) in &ops {
            let top = a.mode.max(ad.mode);
            for s in 0..basis.len() {
                if basis.energy(s) + top > e_max {
                    continue;
                }
                checked += 1;
                let mut acc: BTreeMap<(usize, u64), i64> = BTreeMap::new();
                let mut push = |first: &ModeOperator, second: &ModeOperator, sign: i64| {
                    if let Some((t1, p1)) = first.on_basis(s) {
                        if let Some((t2, p2)) = second.on_basis(t1) {
                            let (sq, f) = split_square(p1 * p2);
                            *acc.entry((t2, f)).or_insert(0) += sign * sq as i64;
                        }
                    }
                };
                push(ad, a, 1);
                push(a, ad, -1);
                let diagonal = a.mode == ad.mode && a.color == ad.color;
                if diagonal {
                    *acc.entry((s, 1)).or_insert(0) -= a.mode as i64;
                }
                if acc.values().any(|&v| v != 0) {
                    failures += 1;
                }
            }
        }
    }
    CommutatorReport { basis_size: basis.len(), interior_states: basis.interior_count(), checked, failures }
}

/// Lattice vectors `x = offset + μ`, `μ ∈ Z^r`, with `xᵀGx ≤ max_norm`, sorted by
/// norm and then coordinates.
pub fn coset_vectors(lat: &EvenLattice, offset: &[Rational], max_norm: Rational) -> Vec<(Vec<Rational>, Rational)> {
    let r = lat.rank();
    let gram = lat.gram();
    let g = RMatrix::from_fn(r, r, |i, j| gram[(i, j)] as f64);
    let q = pohst_form(&g);
    let off: Vec<f64> = offset.iter().map(|x| *x.numer() as f64 / *x.denom() as f64).collect();
    let bound = *max_norm.numer() as f64 / *max_norm.denom() as f64 + 1e-9;
    let mut out = Vec::new();
    let mut mu = vec![0i64; r];
    pohst(&q, &off, r, bound, &mut mu, &mut |mu: &[i64]| {
        let x: Vec<Rational> = offset.iter().zip(mu).map(|(o, &m)| o + Rational::from_integer(m)).collect();
        let n = lat.inner(&x, &x);
        if n <= max_norm {
            out.push((x, n));
        }
    });
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// `Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²`.
fn pohst_form(g: &RMatrix) -> RMatrix {
    let r = g.nrows();
    let mut q = g.clone();
    for i in 0..r {
        for j in (i + 1)..r {
            q[(j, i)] = q[(i, j)];
            q[(i, j)] /= q[(i, i)];
        }
        for k in (i + 1)..r {
            for l in k..r {
                q[(k, l)] -= q[(k, i)] * q[(i, l)];
            }
        }
    }
    q
}

fn pohst(q: &RMatrix, off: &[f64], level: usize, budget: f64, mu: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
    if level == 0 {
        visit(mu);
        return;
    }
    let i = level - 1;
    let r = off.len();
    let centre: f64 = -(i + 1..r).map(|j| q[(i, j)] * (off[j] + mu[j] as f64)).sum::<f64>();
    let half = math::sqrt(budget.max(0.0) / q[(i, i)]);
    let lo = math::ceil(centre - half - off[i] - 1e-9) as i64;
    let hi = math::floor(centre + half - off[i] + 1e-9) as i64;
    for m in lo..=hi {
        mu[i] = m;
        let d = off[i] + m as f64 - centre;
        let rest = budget - q[(i, i)] * d * d;
        if rest >= -1e-9 {
            pohst(q, off, i, rest, mu, visit);
        }
    }
    mu[i] = 0;
}

/// Minimal-norm representative of `φ` in `Λ°`, ties broken lexicographically.
pub fn minimal_lift(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement) -> Result<Vec<Rational>, FockError> {
    if !disc.contains(phi) {
        return Err(FockError::InvalidLabel);
    }
    let start = disc.lift(phi);
    let bound = lat.inner(&start, &start);
    Ok(coset_vectors(lat, &start, bound).swap_remove(0).0)
}

/// Coefficients of `Π_{k≥1}(1 − q^k)^{−r}` up to `q^E`.
pub fn colored_partition_counts(rank: usize, max_energy: u32) -> Vec<u128> {
    let e = max_energy as usize;
    let mut p = vec![0u128; e + 1];
    p[0] = 1;
    for k in 1..=e {
        for _ in 0..rank {
            for n in k..=e {
                p[n] += p[n - k];
            }
        }
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorCharacter {
    pub lift: Vec<Rational>,
    pub ground_energy: Rational,
    pub coefficients: Vec<u128>,
}

fn sector_ground(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement) -> Result<(Vec<Rational>, Rational), FockError> {
    let lift = minimal_lift(lat, disc, phi)?;
    let ground = lat.inner(&lift, &lift) / Rational::from_integer(2);
    Ok((lift, ground))
}

/// `q^{−h}·Θ_{λ+Λ}(q)/Π(1 − q^k)^r` truncated at `q^E`.
pub fn sector_character(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement, max_energy: u32) -> Result<SectorCharacter, FockError> {
    let (lift, ground) = sector_ground(lat, disc, phi)?;
    let e = max_energy as usize;
    let two = Rational::from_integer(2);
    let bound = (ground + Rational::from_integer(max_energy as i64)) * two;
    let mut theta = vec![0u128; e + 1];
    for (_, n) in coset_vectors(lat, &lift, bound) {
        let shift = n / two - ground;
        if !shift.is_integer() || shift.is_negative() {
            return Err(FockError::NonIntegralEnergy);
        }
        theta[shift.to_integer() as usize] += 1;
    }
    let p = colored_partition_counts(lat.rank(), max_energy);
    let coefficients = (0..=e).map(|n| (0..=n).map(|k| theta[k] * p[n - k]).sum()).collect();
    Ok(SectorCharacter { lift, ground_energy: ground, coefficients })
}

/// A state `|λ+μ; occupations⟩`; occupations are `(mode, color, count)` with count > 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FockState {
    pub sector: Vec<Rational>,
    pub occupation: Vec<(u32, usize, u32)>,
}

impl FockState {
    pub fn oscillator_energy(&self) -> u32 {
        self.occupation.iter().map(|&(n, _, k)| n * k).sum()
    }

    pub fn energy(&self, lat: &EvenLattice) -> Rational {
        lat.inner(&self.sector, &self.sector) / Rational::from_integer(2) + Rational::from_integer(self.oscillator_energy() as i64)
    }
}

/// All states of the sector `φ` with energy at most `h_φ + E`.
pub fn sector_states(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement, max_energy: u32) -> Result<Vec<FockState>, FockError> {
    let (lift, ground) = sector_ground(lat, disc, phi)?;
    let two = Rational::from_integer(2);
    let top = ground + Rational::from_integer(max_energy as i64);
    let basis = FockBasis::new(ModeTruncation { rank: lat.rank(), max_mode: max_energy.max(1), max_energy });
    let mut out = Vec::new();
    for (x, n) in coset_vectors(lat, &lift, top * two) {
        let e = n / two;
        for i in 0..basis.len() {
            if e + Rational::from_integer(basis.energy(i) as i64) > top {
                break;
            }
            let occupation = basis
                .state(i)
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(slot, &k)| ((slot / lat.rank() + 1) as u32, slot % lat.rank(), k))
                .collect();
            out.push(FockState { sector: x.clone(), occupation });
        }
    }
    Ok(out)
}

/// Character by explicit state enumeration.
pub fn enumerated_character(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement, max_energy: u32) -> Result<Vec<u128>, FockError> {
    let (_, ground) = sector_ground(lat, disc, phi)?;
    let mut c = vec![0u128; max_energy as usize + 1];
    for s in sector_states(lat, disc, phi, max_energy)? {
        let shift = s.energy(lat) - ground;
        if !shift.is_integer() {
            return Err(FockError::NonIntegralEnergy);
        }
        c[shift.to_integer() as usize] += 1;
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveEnergyReport {
    pub ground_energy: Option<Rational>,
    pub holds: bool,
}

/// Spectrum contained in `h + Z≥0` with `h ≥ 0` the minimum.
pub fn positive_energy_check(spectrum: &[Rational]) -> PositiveEnergyReport {
    let ground = spectrum.iter().min().copied();
    let holds = match ground {
        None => false,
        Some(h) => !h.is_negative() && spectrum.iter().all(|e| (e - h).is_integer()),
    };
    PositiveEnergyReport { ground_energy: ground, holds }
}

pub fn sector_spectrum(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement, max_energy: u32) -> Result<Vec<Rational>, FockError> {
    Ok(sector_states(lat, disc, phi, max_energy)?.iter().map(|s| s.energy(lat)).collect())
}

/// Two-variable table keyed by `(L, R)` energies.
pub type EnergyTable = BTreeMap<(Rational, Rational), u128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusReport {
    pub sewn: EnergyTable,
    pub direct: EnergyTable,
}

impl AnnulusReport {
    pub fn agrees(&self) -> bool {
        self.sewn == self.direct
    }
}

/// `Σ_φ χ_φ(q)·χ_φ(q̄)` against the annulus state space
/// `{(v, w) ∈ Λ° × Λ° : v − w ∈ Λ}` with oscillators on both sides, `L + R ≤ E`.
pub fn annulus_sewing_check(lat: &EvenLattice, disc: &DiscriminantGroup, max_energy: u32) -> Result<AnnulusReport, FockError> {
    if max_energy > MAX_SEWING_ENERGY {
        return Err(FockError::EnergyTooLarge { got: max_energy, max: MAX_SEWING_ENERGY });
    }
    let e = Rational::from_integer(max_energy as i64);
    let two = Rational::from_integer(2);
    let mut sewn = EnergyTable::new();
    for phi in disc.elements() {
        let (_, h) = sector_ground(lat, disc, &phi)?;
        let room = e - h * two;
        if room.is_negative() {
            continue;
        }
        let k = room.floor().to_integer() as u32;
        let c = sector_character(lat, disc, &phi, k)?.coefficients;
        for n in 0..=k {
            for m in 0..=(k - n) {
                let key = (h + Rational::from_integer(n as i64), h + Rational::from_integer(m as i64));
                *sewn.entry(key).or_insert(0) += c[n as usize] * c[m as usize];
            }
        }
    }
    let osc = oscillator_counts(lat.rank(), max_energy);
    let mut direct = EnergyTable::new();
    for phi in disc.elements() {
        let vs: Vec<Rational> = coset_vectors(lat, &disc.lift(&phi), e * two).into_iter().map(|(_, n)| n / two).collect();
        for &ev in &vs {
            for &ew in &vs {
                let room = e - ev - ew;
                if room.is_negative() {
                    continue;
                }
                let k = room.floor().to_integer() as usize;
                for a in 0..=k {
                    for b in 0..=(k - a) {
                        let key = (ev + Rational::from_integer(a as i64), ew + Rational::from_integer(b as i64));
                        *direct.entry(key).or_insert(0) += osc[a] * osc[b];
                    }
                }
            }
        }
    }
    Ok(AnnulusReport { sewn, direct })
}

/// Number of oscillator states at each energy, by enumeration.
fn oscillator_counts(rank: usize, max_energy: u32) -> Vec<u128> {
    let basis = FockBasis::new(ModeTruncation { rank, max_mode: max_energy.max(1), max_energy });
    let mut c = vec![0u128; max_energy as usize + 1];
    for i in 0..basis.len() {
        c[basis.energy(i) as usize] += 1;
    }
    c
}

/// `det(1 − T*T)^{1/4}`, the modulus of the vacuum overlap under the
/// Bogoliubov transformation with off-diagonal block `T`.
pub fn bogoliubov_overlap(t: &CMatrix) -> Result<f64, FockError> {
    let (rows, cols) = t.shape();
    if rows != cols || rows == 0 || rows > MAX_OVERLAP_DIM {
        return Err(FockError::BadOverlapShape { rows, cols, max: MAX_OVERLAP_DIM });
    }
    let m = CMatrix::identity(rows, rows) - t.adjoint() * t;
    let l = linalg::hermitian_cholesky(&m).ok_or_else(|| FockError::NotContractive { norm: linalg::operator_norm(t) })?;
    let diag: f64 = (0..rows).map(|i| l[(i, i)].norm()).product();
    Ok(math::sqrt(diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{catalog, discriminant_group};
    use crate::IntMatrix;

    #[test]
    fn cocycle_examples() {
        let c = TrigLoop::cos(1, &[1.0]);
        let s = TrigLoop::sin(1, &[1.0]);
        assert!((loop_cocycle(&c, &s).unwrap() - PI).abs() < 1e-14);
        assert!((loop_cocycle(&s, &c).unwrap() + PI).abs() < 1e-14);
        assert_eq!(loop_cocycle(&c, &c).unwrap(), 0.0);
        assert_eq!(loop_cocycle(&TrigLoop::constant(&[2.0]), &s).unwrap(), 0.0);
        assert!(loop_cocycle(&c, &TrigLoop::cos(1, &[1.0, 0.0])).is_err());
    }

    #[test]
    fn mode_operator_examples() {
        let basis = FockBasis::new(ModeTruncation { rank: 1, max_mode: 3, max_energy: 4 });
        let ops = mode_operators(&basis);
        assert_eq!(ops[0].0.on_basis(basis.vacuum()), None);
        let one = ops[0].1.on_basis(basis.vacuum()).unwrap();
        let two = ops[0].1.on_basis(one.0).unwrap();
        assert_eq!(basis.energy(two.0), 2);
        assert_eq!(one.1 * two.1, 2);
        let r = commutator_check(&basis);
        assert!(r.holds() && r.checked > 0);
    }

    #[test]
    fn commutators_two_colors() {
        let mut last = 0.0;
        for e in 3..=9 {
            let basis = FockBasis::new(ModeTruncation { rank: 2, max_mode: 3, max_energy: e });
            let r = commutator_check(&basis);
            assert!(r.holds());
            assert!(r.coverage() >= last);
            last = r.coverage();
        }
    }

    #[test]
    fn split_square_examples() {
        assert_eq!(split_square(12), (2, 3));
        assert_eq!(split_square(36), (6, 1));
        assert_eq!(split_square(7), (1, 7));
        assert_eq!(split_square(1), (1, 1));
    }

    #[test]
    fn a1_characters() {
        let lat = catalog::a(1);
        let disc = discriminant_group(&lat);
        let c0 = sector_character(&lat, &disc, &disc.zero(), 3).unwrap();
        assert_eq!(c0.coefficients, vec![1, 3, 4, 7]);
        assert_eq!(c0.ground_energy, Rational::from_integer(0));
        let c1 = sector_character(&lat, &disc, &disc.generator(0), 2).unwrap();
        assert_eq!(c1.ground_energy, Rational::new(1, 4));
        assert_eq!(c1.coefficients, vec![2, 2, 6]);
        assert_eq!(c1.lift, vec![Rational::new(-1, 2)]);
        assert_eq!(enumerated_character(&lat, &disc, &disc.generator(0), 6).unwrap(), sector_character(&lat, &disc, &disc.generator(0), 6).unwrap().coefficients);
    }

    #[test]
    fn vacuum_is_unique() {
        for (_, lat) in catalog::bundled() {
            let disc = discriminant_group(&lat);
            assert_eq!(sector_character(&lat, &disc, &disc.zero(), 0).unwrap().coefficients, vec![1]);
        }
    }

    #[test]
    fn coset_vectors_e8_roots() {
        let lat = catalog::e(8);
        let v = coset_vectors(&lat, &[Rational::from_integer(0); 8], Rational::from_integer(2));
        assert_eq!(v.len(), 241);
    }

    #[test]
    fn annulus() {
        let lat = catalog::a(1);
        let disc = discriminant_group(&lat);
        let r = annulus_sewing_check(&lat, &disc, 0).unwrap();
        assert!(r.agrees());
        assert_eq!(r.sewn.values().sum::<u128>(), 1);
        assert!(annulus_sewing_check(&lat, &disc, 4).unwrap().agrees());
        let z2z2 = EvenLattice::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap()).unwrap();
        assert!(annulus_sewing_check(&z2z2, &discriminant_group(&z2z2), 3).unwrap().agrees());
        assert!(annulus_sewing_check(&lat, &disc, 13).is_err());
    }

    #[test]
    fn positive_energy() {
        let lat = catalog::a(1);
        let disc = discriminant_group(&lat);
        let vac = positive_energy_check(&sector_spectrum(&lat, &disc, &disc.zero(), 4).unwrap());
        assert_eq!(vac, PositiveEnergyReport { ground_energy: Some(Rational::from_integer(0)), holds: true });
        let spec = sector_spectrum(&lat, &disc, &disc.generator(0), 4).unwrap();
        let r = positive_energy_check(&spec);
        assert_eq!(r.ground_energy, Some(Rational::new(1, 4)));
        assert!(r.holds);
        let negated: Vec<Rational> = spec.iter().map(|e| -e).collect();
        assert!(!positive_energy_check(&negated).holds);
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(bogoliubov_overlap(&CMatrix::zeros(2, 2)).unwrap(), 1.0);
        let t = CMatrix::from_element(1, 1, Complex64::new(0.5, 0.0));
        assert!((bogoliubov_overlap(&t).unwrap() - 0.75f64.powf(0.25)).abs() < 1e-15);
        let mut last = 1.0;
        for k in 1..20 {
            let t = CMatrix::from_element(1, 1, Complex64::new(1.0 - 0.5f64.powi(k), 0.0));
            let v = bogoliubov_overlap(&t).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(matches!(
            bogoliubov_overlap(&CMatrix::identity(2, 2)),
            Err(FockError::NotContractive { .. })
        ));
        assert!(bogoliubov_overlap(&(CMatrix::identity(5, 5) * Complex64::new(0.1, 0.0))).is_err());
    }
}
