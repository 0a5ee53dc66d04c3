//! Riemann theta functions with characteristics, the Heisenberg action on
//! sections, and the heat equation.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, CMatrix, RMatrix};
use crate::math::{self, PI};
use crate::Rational;

pub const MAX_RADIUS: u32 = 60;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 0x7e7a_5eed;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ThetaError {
    #[error("tau must be a nonempty square symmetric matrix")]
    NotSymmetric,
    #[error("Im tau is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("truncation radius {required} exceeds cap {cap}")]
    TruncationOverflow { required: u32, cap: u32 },
    #[error("polarization type must be positive with d_i | d_(i+1)")]
    InvalidPolarization,
    #[error("polarization type out of range (g <= 3, product <= 64)")]
    PolarizationTooLarge,
    #[error("numerical rank {rank} below expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A point of the Siegel upper half space.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    tau: CMatrix,
    im_inv: RMatrix,
    lambda_min: f64,
}

impl SiegelPoint {
    pub fn new(tau: CMatrix) -> Result<Self, ThetaError> {
        let g = tau.nrows();
        if g == 0 || tau.ncols() != g || linalg::max_abs_diff(&tau, &tau.transpose()) > 1e-12 {
            return Err(ThetaError::NotSymmetric);
        }
        let y = RMatrix::from_fn(g, g, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
        let lambda_min = linalg::symmetric_eigenvalues(&y)[0];
        if lambda_min <= 1e-12 {
            return Err(ThetaError::NotPositiveDefinite { min_eigenvalue: lambda_min });
        }
        let im_inv = y.try_inverse().ok_or(ThetaError::NotPositiveDefinite { min_eigenvalue: lambda_min })?;
        Ok(SiegelPoint { tau, im_inv, lambda_min })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, ThetaError> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(ThetaError::NotSymmetric);
        }
        Self::new(linalg::from_rows(rows))
    }

    /// `i·I_g`.
    pub fn imaginary_identity(g: usize) -> Self {
        Self::new(CMatrix::identity(g, g) * Complex64::new(0.0, 1.0)).unwrap()
    }

    pub fn genus(&self) -> usize {
        self.tau.nrows()
    }

    pub fn tau(&self) -> &CMatrix {
        &self.tau
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn im_inverse(&self) -> &RMatrix {
        &self.im_inv
    }

    /// `τ·m + n`.
    pub fn lattice_vector(&self, m: &[i64], n: &[i64]) -> Vec<Complex64> {
        (0..self.genus())
            .map(|i| (0..self.genus()).map(|j| self.tau[(i, j)] * m[j] as f64).sum::<Complex64>() + n[i] as f64)
            .collect()
    }

    /// `H(u, w) = ūᵀ·(Im τ)⁻¹·w`.
    pub fn hermitian_form(&self, u: &[Complex64], w: &[Complex64]) -> Complex64 {
        let g = self.genus();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                acc += u[i].conj() * self.im_inv[(i, j)] * w[j];
            }
        }
        acc
    }

    /// `ω = Im H`; integral on the period lattice.
    pub fn symplectic_form(&self, u: &[Complex64], w: &[Complex64]) -> f64 {
        self.hermitian_form(u, w).im
    }

    fn check_len(&self, v: &[Complex64]) -> Result<(), ThetaError> {
        if v.len() != self.genus() {
            return Err(ThetaError::DimensionMismatch { expected: self.genus(), got: v.len() });
        }
        Ok(())
    }
}

/// Characteristics `[a, b]` and polarization type `(d₁, …, d_g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSpec {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub polarization: Vec<u64>,
}

impl ThetaSpec {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>, polarization: Vec<u64>) -> Result<Self, ThetaError> {
        if b.len() != a.len() {
            return Err(ThetaError::DimensionMismatch { expected: a.len(), got: b.len() });
        }
        if polarization.len() != a.len() {
            return Err(ThetaError::DimensionMismatch { expected: a.len(), got: polarization.len() });
        }
        validate_polarization(&polarization)?;
        Ok(ThetaSpec { a, b, polarization })
    }

    pub fn zero(g: usize) -> Self {
        let z = vec![Rational::from_integer(0); g];
        ThetaSpec { a: z.clone(), b: z, polarization: vec![1; g] }
    }

    pub fn with_characteristic(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self, ThetaError> {
        let g = a.len();
        Self::new(a, b, vec![1; g])
    }

    pub fn genus(&self) -> usize {
        self.a.len()
    }
}

fn validate_polarization(d: &[u64]) -> Result<(), ThetaError> {
    if d.contains(&0) || d.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(ThetaError::InvalidPolarization);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// Floating-point error of the box sum.
    pub rounding_bound: f64,
    pub radius: u32,
}

impl ThetaValue {
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.rounding_bound
    }
}

struct Series {
    a: Vec<f64>,
    b: Vec<f64>,
    center: Vec<i64>,
    /// `e^{π·cᵀYc}` with `c = −Y⁻¹ Im z`.
    scale: f64,
}

impl Series {
    fn new(spec: &ThetaSpec, z: &[Complex64], tau: &SiegelPoint) -> Self {
        let g = tau.genus();
        let y = RMatrix::from_fn(g, g, |i, j| tau.tau[(i, j)].im);
        let imz = DVector::from_iterator(g, z.iter().map(|w| w.im));
        let c = -(&tau.im_inv * imz);
        let a: Vec<f64> = spec.a.iter().map(to_f64).collect();
        let b: Vec<f64> = spec.b.iter().map(to_f64).collect();
        let center = (0..g).map(|i| math::round(c[i] - a[i]) as i64).collect();
        let scale = math::exp(PI * c.dot(&(&y * &c)));
        Series { a, b, center, scale }
    }

    /// Bound on the sum of moduli of the terms outside the box of radius `r`.
    fn tail_bound(&self, lambda: f64, r: u32) -> f64 {
        let g = self.a.len() as i32;
        let t = r as f64 + 0.5;
        let one_dim = 2.0 * math::exp(-PI * lambda * t * t) / (1.0 - math::exp(-2.0 * PI * lambda * t));
        let full = 2.0 + 1.0 / math::sqrt(lambda);
        self.scale * g as f64 * one_dim * math::powf(full, (g - 1) as f64)
    }

    /// Box sum and a bound on its rounding error.
    fn sum(&self, z: &[Complex64], tau: &CMatrix, r: u32) -> (Complex64, f64) {
        let g = self.a.len();
        let side = 2 * r as i64 + 1;
        let count = (side as usize).pow(g as u32);
        let mut terms = Vec::with_capacity(count);
        let mut rounding = 0.0;
        let depth = math::ceil(math::ln(count as f64) / math::ln(2.0)) + 8.0;
        let mut n = vec![0i64; g];
        let mut m = vec![0f64; g];
        for idx in 0..count {
            let mut rest = idx;
            for i in (0..g).rev() {
                n[i] = self.center[i] - r as i64 + (rest % side as usize) as i64;
                rest /= side as usize;
            }
            for i in 0..g {
                m[i] = n[i] as f64 + self.a[i];
            }
            let mut quad = Complex64::new(0.0, 0.0);
            for i in 0..g {
                for j in 0..g {
                    quad += tau[(i, j)] * (m[i] * m[j]);
                }
            }
            let mut lin = Complex64::new(0.0, 0.0);
            for i in 0..g {
                lin += (z[i] + self.b[i]) * m[i];
            }
            let e = Complex64::new(0.0, PI) * quad + Complex64::new(0.0, 2.0 * PI) * lin;
            let t = e.exp();
            rounding += t.norm() * (e.norm() + depth);
            terms.push(t);
        }
        (math::pairwise_sum(&terms), rounding * f64::EPSILON)
    }
}

fn check_spec(spec: &ThetaSpec, z: &[Complex64], tau: &SiegelPoint) -> Result<(), ThetaError> {
    tau.check_len(z)?;
    if spec.genus() != tau.genus() {
        return Err(ThetaError::DimensionMismatch { expected: tau.genus(), got: spec.genus() });
    }
    Ok(())
}

/// Smallest box radius whose tail bound is below `tol`.
pub fn truncation_radius(spec: &ThetaSpec, z: &[Complex64], tau: &SiegelPoint, tol: f64) -> Result<u32, ThetaError> {
    if !(tol > 0.0) {
        return Err(ThetaError::InvalidTolerance);
    }
    check_spec(spec, z, tau)?;
    let s = Series::new(spec, z, tau);
    (1..=MAX_RADIUS)
        .find(|&r| s.tail_bound(tau.lambda_min, r) < tol)
        .ok_or(ThetaError::TruncationOverflow { required: MAX_RADIUS + 1, cap: MAX_RADIUS })
}

/// `Σ_n exp(πi(n+a)ᵀτ(n+a) + 2πi(n+a)ᵀ(z+b))` to absolute error `tol`.
pub fn theta(spec: &ThetaSpec, z: &[Complex64], tau: &SiegelPoint, tol: f64) -> Result<ThetaValue, ThetaError> {
    let r = truncation_radius(spec, z, tau, tol)?;
    Ok(theta_with_radius(spec, z, tau, r))
}

/// Box sum of fixed radius around the dominant term.
pub fn theta_with_radius(spec: &ThetaSpec, z: &[Complex64], tau: &SiegelPoint, radius: u32) -> ThetaValue {
    check_spec(spec, z, tau).expect("dimension mismatch");
    let s = Series::new(spec, z, tau);
    let (value, rounding_bound) = s.sum(z, &tau.tau, radius);
    ThetaValue {
        value,
        tail_bound: s.tail_bound(tau.lambda_min, radius),
        rounding_bound,
        radius,
    }
}

/// `e^{(π/2)·zᵀY⁻¹z}·θ[a,b](z)`, the section in the unitary trivialization.
pub fn canonical_theta(spec: &ThetaSpec, z: &[Complex64], tau: &SiegelPoint, tol: f64) -> Result<Complex64, ThetaError> {
    let t = theta(spec, z, tau, tol)?;
    Ok(canonical_factor(z, tau) * t.value)
}

fn canonical_factor(z: &[Complex64], tau: &SiegelPoint) -> Complex64 {
    let g = tau.genus();
    let mut q = Complex64::new(0.0, 0.0);
    for i in 0..g {
        for j in 0..g {
            q += z[i] * tau.im_inv[(i, j)] * z[j];
        }
    }
    (q * (PI / 2.0)).exp()
}

/// `e^{2πi(aᵀn − bᵀm)}·e^{−πi mᵀτm − 2πi mᵀz}`.
pub fn classical_automorphy(spec: &ThetaSpec, m: &[i64], n: &[i64], z: &[Complex64], tau: &SiegelPoint) -> Complex64 {
    let g = tau.genus();
    let mut e = Complex64::new(0.0, 0.0);
    for i in 0..g {
        e += Complex64::new(0.0, 2.0 * PI * (to_f64(&spec.a[i]) * n[i] as f64 - to_f64(&spec.b[i]) * m[i] as f64));
        e -= Complex64::new(0.0, 2.0 * PI) * z[i] * m[i] as f64;
        for j in 0..g {
            e -= Complex64::new(0.0, PI) * tau.tau[(i, j)] * (m[i] * m[j]) as f64;
        }
    }
    e.exp()
}

/// Heisenberg action on sections of the polarizing line bundle:
/// `(T_v f)(w) = e^{−⟨v,w⟩/2 − ⟨v,v⟩/4}·f(w + v)` with `⟨u,w⟩ = 2π·H(u,w)`.
#[derive(Clone, Debug)]
pub struct HeisenbergAction<'a> {
    tau: &'a SiegelPoint,
}

impl<'a> HeisenbergAction<'a> {
    pub fn new(tau: &'a SiegelPoint) -> Self {
        HeisenbergAction { tau }
    }

    fn inner(&self, u: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.tau.hermitian_form(u, w) * (2.0 * PI)
    }

    pub fn factor(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        (-self.inner(v, w) / 2.0 - self.inner(v, v) / 4.0).exp()
    }

    pub fn translate<F>(&self, v: &[Complex64], f: F, w: &[Complex64]) -> Complex64
    where
        F: Fn(&[Complex64]) -> Complex64,
    {
        let shifted: Vec<Complex64> = w.iter().zip(v).map(|(a, b)| a + b).collect();
        self.factor(v, w) * f(&shifted)
    }

    /// `T_{v₁}T_{v₂} = e^{iπω(v₁,v₂)}·T_{v₁+v₂}`.
    pub fn cocycle(&self, v1: &[Complex64], v2: &[Complex64]) -> Complex64 {
        Complex64::new(0.0, PI * self.tau.symplectic_form(v1, v2)).exp()
    }

    /// The semicharacter `χ` with `T_λ θ̃[a,b] = χ(λ)·θ̃[a,b]` for `λ = τm + n`.
    pub fn semicharacter(&self, spec: &ThetaSpec, m: &[i64], n: &[i64]) -> Complex64 {
        let mut t = 0.0;
        for i in 0..m.len() {
            t += to_f64(&spec.a[i]) * n[i] as f64 - to_f64(&spec.b[i]) * m[i] as f64;
            t += 0.5 * (m[i] * n[i]) as f64;
        }
        math::cis_turns(t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub dimension: u64,
    pub numerical_rank: usize,
    pub samples: usize,
    pub singular_values: Vec<f64>,
}

/// `Π dᵢ`, certified by the numerical rank of the basis `θ[c, 0]`,
/// `c ∈ D⁻¹Z^g/Z^g`, sampled at `3·Πdᵢ` seeded points.
pub fn theta_space_dimension(polarization: &[u64]) -> Result<DimensionReport, ThetaError> {
    let g = polarization.len();
    let tau = default_tau(g.max(1));
    theta_space_dimension_at(polarization, &tau, DEFAULT_SEED)
}

fn default_tau(g: usize) -> SiegelPoint {
    let tau = CMatrix::from_fn(g, g, |i, j| {
        if i == j {
            Complex64::new(0.1 * i as f64, 1.0)
        } else {
            Complex64::new(0.2, 0.15)
        }
    });
    SiegelPoint::new(tau).unwrap()
}

pub fn theta_space_dimension_at(polarization: &[u64], tau: &SiegelPoint, seed: u64) -> Result<DimensionReport, ThetaError> {
    validate_polarization(polarization)?;
    let g = polarization.len();
    let dim: u64 = polarization.iter().product();
    if g == 0 || g > 3 || dim > 64 {
        return Err(ThetaError::PolarizationTooLarge);
    }
    if tau.genus() != g {
        return Err(ThetaError::DimensionMismatch { expected: g, got: tau.genus() });
    }
    let basis = theta_basis(polarization);
    let samples = 3 * dim as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = CMatrix::zeros(samples, basis.len());
    for row in 0..samples {
        let u: Vec<f64> = (0..g).map(|_| rng.gen::<f64>()).collect();
        let v: Vec<f64> = (0..g).map(|i| rng.gen::<f64>() * polarization[i] as f64).collect();
        let z: Vec<Complex64> = (0..g)
            .map(|i| (0..g).map(|j| tau.tau[(i, j)] * u[j]).sum::<Complex64>() + v[i])
            .collect();
        for (col, spec) in basis.iter().enumerate() {
            m[(row, col)] = theta(spec, &z, tau, 1e-14)?.value;
        }
        let norm = m.row(row).norm();
        if norm > 0.0 {
            for col in 0..basis.len() {
                m[(row, col)] /= norm;
            }
        }
    }
    let sv = linalg::singular_values(&m);
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > 1e-8 * top).count();
    if rank < dim as usize {
        return Err(ThetaError::RankDeficient { rank, expected: dim as usize });
    }
    Ok(DimensionReport { dimension: dim, numerical_rank: rank, samples, singular_values: sv })
}

/// `θ[c, 0]` for `c ∈ D⁻¹Z^g/Z^g` in lexicographic order.
pub fn theta_basis(polarization: &[u64]) -> Vec<ThetaSpec> {
    let g = polarization.len();
    let total: u64 = polarization.iter().product();
    (0..total)
        .map(|idx| {
            let mut rest = idx;
            let mut a = vec![Rational::from_integer(0); g];
            for i in (0..g).rev() {
                let d = polarization[i];
                a[i] = Rational::new((rest % d) as i64, d as i64);
                rest /= d;
            }
            ThetaSpec { a, b: vec![Rational::from_integer(0); g], polarization: polarization.to_vec() }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteDifference {
    Central,
    /// Central differences at `h` and `h/2` combined to cancel the `h²` term.
    Richardson,
}

/// `max_{j≤k} |∂f/∂τ_jk − ∂²f/∂z_j∂z_k / (2πi(1+δ_jk))|` for any `f(z, τ)`.
pub fn heat_residual_of<F>(f: F, z: &[Complex64], tau: &CMatrix, h: f64, scheme: FiniteDifference) -> f64
where
    F: Fn(&[Complex64], &CMatrix) -> Complex64,
{
    let g = z.len();
    let central = |h: f64, j: usize, k: usize| -> Complex64 {
        let shift_tau = |s: f64| {
            let mut t = tau.clone();
            t[(j, k)] += s;
            if j != k {
                t[(k, j)] += s;
            }
            t
        };
        let dtau = (f(z, &shift_tau(h)) - f(z, &shift_tau(-h))) / (2.0 * h);
        let shift_z = |sj: f64, sk: f64| {
            let mut w = z.to_vec();
            w[j] += sj;
            w[k] += sk;
            w
        };
        let dzz = if j == k {
            (f(&shift_z(h, 0.0), tau) - f(z, tau) * 2.0 + f(&shift_z(-h, 0.0), tau)) / (h * h)
        } else {
            (f(&shift_z(h, h), tau) - f(&shift_z(h, -h), tau) - f(&shift_z(-h, h), tau) + f(&shift_z(-h, -h), tau))
                / (4.0 * h * h)
        };
        let delta = if j == k { 2.0 } else { 1.0 };
        dtau - dzz / Complex64::new(0.0, 2.0 * PI * delta)
    };
    let mut worst = 0.0f64;
    for j in 0..g {
        for k in j..g {
            let d = match scheme {
                FiniteDifference::Central => central(h, j, k),
                FiniteDifference::Richardson => (central(h / 2.0, j, k) * 4.0 - central(h, j, k)) / 3.0,
            };
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Heat-equation residual of `θ[a,b]` with one truncation box for all stencil points.
pub fn heat_equation_residual(
    spec: &ThetaSpec,
    z: &[Complex64],
    tau: &SiegelPoint,
    h: f64,
    scheme: FiniteDifference,
) -> Result<f64, ThetaError> {
    let r = (truncation_radius(spec, z, tau, 1e-16)? + 2).min(MAX_RADIUS);
    let series = Series::new(spec, z, tau);
    Ok(heat_residual_of(|w, t| series.sum(w, t, r).0, z, &tau.tau, h, scheme))
}

/// Least-squares slope of `log residual` against `log h`.
pub fn convergence_slope(steps: &[f64], residuals: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|&h| math::ln(h)).collect();
    let ys: Vec<f64> = residuals.iter().map(|&r| math::ln(r)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
