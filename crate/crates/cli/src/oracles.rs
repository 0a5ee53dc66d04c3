//! Independent reference computations used by the acceptance suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use lattice_cft_core::linalg::{self, CMatrix, RMatrix};
use lattice_cft_core::{Complex64, DiscriminantGroup, EvenLattice, GroupElement, Rational};

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn cis(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * turns)
}

fn gram_rows(lat: &EvenLattice) -> Vec<Vec<i64>> {
    let g = lat.gram();
    (0..lat.rank()).map(|i| (0..lat.rank()).map(|j| g[(i, j)]).collect()).collect()
}

/// Gauss–Jordan over the rationals.
pub fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from_integer(x)).collect();
            r.extend((0..n).map(|j| Rational::from_integer((i == j) as i64)));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| a[r][col] != Rational::from_integer(0)).expect("nonsingular");
        a.swap(col, p);
        let inv = Rational::from_integer(1) / a[col][col];
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && a[r][col] != Rational::from_integer(0) {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Classes of `G⁻¹y mod Z^r` for `y ∈ [0, det)^r`, each with `q = yᵀG⁻¹y mod 2`.
pub fn dual_cosets(lat: &EvenLattice) -> Vec<(Vec<Rational>, Rational)> {
    let gram = gram_rows(lat);
    let r = gram.len();
    let inv = rational_inverse(&gram);
    let det = lat.det() as usize;
    let mut seen = BTreeMap::new();
    for idx in 0..det.pow(r as u32) {
        let mut rest = idx;
        let y: Vec<i64> = (0..r)
            .map(|_| {
                let c = (rest % det) as i64;
                rest /= det;
                c
            })
            .collect();
        let x: Vec<Rational> = (0..r)
            .map(|i| (0..r).map(|j| inv[i][j] * Rational::from_integer(y[j])).sum())
            .collect();
        let frac: Vec<Rational> = x.iter().map(|v| v - v.floor()).collect();
        let q: Rational = (0..r).map(|i| Rational::from_integer(y[i]) * x[i]).sum();
        seen.entry(frac).or_insert(q - (q / 2).floor() * 2);
    }
    seen.into_iter().collect()
}

/// Modular data rebuilt from the cosets of the dual lattice.
pub struct CosetModularData {
    pub order: usize,
    /// Unnormalized `Σ e^{πi q}`.
    pub gauss_sum: Complex64,
    pub sigma: u8,
    /// Largest of the S-unitarity, S² = C and (ST)³ = e^{2πiσ/8}S² defects.
    pub max_defect: f64,
    /// Sorted quadratic values, for comparison with the discriminant form.
    pub quadratic_values: Vec<Rational>,
}

pub fn coset_modular_data(lat: &EvenLattice) -> CosetModularData {
    let cosets = dual_cosets(lat);
    let gram = gram_rows(lat);
    let n = cosets.len();
    let pair = |x: &[Rational], y: &[Rational]| -> Rational {
        let mut acc = Rational::from_integer(0);
        for i in 0..x.len() {
            for j in 0..x.len() {
                acc += x[i] * Rational::from_integer(gram[i][j]) * y[j];
            }
        }
        acc
    };
    let norm = 1.0 / (n as f64).sqrt();
    let s = CMatrix::from_fn(n, n, |i, j| cis(-to_f64(pair(&cosets[i].0, &cosets[j].0))) * norm);
    let t = CMatrix::from_fn(n, n, |i, j| if i == j { cis(to_f64(cosets[i].1) / 2.0) } else { Complex64::new(0.0, 0.0) });
    let gauss: Complex64 = cosets.iter().map(|(_, q)| cis(to_f64(*q) / 2.0)).sum();
    let sigma = (gauss.arg() / (PI / 4.0)).round().rem_euclid(8.0) as u8;
    let conj = CMatrix::from_fn(n, n, |i, j| {
        let neg: Vec<Rational> = cosets[j].0.iter().map(|v| (-v) - (-v).floor()).collect();
        Complex64::new((neg == cosets[i].0) as u8 as f64, 0.0)
    });
    let s2 = &s * &s;
    let st = &s * &t;
    let st3 = &st * &st * &st;
    let unit = linalg::unitarity_defect(&s);
    let c_def = linalg::max_abs_diff(&s2, &conj);
    let st_def = linalg::max_abs_diff(&st3, &(&s2 * cis(sigma as f64 / 8.0)));
    let mut quadratic_values: Vec<Rational> = cosets.iter().map(|c| c.1).collect();
    quadratic_values.sort();
    CosetModularData { order: n, gauss_sum: gauss, sigma, max_defect: unit.max(c_def).max(st_def), quadratic_values }
}

/// Direct `Σ_{|n| ≤ 20} e^{−πtn²}`.
pub fn theta3_direct(t: f64) -> f64 {
    (-20i32..=20).map(|n| (-PI * t * (n * n) as f64).exp()).sum()
}

/// `θ[a,b](z + τm + n) / θ[a,b](z)` written out from the series.
pub fn automorphy_factor(a: &[f64], b: &[f64], m: &[i64], n: &[i64], z: &[Complex64], tau: &CMatrix) -> Complex64 {
    let g = a.len();
    let i = Complex64::new(0.0, 1.0);
    let mut phase = Complex64::new(0.0, 0.0);
    for k in 0..g {
        phase += 2.0 * PI * i * (a[k] * n[k] as f64);
        phase -= 2.0 * PI * i * m[k] as f64 * (z[k] + b[k]);
        for l in 0..g {
            phase -= PI * i * tau[(k, l)] * (m[k] * m[l]) as f64;
        }
    }
    phase.exp()
}

/// Number of `r`-colored partitions of `n`.
pub fn colored_partitions(n: u32, r: usize) -> u128 {
    fn count(n: u32, mode: u32, colors: usize, color: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        if mode > n {
            return 0;
        }
        let (next_mode, next_color) = if color + 1 == colors { (mode + 1, 0) } else { (mode, color + 1) };
        let mut total = 0;
        let mut k = 0;
        while k * mode <= n {
            total += count(n - k * mode, next_mode, colors, next_color);
            k += 1;
        }
        total
    }
    count(n, 1, r, 0)
}

/// Ground energy and shifted state counts: lattice vectors in a box, oscillators by recursion.
pub fn brute_force_character(lat: &EvenLattice, disc: &DiscriminantGroup, phi: &GroupElement, e: u32) -> (Rational, Vec<u128>) {
    let base = disc.lift(phi);
    let r = lat.rank();
    let bx = 6i64;
    let side = (2 * bx + 1) as usize;
    let energies: Vec<Rational> = (0..side.pow(r as u32))
        .map(|idx| {
            let mut rest = idx;
            let x: Vec<Rational> = base
                .iter()
                .map(|b| {
                    let m = (rest % side) as i64 - bx;
                    rest /= side;
                    b + Rational::from_integer(m)
                })
                .collect();
            lat.inner(&x, &x) / 2
        })
        .collect();
    let ground = *energies.iter().min().expect("nonempty box");
    let mut c = vec![0u128; e as usize + 1];
    for h in energies {
        let s = (h - ground).to_integer();
        for k in s..=e as i64 {
            c[k as usize] += colored_partitions((k - s) as u32, r);
        }
    }
    (ground, c)
}

/// `|⟨ψ₀, ψ_T⟩| / (‖ψ₀‖·‖ψ_T‖)` for `ψ_T = exp(−½xᵀKx)`, `K = (1 − T)(1 + T)⁻¹`,
/// by the trapezoid rule on a box; `T` complex symmetric of size 1 or 2.
pub fn quadrature_overlap(t: &CMatrix) -> f64 {
    let n = t.nrows();
    let id = CMatrix::identity(n, n);
    let k = (&id - t) * (&id + t).try_inverse().expect("1 + T invertible");
    let re = RMatrix::from_fn(n, n, |i, j| k[(i, j)].re);
    let lam = linalg::symmetric_eigenvalues(&re).into_iter().fold(1.0, f64::min);
    let half = (40.0 / lam).sqrt();
    let pts = if n == 1 { 4001 } else { 601 };
    let h = 2.0 * half / (pts - 1) as f64;
    let grid: Vec<f64> = (0..pts).map(|i| -half + i as f64 * h).collect();
    let mut cross = Complex64::new(0.0, 0.0);
    let mut norm0 = 0.0;
    let mut norm_t = 0.0;
    let mut visit = |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let mut q = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                q += k[(i, j)] * x[i] * x[j];
            }
        }
        let psi0 = (-0.5 * r2).exp();
        let psi = (-0.5 * q).exp();
        cross += psi * psi0;
        norm0 += psi0 * psi0;
        norm_t += psi.norm_sqr();
    };
    match n {
        1 => grid.iter().for_each(|&x| visit(&[x])),
        2 => {
            for &x in &grid {
                for &y in &grid {
                    visit(&[x, y]);
                }
            }
        }
        _ => panic!("quadrature oracle supports dimensions 1 and 2"),
    }
    cross.norm() / (norm0 * norm_t).sqrt()
}
