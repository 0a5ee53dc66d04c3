//! Exact arithmetic in the cyclotomic ring `Z[ζ_N]`.
//!
//! Elements are stored as integer combinations of `ζ_N^k`, `0 ≤ k < N`.
//! Equality is decided after reduction modulo the cyclotomic polynomial `Φ_N`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::phase::Phase;

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: usize,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0);
        Cyclotomic {
            n,
            coeffs: vec![0; n],
        }
    }

    pub fn from_integer(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = k;
        z
    }

    /// `ζ_N^k`.
    pub fn root(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[k.rem_euclid(n as i64) as usize] = 1;
        z
    }

    /// `e^{2πi·p}`; panics unless the denominator of `p` divides `N`.
    pub fn from_phase(n: usize, p: Phase) -> Self {
        let v = p.value();
        let d = *v.denom() as usize;
        assert!(n.is_multiple_of(d), "phase denominator {d} does not divide {n}");
        Self::root(n, *v.numer() * (n / d) as i64)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Add `c·ζ_N^k`.
    pub fn add_root(&mut self, k: i64, c: i64) {
        self.coeffs[k.rem_euclid(self.n as i64) as usize] += c;
    }

    pub fn scale(&self, c: i64) -> Self {
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Complex conjugate, `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.add_root(-(k as i64), c);
        }
        out
    }

    /// Canonical form: remainder modulo `Φ_N`, degree below `φ(N)`.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.n);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        // Φ_N is monic, so long division stays integral
        for top in (deg..r.len()).rev() {
            let c = r[top];
            if c != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    r[top - deg + i] -= c * p;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Phase::new(k as i64, self.n as i64).to_complex() * c as f64)
            .sum()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "cyclotomic orders differ");
        (self.clone() - other.clone()).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self += rhs;
        self
    }
}

impl AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        assert_eq!(self.n, rhs.n, "cyclotomic orders differ");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-1)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self + (-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.n, rhs.n, "cyclotomic orders differ");
        let mut out = Cyclotomic::zero(self.n);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b != 0 {
                    out.coeffs[(i + j) % self.n] += a * b;
                }
            }
        }
        out
    }
}

/// Coefficients of `Φ_N`, constant term first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = divide_exact(&p, &cyclotomic_polynomial(d));
    }
    p
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            r[k + i] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(8).len(), 5);
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for n in [2usize, 3, 4, 6, 8, 12] {
            let mut s = Cyclotomic::zero(n);
            for k in 0..n as i64 {
                s.add_root(k, 1);
            }
            assert!(s.is_zero(), "n = {n}");
            assert!(!Cyclotomic::root(n, 1).is_zero());
        }
    }

    #[test]
    fn products_and_conjugates() {
        let z = Cyclotomic::root(8, 1);
        let z2 = &z * &z;
        assert_eq!(z2, Cyclotomic::root(8, 2));
        assert_eq!(&z * &z.conj(), Cyclotomic::from_integer(8, 1));
        // ζ_8 + ζ_8⁷ = √2, so its square is 2
        let r2 = Cyclotomic::root(8, 1) + Cyclotomic::root(8, 7);
        assert_eq!(&r2 * &r2, Cyclotomic::from_integer(8, 2));
        assert!((r2.to_complex().re - libm::sqrt(2.0)).abs() < 1e-14);
    }

    #[test]
    fn phases_embed() {
        let p = Cyclotomic::from_phase(12, Phase::new(1, 4));
        assert_eq!(p, Cyclotomic::root(12, 3));
    }
}
