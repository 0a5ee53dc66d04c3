//! Thin wrappers over `libm` so numerical code reads like `std` code.

#![allow(dead_code)]

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `e^{2πi·t}` for a real `t`.
#[inline]
pub(crate) fn cis_turns(t: f64) -> num_complex::Complex64 {
    let a = TAU * t;
    num_complex::Complex64::new(cos(a), sin(a))
}

/// Pairwise (tree) summation; the result does not depend on how callers
/// partition the terms as long as the order is fixed.
pub(crate) fn pairwise_sum(terms: &[num_complex::Complex64]) -> num_complex::Complex64 {
    match terms.len() {
        0 => num_complex::Complex64::new(0.0, 0.0),
        1 => terms[0],
        n if n <= 8 => terms.iter().fold(num_complex::Complex64::new(0.0, 0.0), |a, b| a + b),
        n => {
            let mid = n / 2;
            pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
        }
    }
}
