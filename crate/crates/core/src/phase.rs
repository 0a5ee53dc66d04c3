//! Exact elements of `Q/Z`, used for central phases and discriminant forms.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::math;
use crate::Rational;

/// A rational number reduced into `[0, 1)`.
///
/// Arithmetic is exact; the only floating point conversion happens in
/// [`Phase::to_complex`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Phase(Rational);

impl Phase {
    pub const ZERO: Phase = Phase(Rational::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        Self::from_rational(Rational::new(numer, denom))
    }

    pub fn from_rational(r: Rational) -> Self {
        Phase(reduce_mod(r, 1))
    }

    /// Representative in `[0, 1)`.
    pub fn value(self) -> Rational {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    /// `e^{2πi·self}`.
    pub fn to_complex(self) -> Complex64 {
        let r = self.0;
        math::cis_turns(*r.numer() as f64 / *r.denom() as f64)
    }

    pub fn scale(self, k: i64) -> Self {
        Self::from_rational(self.0 * Rational::from_integer(k))
    }
}

/// Reduce `r` into `[0, m)`.
pub fn reduce_mod(r: Rational, m: i64) -> Rational {
    let m = Rational::from_integer(m);
    let q = (r / m).floor();
    let out = r - q * m;
    debug_assert!(!out.is_negative() && out < m);
    out
}

/// Least common multiple of the denominators, at least 1.
pub fn common_denominator<I: IntoIterator<Item = Rational>>(values: I) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, r| acc.lcm(r.denom()))
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::from_rational(self.0 + rhs.0)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::from_rational(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_rational(-self.0)
    }
}

impl Mul<i64> for Phase {
    type Output = Phase;
    fn mul(self, k: i64) -> Phase {
        self.scale(k)
    }
}

impl From<Rational> for Phase {
    fn from(r: Rational) -> Self {
        Phase::from_rational(r)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
