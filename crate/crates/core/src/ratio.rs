//! Exact nonnegative rationals.
//!
//! Every diversity value, slope and epsilon in this crate is an
//! [`ExactRatio`]: a `num/den` pair of arbitrary-precision naturals kept in
//! lowest terms. Ordering and equality are exact integer comparisons; the
//! `f64` rendering exists for display and is never fed back into a decision.

use std::fmt;

use num::bigint::BigUint;
use num::rational::Ratio;
use num::traits::ToPrimitive;
use num::{One, Zero};

/// An exact nonnegative rational, always stored in lowest terms with a
/// positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(Ratio<BigUint>);

impl ExactRatio {
    /// Builds `num/den`, reducing to lowest terms.
    ///
    /// Panics if `den` is zero.
    pub fn new(num: BigUint, den: BigUint) -> Self {
        ExactRatio(Ratio::new(num, den))
    }

    pub fn from_integers(num: u128, den: u128) -> Self {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn integer(value: u128) -> Self {
        Self::new(BigUint::from(value), BigUint::one())
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.numer().is_zero()
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    /// Exact complement `1 - self`, or `None` when `self > 1`.
    pub fn one_minus(&self) -> Option<ExactRatio> {
        if self.numer() > self.denom() {
            return None;
        }
        let num = self.denom() - self.numer();
        Some(Self::new(num, self.denom().clone()))
    }

    /// Nearest `f64` to the exact value.
    ///
    /// The quotient is formed with 64 significant bits before rounding, so
    /// the result is within one unit in the last place of the true value
    /// (subnormal underflow aside).
    pub fn to_f64(&self) -> f64 {
        big_ratio_to_f64(self.numer(), self.denom())
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

fn big_ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let nbits = num.bits() as i64;
    let dbits = den.bits() as i64;
    // Scale so the integer quotient keeps ~64 significant bits, divide,
    // then undo the scaling with exact powers of two.
    let shift = 64 - (nbits - dbits);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        (num >> (-shift) as u64) / den
    };
    let q = q.to_f64().expect("quotient has at most 66 bits");
    ldexp(q, -shift)
}

/// `x * 2^e` with exact power-of-two factors.
fn ldexp(x: f64, mut e: i64) -> f64 {
    let mut r = x;
    while e > 0 {
        let step = e.min(1000);
        r *= pow2(step);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        r *= pow2(-step);
        e += step;
    }
    r
}

fn pow2(e: i64) -> f64 {
    debug_assert!((-1000..=1000).contains(&e));
    f64::from_bits(((1023 + e) as u64) << 52)
}
