//! Number-theoretic and two-dimensional lattice primitives.
//!
//! The two-type solver views a budget `b = (b1, b2)` as a segment from the
//! origin to `b`. Partitions are staircase paths of lattice points; what
//! matters about a point is its slope and its vertical distance to the
//! segment, both handled here as exact integer quantities.

use std::cmp::Ordering;

use num::bigint::{BigInt, BigUint};
use num::integer::gcd;
use num::{Signed, Zero};
use thiserror::Error;

use crate::ratio::ExactRatio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("at least one value must be positive")]
    AllZero,
    #[error("arguments are not coprime")]
    NotCoprime,
    #[error("argument out of range")]
    OutOfRange,
    #[error("slope of a point on the vertical axis is undefined")]
    VerticalSlope,
}

/// A point of the two-dimensional integer lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticePoint2 {
    pub x: u64,
    pub y: u64,
}

impl LatticePoint2 {
    pub fn new(x: u64, y: u64) -> Self {
        LatticePoint2 { x, y }
    }
}

/// Greatest common divisor together with Bezout coefficients:
/// `sum_i coefficients[i] * values[i] = gcd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtEuclidResult {
    pub gcd: u128,
    pub coefficients: Vec<BigInt>,
}

/// Extended Euclidean algorithm for any number of values, folding pairwise
/// left to right. Runs in `O(log^2 sum)` word operations.
pub fn ext_euclid(values: &[u128]) -> Result<ExtEuclidResult, LatticeError> {
    if values.iter().all(|&v| v == 0) {
        return Err(LatticeError::AllZero);
    }
    let mut coefficients = vec![BigInt::from(1)];
    let mut g = values[0];
    for &v in &values[1..] {
        let (g2, s, t) = ext_gcd_pair(g, v);
        for c in &mut coefficients {
            *c *= &s;
        }
        coefficients.push(t);
        g = g2;
    }
    debug_assert_eq!(
        coefficients
            .iter()
            .zip(values)
            .map(|(c, &v)| c * BigInt::from(v))
            .sum::<BigInt>(),
        BigInt::from(g)
    );
    Ok(ExtEuclidResult { gcd: g, coefficients })
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`. `gcd(0, 0) = 0`.
fn ext_gcd_pair(a: u128, b: u128) -> (u128, BigInt, BigInt) {
    let mut r0 = BigInt::from(a);
    let mut r1 = BigInt::from(b);
    let (mut s0, mut s1) = (BigInt::from(1), BigInt::from(0));
    let (mut t0, mut t1) = (BigInt::from(0), BigInt::from(1));
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    let g: BigUint = r0.magnitude().clone();
    (
        g.try_into().expect("gcd no larger than inputs"),
        s0,
        t0,
    )
}

/// Multiplicative inverse of `a` modulo `n >= 2`, in `[1, n-1]`.
pub fn mod_inverse(a: u128, n: u128) -> Result<u128, LatticeError> {
    if n < 2 {
        return Err(LatticeError::OutOfRange);
    }
    let a = a % n;
    if gcd(a, n) != 1 {
        return Err(LatticeError::NotCoprime);
    }
    let (_, s, _) = ext_gcd_pair(a, n);
    let n_big = BigInt::from(n);
    let mut inv = s % &n_big;
    if inv.is_negative() {
        inv += &n_big;
    }
    let inv: u128 = inv
        .magnitude()
        .clone()
        .try_into()
        .expect("residue fits the modulus");
    debug_assert_eq!(mulmod(a, inv, n), 1);
    Ok(inv)
}

fn mulmod(a: u128, b: u128, n: u128) -> u128 {
    // Operands are residues < n; fall back to BigUint when the product
    // cannot be formed in 128 bits.
    match a.checked_mul(b) {
        Some(p) => p % n,
        None => {
            let p = BigUint::from(a) * BigUint::from(b) % BigUint::from(n);
            p.try_into().expect("residue fits u128")
        }
    }
}

/// Vertical distance, scaled by `b1`, from the staircase point
/// `(i, ceil(b2*i/b1))` to the segment joining the origin and `(b1, b2)`:
/// returns `b1 - (b2*i mod b1)`, an integer in `[1, b1-1]`.
///
/// Requires `gcd(b1, b2) = 1`, `b1 <= b2` and `1 <= i <= b1 - 1`.
pub fn vertical_distance_num(i: u64, b1: u64, b2: u64) -> Result<u64, LatticeError> {
    if b1 < 2 || b1 > b2 || i == 0 || i >= b1 {
        return Err(LatticeError::OutOfRange);
    }
    if gcd(b1, b2) != 1 {
        return Err(LatticeError::NotCoprime);
    }
    let residue = ((b2 as u128 % b1 as u128) * i as u128 % b1 as u128) as u64;
    debug_assert!(residue >= 1, "coprime budgets leave a nonzero remainder");
    Ok(b1 - residue)
}

/// Exact slope `y/x` of a point with `x > 0`, in lowest terms.
pub fn slope(p: LatticePoint2) -> Result<ExactRatio, LatticeError> {
    if p.x == 0 {
        return Err(LatticeError::VerticalSlope);
    }
    Ok(ExactRatio::from_integers(p.y as u128, p.x as u128))
}

/// Compares slopes exactly, treating points on the vertical axis as having
/// slope `+infinity`.
pub fn slope_cmp(a: LatticePoint2, b: LatticePoint2) -> Ordering {
    // y_a/x_a vs y_b/x_b  <=>  y_a*x_b vs y_b*x_a, which also orders the
    // vertical cases correctly (anything/0 dominates unless both are).
    match (a.x, b.x) {
        (0, 0) => Ordering::Equal,
        (0, _) => Ordering::Greater,
        (_, 0) => Ordering::Less,
        _ => (a.y as u128 * b.x as u128).cmp(&(b.y as u128 * a.x as u128)),
    }
}

/// Membership in the upper feasible region: `0 <= p <= b`, `p` is neither
/// the origin nor the full budget, and `p` lies weakly above the segment
/// from the origin to `b` (`p.y * b1 >= p.x * b2`, exactly).
pub fn in_upper_region(p: LatticePoint2, b1: u64, b2: u64) -> bool {
    let total = p.x as u128 + p.y as u128;
    p.x <= b1
        && p.y <= b2
        && total >= 1
        && total <= b1 as u128 + b2 as u128 - 1
        && p.y as u128 * b1 as u128 >= p.x as u128 * b2 as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ext_euclid_bezout_identities() {
        let r = ext_euclid(&[5, 7]).unwrap();
        assert_eq!(r.gcd, 1);
        assert_eq!(
            &r.coefficients[0] * 5 + &r.coefficients[1] * 7,
            BigInt::from(1)
        );

        let r = ext_euclid(&[6, 15, 21]).unwrap();
        assert_eq!(r.gcd, 3);
        assert_eq!(
            r.coefficients
                .iter()
                .zip([6u128, 15, 21])
                .map(|(c, v)| c * BigInt::from(v))
                .sum::<BigInt>(),
            BigInt::from(3)
        );

        let r = ext_euclid(&[4, 0]).unwrap();
        assert_eq!(r.gcd, 4);
        assert_eq!(r.coefficients, vec![BigInt::from(1), BigInt::from(0)]);

        assert_eq!(ext_euclid(&[0, 0]).unwrap_err(), LatticeError::AllZero);
    }

    #[test]
    fn ext_euclid_random_identities() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(1..5);
            let values: Vec<u128> = (0..len).map(|_| rng.gen::<u64>() as u128).collect();
            if values.iter().all(|&v| v == 0) {
                continue;
            }
            let r = ext_euclid(&values).unwrap();
            let dot: BigInt = r
                .coefficients
                .iter()
                .zip(&values)
                .map(|(c, &v)| c * BigInt::from(v))
                .sum();
            assert_eq!(dot, BigInt::from(r.gcd));
            for &v in &values {
                assert_eq!(v % r.gcd, 0);
            }
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert_eq!(mod_inverse(7, 5).unwrap(), 3);
        assert_eq!(mod_inverse(4, 8).unwrap_err(), LatticeError::NotCoprime);
        assert_eq!(mod_inverse(3, 1).unwrap_err(), LatticeError::OutOfRange);
    }

    #[test]
    fn mod_inverse_random() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..500 {
            let n = rng.gen_range(2..10_000u128);
            let a = rng.gen_range(1..n);
            if gcd(a, n) != 1 {
                continue;
            }
            let inv = mod_inverse(a, n).unwrap();
            assert!((1..n).contains(&inv));
            assert_eq!(a * inv % n, 1);
        }
    }

    #[test]
    fn vertical_distance_examples() {
        assert_eq!(vertical_distance_num(2, 5, 7).unwrap(), 1);
        assert_eq!(vertical_distance_num(1, 5, 7).unwrap(), 3);
        assert_eq!(vertical_distance_num(1, 2, 3).unwrap(), 1);
        assert_eq!(
            vertical_distance_num(0, 5, 7).unwrap_err(),
            LatticeError::OutOfRange
        );
        assert_eq!(
            vertical_distance_num(5, 5, 7).unwrap_err(),
            LatticeError::OutOfRange
        );
        assert_eq!(
            vertical_distance_num(1, 4, 6).unwrap_err(),
            LatticeError::NotCoprime
        );
    }

    #[test]
    fn vertical_distances_permute_small_range() {
        // For coprime (b1, b2) the map i -> distance is a bijection of
        // {1, ..., b1-1}; checked exhaustively for b1 <= 25 here, the full
        // sweep lives in the acceptance suite.
        for b1 in 2..=25u64 {
            for b2 in b1..=2 * 25 {
                if gcd(b1, b2) != 1 {
                    continue;
                }
                let mut seen = vec![false; b1 as usize];
                for i in 1..b1 {
                    let d = vertical_distance_num(i, b1, b2).unwrap();
                    assert!((1..b1).contains(&d));
                    assert!(!seen[d as usize], "duplicate distance for ({b1},{b2})");
                    seen[d as usize] = true;
                }
            }
        }
    }

    #[test]
    fn slope_examples() {
        assert_eq!(
            slope(LatticePoint2::new(2, 3)).unwrap(),
            ExactRatio::from_integers(3, 2)
        );
        assert_eq!(
            slope(LatticePoint2::new(4, 6)).unwrap(),
            ExactRatio::from_integers(3, 2)
        );
        assert_eq!(
            slope(LatticePoint2::new(5, 2)).unwrap(),
            ExactRatio::from_integers(2, 5)
        );
        assert_eq!(
            slope(LatticePoint2::new(0, 3)).unwrap_err(),
            LatticeError::VerticalSlope
        );
    }

    #[test]
    fn slope_cmp_handles_vertical() {
        let v = LatticePoint2::new(0, 3);
        let p = LatticePoint2::new(2, 3);
        assert_eq!(slope_cmp(v, p), Ordering::Greater);
        assert_eq!(slope_cmp(p, v), Ordering::Less);
        assert_eq!(slope_cmp(v, LatticePoint2::new(0, 9)), Ordering::Equal);
        assert_eq!(
            slope_cmp(LatticePoint2::new(2, 3), LatticePoint2::new(4, 6)),
            Ordering::Equal
        );
    }

    #[test]
    fn upper_region_examples() {
        assert!(in_upper_region(LatticePoint2::new(2, 3), 5, 7));
        assert!(!in_upper_region(LatticePoint2::new(3, 4), 5, 7));
        assert!(!in_upper_region(LatticePoint2::new(0, 0), 5, 7));
        assert!(!in_upper_region(LatticePoint2::new(5, 7), 5, 7));
        assert!(in_upper_region(LatticePoint2::new(0, 1), 5, 7));
    }
}
