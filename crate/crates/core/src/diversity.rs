//! Simpson dominance index, Hill numbers, and the diversity-loss objective.
//!
//! For a count vector `x` with at least one positive entry, the Simpson
//! dominance index is
//!
//! ```text
//! D(x) = |x|_1^2 / |x|_2^2 = (sum x_i)^2 / (sum x_i^2)
//! ```
//!
//! i.e. the inverse probability that two entities drawn uniformly with
//! replacement share a type. `D` is scale invariant, ranges over `[1, r]`
//! for `r` types, and equals `r * cos^2(theta)` where `theta` is the angle
//! between `x` and the all-ones vector.
//!
//! Everything here is computed exactly: indices are [`ExactRatio`]s and
//! comparisons are integer cross-multiplications. [`hill_number`] is the
//! one floating-point output, provided as a metric only.

use std::cmp::Ordering;

use num::bigint::BigUint;
use num::Zero;
use thiserror::Error;

use crate::ratio::ExactRatio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiversityError {
    #[error("count vector must have at least one entry")]
    EmptyVector,
    #[error("diversity is undefined on the all-zero vector")]
    ZeroVector,
    #[error("Hill order must be a nonnegative real or +infinity")]
    NegativeOrder,
    #[error("parts do not sum to the budget vector")]
    SumMismatch,
    #[error("partition contains an all-zero part")]
    ZeroPart,
}

/// Nonnegative integer counts per type.
///
/// Entries are 128-bit; sums and products that could exceed 128 bits are
/// carried out in arbitrary precision, so no operation silently overflows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeVector(Vec<u128>);

impl TypeVector {
    pub fn new(counts: Vec<u128>) -> Result<Self, DiversityError> {
        if counts.is_empty() {
            return Err(DiversityError::EmptyVector);
        }
        Ok(TypeVector(counts))
    }

    pub fn from_slice(counts: &[u128]) -> Result<Self, DiversityError> {
        Self::new(counts.to_vec())
    }

    /// Two-type helper used throughout the lattice solver.
    pub fn pair(a: u64, b: u64) -> Self {
        TypeVector(vec![a as u128, b as u128])
    }

    pub fn counts(&self) -> &[u128] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn l1_norm(&self) -> BigUint {
        self.0.iter().map(|&c| BigUint::from(c)).sum()
    }

    pub fn sum_of_squares(&self) -> BigUint {
        self.0
            .iter()
            .map(|&c| {
                let c = BigUint::from(c);
                &c * &c
            })
            .sum()
    }

    /// Componentwise subtraction; `None` if any coordinate would go negative.
    pub fn checked_sub(&self, other: &TypeVector) -> Option<TypeVector> {
        if self.len() != other.len() {
            return None;
        }
        let mut out = Vec::with_capacity(self.len());
        for (&a, &b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(b)?);
        }
        Some(TypeVector(out))
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &TypeVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

impl std::fmt::Display for TypeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A Simpson index: the exact rational plus its `f64` rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityValue {
    pub exact: ExactRatio,
    pub approx: f64,
}

impl DiversityValue {
    pub fn from_exact(exact: ExactRatio) -> Self {
        let approx = exact.to_f64();
        DiversityValue { exact, approx }
    }
}

fn require_nonzero(x: &TypeVector) -> Result<(), DiversityError> {
    if x.is_zero() {
        Err(DiversityError::ZeroVector)
    } else {
        Ok(())
    }
}

/// Exact Simpson dominance index `(sum x_i)^2 / (sum x_i^2)`.
pub fn simpson_index(x: &TypeVector) -> Result<DiversityValue, DiversityError> {
    require_nonzero(x)?;
    let l1 = x.l1_norm();
    let num = &l1 * &l1;
    let den = x.sum_of_squares();
    Ok(DiversityValue::from_exact(ExactRatio::new(num, den)))
}

/// Hill number of the given order.
///
/// * `order = 0` counts the positive entries (richness),
/// * `order = 1` is the exponential of the Shannon entropy,
/// * `order = 2` recovers the Simpson dominance index,
/// * `order = +inf` is the inverse of the largest relative abundance.
///
/// Output is floating point; exact optimization is only supported for the
/// Simpson index.
pub fn hill_number(x: &TypeVector, order: f64) -> Result<f64, DiversityError> {
    require_nonzero(x)?;
    if order.is_nan() || order < 0.0 {
        return Err(DiversityError::NegativeOrder);
    }
    let total = x.l1_norm().to_string().parse::<f64>().expect("decimal f64");
    let proportions: Vec<f64> = x
        .counts()
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 / total)
        .collect();
    if order.is_infinite() {
        let max = proportions.iter().cloned().fold(0.0, f64::max);
        return Ok(1.0 / max);
    }
    if order == 1.0 {
        let entropy: f64 = proportions.iter().map(|&p| -p * p.ln()).sum();
        return Ok(entropy.exp());
    }
    let sum: f64 = proportions.iter().map(|&p| p.powf(order)).sum();
    Ok(sum.powf(1.0 / (1.0 - order)))
}

/// Exact relative diversity loss `1 - min_i D(parts[i]) / D(b)`.
///
/// Zero exactly when every part matches or exceeds the global index.
pub fn epsilon_of_partition(
    parts: &[TypeVector],
    b: &TypeVector,
) -> Result<ExactRatio, DiversityError> {
    require_nonzero(b)?;
    let mut sums = vec![BigUint::zero(); b.len()];
    for part in parts {
        if part.len() != b.len() {
            return Err(DiversityError::SumMismatch);
        }
        if part.is_zero() {
            return Err(DiversityError::ZeroPart);
        }
        for (acc, &c) in sums.iter_mut().zip(part.counts()) {
            *acc += BigUint::from(c);
        }
    }
    let expected: Vec<BigUint> = b.counts().iter().map(|&c| BigUint::from(c)).collect();
    if sums != expected {
        return Err(DiversityError::SumMismatch);
    }
    let global = simpson_index(b)?.exact;
    let min = parts
        .iter()
        .map(|p| simpson_index(p).map(|d| d.exact))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min()
        .expect("parts sum to a nonzero vector, so at least one part exists");
    // min_i D(x_i) <= D(b) for every partition, so the ratio is in [0, 1].
    let ratio = ExactRatio::new(
        min.numer() * global.denom(),
        min.denom() * global.numer(),
    );
    Ok(ratio
        .one_minus()
        .expect("minimum part diversity never exceeds the global diversity"))
}

/// Exact ordering of `D(x)` versus `D(y)` by integer cross-multiplication.
pub fn compare_diversity(x: &TypeVector, y: &TypeVector) -> Result<Ordering, DiversityError> {
    require_nonzero(x)?;
    require_nonzero(y)?;
    let lx = x.l1_norm();
    let ly = y.l1_norm();
    let lhs = &lx * &lx * y.sum_of_squares();
    let rhs = &ly * &ly * x.sum_of_squares();
    Ok(lhs.cmp(&rhs))
}

/// Exact `cos^2` of the angle between `x` and the all-ones vector:
/// `|x|_1^2 / (r * |x|_2^2)`, which equals `D(x) / r`.
pub fn squared_cos_angle_with_ones(x: &TypeVector) -> Result<ExactRatio, DiversityError> {
    require_nonzero(x)?;
    let l1 = x.l1_norm();
    let num = &l1 * &l1;
    let den = BigUint::from(x.len()) * x.sum_of_squares();
    Ok(ExactRatio::new(num, den))
}
