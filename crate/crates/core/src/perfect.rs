//! Perfect partitions: splits in which every part matches the global index.
//!
//! A budget `b` admits a `k`-part split with `D(part) >= D(b)` for every
//! part exactly when `k <= gcd(b)`. The witness is built from scaled copies
//! of `b / gcd(b)`, which all share the diversity of `b` by scale
//! invariance.

use num::integer::gcd;
use thiserror::Error;

use crate::diversity::TypeVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PerfectError {
    #[error("budget entries must all be positive")]
    ZeroEntry,
    #[error("the number of parts must be positive")]
    ZeroParts,
    #[error("no perfect partition with {requested} parts; at most {max_parts} are possible")]
    Infeasible { requested: u64, max_parts: u128 },
}

/// Outcome of a perfect-partition query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectVerdict {
    /// Largest part count admitting a perfect partition, i.e. `gcd(b)`.
    pub max_parts: u128,
    pub feasible_for_k: bool,
    /// Present exactly when feasible: `k` parts summing to `b`, each a
    /// positive multiple of `b / gcd(b)`.
    pub witness: Option<Vec<TypeVector>>,
}

impl PerfectVerdict {
    pub fn evaluate(b: &TypeVector, k: u64) -> Result<Self, PerfectError> {
        let max_parts = max_perfect_parts(b)?;
        match build_perfect_partition(b, k) {
            Ok(witness) => Ok(PerfectVerdict {
                max_parts,
                feasible_for_k: true,
                witness: Some(witness),
            }),
            Err(PerfectError::Infeasible { .. }) => Ok(PerfectVerdict {
                max_parts,
                feasible_for_k: false,
                witness: None,
            }),
            Err(e) => Err(e),
        }
    }
}

/// Largest `k` admitting a perfect partition: `gcd(b_1, ..., b_r)`.
pub fn max_perfect_parts(b: &TypeVector) -> Result<u128, PerfectError> {
    if b.counts().iter().any(|&c| c == 0) {
        return Err(PerfectError::ZeroEntry);
    }
    Ok(b.counts().iter().fold(0u128, |acc, &c| gcd(acc, c)))
}

/// Builds the `k`-part perfect partition when `k <= gcd(b)`: the base part
/// `b / gcd(b)` repeated `k - 1` times, with the remainder
/// `(gcd(b) - k + 1) * b / gcd(b)` as the last part.
pub fn build_perfect_partition(b: &TypeVector, k: u64) -> Result<Vec<TypeVector>, PerfectError> {
    if k == 0 {
        return Err(PerfectError::ZeroParts);
    }
    let d = max_perfect_parts(b)?;
    if (k as u128) > d {
        return Err(PerfectError::Infeasible {
            requested: k,
            max_parts: d,
        });
    }
    let base: Vec<u128> = b.counts().iter().map(|&c| c / d).collect();
    let tail_scale = d - (k as u128) + 1;
    let mut parts = Vec::with_capacity(k as usize);
    for _ in 0..k - 1 {
        parts.push(TypeVector::new(base.clone()).expect("budget is nonempty"));
    }
    let tail: Vec<u128> = base.iter().map(|&c| c * tail_scale).collect();
    parts.push(TypeVector::new(tail).expect("budget is nonempty"));
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::{compare_diversity, epsilon_of_partition};
    use std::cmp::Ordering;

    fn tv(counts: &[u128]) -> TypeVector {
        TypeVector::from_slice(counts).unwrap()
    }

    #[test]
    fn max_parts_examples() {
        assert_eq!(max_perfect_parts(&tv(&[6, 15, 21])).unwrap(), 3);
        assert_eq!(max_perfect_parts(&tv(&[5, 7])).unwrap(), 1);
        assert_eq!(max_perfect_parts(&tv(&[8, 8, 8])).unwrap(), 8);
        assert_eq!(
            max_perfect_parts(&tv(&[4, 0])).unwrap_err(),
            PerfectError::ZeroEntry
        );
    }

    #[test]
    fn build_examples() {
        assert_eq!(
            build_perfect_partition(&tv(&[6, 15, 21]), 2).unwrap(),
            vec![tv(&[2, 5, 7]), tv(&[4, 10, 14])]
        );
        assert_eq!(
            build_perfect_partition(&tv(&[4, 8]), 3).unwrap(),
            vec![tv(&[1, 2]), tv(&[1, 2]), tv(&[2, 4])]
        );
        assert_eq!(
            build_perfect_partition(&tv(&[5, 7]), 2).unwrap_err(),
            PerfectError::Infeasible {
                requested: 2,
                max_parts: 1
            }
        );
        // k = 1 returns the budget itself.
        assert_eq!(
            build_perfect_partition(&tv(&[5, 7]), 1).unwrap(),
            vec![tv(&[5, 7])]
        );
    }

    #[test]
    fn witness_parts_match_global_diversity() {
        for (b, k) in [(vec![6u128, 15, 21], 3u64), (vec![8, 8, 8], 8), (vec![10, 20], 5)] {
            let b = TypeVector::new(b).unwrap();
            let parts = build_perfect_partition(&b, k).unwrap();
            assert_eq!(parts.len(), k as usize);
            for part in &parts {
                assert_eq!(compare_diversity(part, &b).unwrap(), Ordering::Equal);
            }
            assert!(epsilon_of_partition(&parts, &b).unwrap().is_zero());
        }
    }

    #[test]
    fn verdict_carries_witness_only_when_feasible() {
        let yes = PerfectVerdict::evaluate(&tv(&[6, 15, 21]), 2).unwrap();
        assert!(yes.feasible_for_k);
        assert_eq!(yes.max_parts, 3);
        assert!(yes.witness.is_some());

        let no = PerfectVerdict::evaluate(&tv(&[5, 7]), 2).unwrap();
        assert!(!no.feasible_for_k);
        assert_eq!(no.max_parts, 1);
        assert!(no.witness.is_none());
    }
}
