//! Exhaustive ground truth for small instances of any dimension.
//!
//! The enumerator streams every unordered `k`-partition of a budget into
//! nonzero parts exactly once, using the canonical form "parts sorted
//! lexicographically non-decreasing". [`brute_force_pmd`] searches that
//! space for the maximin-diversity optimum.
//!
//! The search applies only *exact* reductions, so its answer equals the
//! plain enumeration's (a property the test suite checks directly):
//!
//! * a part whose diversity is strictly below the best completed value so
//!   far can never occur in a strictly better partition, nor in an
//!   equal-value partition that would precede the recorded one (the walk
//!   visits partitions in canonical order);
//! * however a remainder `rem` is decomposed into nonzero parts, the worst
//!   part's diversity is at most `D(rem)` (summing `|x|_1 = sqrt(D(x)) |x|_2`
//!   over the parts against the triangle inequality), so a subtree whose
//!   remainder falls below the incumbent cannot improve on it;
//! * no partition's worst part can beat the global diversity, so the first
//!   completion matching it ends the search;
//! * the initial bound comes from a balanced partition that is verified
//!   like any other candidate, never returned unvisited.
//!
//! Work is limited by a [`SearchGuard`]: every explored placement counts,
//! and the search aborts before exceeding the budget.

use std::cmp::Ordering;

use num::bigint::BigUint;
use num::integer::gcd;
use num::One;
use thiserror::Error;

use crate::diversity::TypeVector;
use crate::lattice::{slope_cmp, LatticePoint2};
use crate::ratio::ExactRatio;

pub const DEFAULT_GUARD: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space too large: an estimated {estimate} candidate partitions exceed the guard of {guard}")]
    SearchSpaceTooLarge { estimate: BigUint, guard: u64 },
    #[error("the budget has fewer entities than the requested number of nonzero parts")]
    NoFeasiblePartition,
}

/// Bound on explored candidate placements; enumeration aborts with
/// [`OracleError::SearchSpaceTooLarge`] before exceeding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchGuard {
    pub max_visits: u64,
}

impl SearchGuard {
    pub fn new(max_visits: u64) -> Self {
        SearchGuard { max_visits }
    }

    /// Effectively unlimited; used by sweeps that bound their own size.
    pub fn unbounded() -> Self {
        SearchGuard {
            max_visits: u64::MAX,
        }
    }
}

impl Default for SearchGuard {
    fn default() -> Self {
        SearchGuard {
            max_visits: DEFAULT_GUARD,
        }
    }
}

/// Number of ordered `k`-tuples of nonnegative vectors summing to `b`
/// (zero parts included): `prod_i C(b_i + k - 1, k - 1)`. An upper bound on
/// the enumeration, reported when the guard trips.
pub fn estimate_search_space(b: &TypeVector, k: u64) -> BigUint {
    if k == 0 {
        return BigUint::ZERO;
    }
    let mut estimate = BigUint::one();
    for &c in b.counts() {
        estimate *= binomial(BigUint::from(c) + BigUint::from(k - 1), k - 1);
    }
    estimate
}

fn binomial(n: BigUint, r: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 1..=r {
        out = out * (&n - BigUint::from(r - i)) / BigUint::from(i);
    }
    out
}

struct VisitBudget<'a> {
    used: u64,
    guard: u64,
    b: &'a TypeVector,
    k: u64,
}

impl VisitBudget<'_> {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.guard {
            Err(OracleError::SearchSpaceTooLarge {
                estimate: estimate_search_space(self.b, self.k),
                guard: self.guard,
            })
        } else {
            Ok(())
        }
    }
}

fn saturating_total(counts: &[u128]) -> u128 {
    counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
}

fn diversity_of(counts: &[u128]) -> ExactRatio {
    let l1: BigUint = counts.iter().map(|&c| BigUint::from(c)).sum();
    let sq: BigUint = counts
        .iter()
        .map(|&c| {
            let c = BigUint::from(c);
            &c * &c
        })
        .sum();
    ExactRatio::new(&l1 * &l1, sq)
}

/// Streams every unordered `k`-partition of `b` into nonzero parts exactly
/// once (parts sorted lexicographically non-decreasing) and returns how
/// many were emitted.
pub fn enumerate_k_partitions<F>(
    b: &TypeVector,
    k: u64,
    guard: &SearchGuard,
    mut visit: F,
) -> Result<u64, OracleError>
where
    F: FnMut(&[TypeVector]),
{
    if k == 0 || saturating_total(b.counts()) < k as u128 {
        return Ok(0);
    }
    let mut budget = VisitBudget {
        used: 0,
        guard: guard.max_visits,
        b,
        k,
    };
    let mut stack: Vec<TypeVector> = Vec::with_capacity(k as usize);
    let mut emitted = 0u64;
    let zero = vec![0u128; b.len()];
    descend(
        b.counts(),
        &zero,
        k,
        &mut budget,
        &mut stack,
        &mut |parts| {
            emitted += 1;
            visit(parts);
        },
    )?;
    Ok(emitted)
}

/// Places the remaining parts, keeping them lexicographically at or above
/// `floor`.
fn descend(
    remaining: &[u128],
    floor: &[u128],
    left: u64,
    budget: &mut VisitBudget<'_>,
    stack: &mut Vec<TypeVector>,
    emit: &mut dyn FnMut(&[TypeVector]),
) -> Result<(), OracleError> {
    if left == 1 {
        budget.tick()?;
        if remaining.iter().any(|&c| c > 0) && remaining >= floor {
            stack.push(TypeVector::from_slice(remaining).expect("nonempty"));
            emit(stack);
            stack.pop();
        }
        return Ok(());
    }
    if saturating_total(remaining) < left as u128 {
        return Ok(()); // not enough entities for `left` nonzero parts
    }
    let mut candidate = vec![0u128; remaining.len()];
    next_coordinate(0, true, &mut candidate, remaining, floor, left, budget, stack, emit)
}

#[allow(clippy::too_many_arguments)]
fn next_coordinate(
    idx: usize,
    tight: bool,
    candidate: &mut Vec<u128>,
    remaining: &[u128],
    floor: &[u128],
    left: u64,
    budget: &mut VisitBudget<'_>,
    stack: &mut Vec<TypeVector>,
    emit: &mut dyn FnMut(&[TypeVector]),
) -> Result<(), OracleError> {
    if idx == remaining.len() {
        if candidate.iter().all(|&c| c == 0) {
            return Ok(());
        }
        budget.tick()?;
        let rest: Vec<u128> = remaining
            .iter()
            .zip(candidate.iter())
            .map(|(&r, &c)| r - c)
            .collect();
        stack.push(TypeVector::new(candidate.clone()).expect("nonempty"));
        let result = descend(&rest, candidate, left - 1, budget, stack, emit);
        stack.pop();
        return result;
    }
    let lo = if tight { floor[idx] } else { 0 };
    let mut v = lo;
    while v <= remaining[idx] {
        candidate[idx] = v;
        next_coordinate(
            idx + 1,
            tight && v == floor[idx],
            candidate,
            remaining,
            floor,
            left,
            budget,
            stack,
            emit,
        )?;
        v += 1;
    }
    candidate[idx] = 0;
    Ok(())
}

/// A balanced partition used to seed the bound: units of each type are
/// dealt to the parts in rotation, so all parts are nonzero whenever the
/// budget has at least `k` entities.
fn balanced_partition(b: &TypeVector, k: u64) -> Vec<Vec<u128>> {
    let r = b.len();
    let width = k as usize;
    let mut parts = vec![vec![0u128; r]; width];
    let mut next = 0usize;
    for (t, &c) in b.counts().iter().enumerate() {
        let share = c / k as u128;
        let extras = (c % k as u128) as usize;
        for part in parts.iter_mut() {
            part[t] += share;
        }
        for off in 0..extras {
            parts[(next + off) % width][t] += 1;
        }
        next = (next + extras) % width;
    }
    parts
}

struct PmdSearch<'a> {
    /// Candidate parts with diversity at or above the seed bound, sorted
    /// lexicographically, paired with their exact diversity.
    cone: Vec<(Vec<u128>, ExactRatio)>,
    global: ExactRatio,
    best_value: ExactRatio,
    best_partition: Option<Vec<TypeVector>>,
    stack: Vec<TypeVector>,
    budget: VisitBudget<'a>,
}

impl PmdSearch<'_> {
    fn finished(&self) -> bool {
        self.best_partition.is_some() && self.best_value == self.global
    }

    fn record(&mut self, value: ExactRatio) {
        match value.cmp(&self.best_value) {
            Ordering::Greater => {
                self.best_value = value;
                self.best_partition = Some(self.stack.clone());
            }
            Ordering::Equal if self.best_partition.is_none() => {
                self.best_partition = Some(self.stack.clone());
            }
            _ => {}
        }
    }

    fn dfs(
        &mut self,
        remaining: &[u128],
        floor: &[u128],
        floor_div: Option<&ExactRatio>,
        left: u64,
    ) -> Result<(), OracleError> {
        if left == 1 {
            self.budget.tick()?;
            if remaining.iter().any(|&c| c > 0) && remaining >= floor {
                let final_div = diversity_of(remaining);
                // The worst part decides; placed parts all sit at or above
                // the running bound, so only the final part can lower it.
                let value = match floor_div {
                    Some(d) if *d < final_div => d.clone(),
                    _ => final_div,
                };
                if value >= self.best_value {
                    self.stack
                        .push(TypeVector::from_slice(remaining).expect("nonempty"));
                    self.record(value);
                    self.stack.pop();
                }
            }
            return Ok(());
        }
        if saturating_total(remaining) < left as u128 {
            return Ok(());
        }
        self.budget.tick()?;
        // No decomposition of the remainder keeps every part above D(rem),
        // so the subtree is dead once that bound falls under the incumbent
        // (for ties, the canonical-first witness is already recorded).
        let rem_bound = diversity_of(remaining);
        match rem_bound.cmp(&self.best_value) {
            Ordering::Less => return Ok(()),
            Ordering::Equal if self.best_partition.is_some() => return Ok(()),
            _ => {}
        }
        let start = self.cone.partition_point(|(c, _)| c.as_slice() < floor);
        for idx in start..self.cone.len() {
            if self.finished() {
                return Ok(());
            }
            let fits = {
                let (cand, div) = &self.cone[idx];
                cand.iter().zip(remaining).all(|(&c, &r)| c <= r) && *div >= self.best_value
            };
            if !fits {
                continue;
            }
            self.budget.tick()?;
            let (cand, div) = self.cone[idx].clone();
            let rest: Vec<u128> = remaining
                .iter()
                .zip(cand.iter())
                .map(|(&r, &c)| r - c)
                .collect();
            let min_div = match floor_div {
                Some(d) if *d < div => d.clone(),
                _ => div,
            };
            self.stack
                .push(TypeVector::new(cand.clone()).expect("nonempty"));
            let out = self.dfs(&rest, &cand, Some(&min_div), left - 1);
            self.stack.pop();
            out?;
        }
        Ok(())
    }
}

/// Walks the whole box `[0, b]` in lexicographic order, keeping nonzero
/// vectors whose diversity is at least `threshold`.
fn collect_cone(
    b: &TypeVector,
    threshold: &ExactRatio,
    budget: &mut VisitBudget<'_>,
) -> Result<Vec<(Vec<u128>, ExactRatio)>, OracleError> {
    let mut cone = Vec::new();
    let mut v = vec![0u128; b.len()];
    loop {
        budget.tick()?;
        if v.iter().any(|&c| c > 0) {
            let div = diversity_of(&v);
            if div >= *threshold {
                cone.push((v.clone(), div));
            }
        }
        // lexicographic odometer, most significant coordinate first
        let mut idx = b.len();
        loop {
            if idx == 0 {
                return Ok(cone);
            }
            idx -= 1;
            if v[idx] < b.counts()[idx] {
                v[idx] += 1;
                for c in &mut v[idx + 1..] {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Exact maximin-diversity optimum by exhaustive search: the smallest
/// achievable `epsilon` and the canonically first partition attaining it.
pub fn brute_force_pmd(
    b: &TypeVector,
    k: u64,
    guard: &SearchGuard,
) -> Result<(ExactRatio, Vec<TypeVector>), OracleError> {
    if k == 0 || b.is_zero() || saturating_total(b.counts()) < k as u128 {
        return Err(OracleError::NoFeasiblePartition);
    }
    let mut budget = VisitBudget {
        used: 0,
        guard: guard.max_visits,
        b,
        k,
    };
    let global = diversity_of(b.counts());
    let seed = balanced_partition(b, k);
    let seed_min = seed
        .iter()
        .map(|p| diversity_of(p))
        .min()
        .expect("k >= 1 parts");
    let cone = collect_cone(b, &seed_min, &mut budget)?;
    let mut search = PmdSearch {
        cone,
        global: global.clone(),
        best_value: seed_min,
        best_partition: None,
        stack: Vec::with_capacity(k as usize),
        budget,
    };
    let zero = vec![0u128; b.len()];
    search.dfs(b.counts(), &zero, None, k)?;
    let best_value = search.best_value;
    let parts = search
        .best_partition
        .expect("the seed partition itself is reachable");
    let ratio = ExactRatio::new(
        best_value.numer() * global.denom(),
        best_value.denom() * global.numer(),
    );
    let epsilon = ratio
        .one_minus()
        .expect("no partition beats the global diversity");
    Ok((epsilon, parts))
}

/// Searches for a partition whose every part matches or exceeds the global
/// diversity — equivalently, whether the exhaustive `epsilon` is zero.
/// Returns the first such partition in canonical order, if any.
pub fn search_perfect_partition(
    b: &TypeVector,
    k: u64,
    guard: &SearchGuard,
) -> Result<Option<Vec<TypeVector>>, OracleError> {
    if k == 0 || b.is_zero() || saturating_total(b.counts()) < k as u128 {
        return Err(OracleError::NoFeasiblePartition);
    }
    let mut budget = VisitBudget {
        used: 0,
        guard: guard.max_visits,
        b,
        k,
    };
    let global = diversity_of(b.counts());
    let cone = collect_cone(b, &global, &mut budget)?;
    let mut search = PmdSearch {
        cone,
        global: global.clone(),
        best_value: global,
        best_partition: None,
        stack: Vec::with_capacity(k as usize),
        budget,
    };
    let zero = vec![0u128; b.len()];
    search.dfs(b.counts(), &zero, None, k)?;
    Ok(search.best_partition)
}

/// Scans all staircase points `(i, ceil(b2*i/b1))`, `1 <= i <= b1 - 1`, and
/// returns the one of minimum slope; slope ties break toward the smaller
/// first coordinate. Independent check of the two-part construction.
///
/// # Panics
/// Panics unless `2 <= b1 <= b2` and `gcd(b1, b2) = 1`.
pub fn brute_force_best_upper_point(b1: u64, b2: u64) -> LatticePoint2 {
    assert!(b1 >= 2 && b1 <= b2 && gcd(b1, b2) == 1);
    let mut best: Option<LatticePoint2> = None;
    for i in 1..b1 {
        let j = (b2 as u128 * i as u128).div_ceil(b1 as u128) as u64;
        let p = LatticePoint2::new(i, j);
        best = match best {
            Some(q) if slope_cmp(p, q) == Ordering::Less => Some(p),
            None => Some(p),
            keep => keep,
        };
    }
    best.expect("b1 >= 2 leaves at least one staircase point")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::epsilon_of_partition;

    fn tv(counts: &[u128]) -> TypeVector {
        TypeVector::from_slice(counts).unwrap()
    }

    fn collect_partitions(b: &TypeVector, k: u64) -> Vec<Vec<TypeVector>> {
        let mut all = Vec::new();
        enumerate_k_partitions(b, k, &SearchGuard::default(), |parts| {
            all.push(parts.to_vec());
        })
        .unwrap();
        all
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(collect_partitions(&tv(&[1, 1]), 2).len(), 1);
        // Hand enumeration: {(0,1),(2,0)} and {(1,0),(1,1)}.
        assert_eq!(collect_partitions(&tv(&[2, 1]), 2).len(), 2);
        assert_eq!(collect_partitions(&tv(&[2, 2]), 2).len(), 4);
    }

    #[test]
    fn enumeration_is_canonical_and_sums() {
        let b = tv(&[3, 2]);
        let all = collect_partitions(&b, 3);
        let mut seen = std::collections::HashSet::new();
        for parts in &all {
            assert!(parts.windows(2).all(|w| w[0] <= w[1]), "sorted parts");
            assert!(parts.iter().all(|p| !p.is_zero()));
            assert!(epsilon_of_partition(parts, &b).is_ok(), "sums to b");
            assert!(seen.insert(parts.clone()), "no duplicates");
        }
    }

    #[test]
    fn guard_aborts_enumeration() {
        let err = enumerate_k_partitions(&tv(&[10, 10]), 4, &SearchGuard::new(50), |_| {})
            .unwrap_err();
        match err {
            OracleError::SearchSpaceTooLarge { guard, .. } => assert_eq!(guard, 50),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn estimate_matches_composition_product() {
        // C(4+1, 1) = hand value 5 per type.
        assert_eq!(
            estimate_search_space(&tv(&[4, 4]), 2),
            BigUint::from(25u32)
        );
        let big = estimate_search_space(&tv(&[30, 40, 50]), 4);
        assert!(big > BigUint::from(DEFAULT_GUARD));
    }

    #[test]
    fn brute_force_examples() {
        let (eps, parts) = brute_force_pmd(&tv(&[2, 2]), 2, &SearchGuard::default()).unwrap();
        assert!(eps.is_zero());
        assert_eq!(parts, vec![tv(&[1, 1]), tv(&[1, 1])]);

        let (eps, _) = brute_force_pmd(&tv(&[6, 15, 21]), 2, &SearchGuard::default()).unwrap();
        assert!(eps.is_zero());

        let (eps, parts) = brute_force_pmd(&tv(&[6, 14, 21]), 2, &SearchGuard::default()).unwrap();
        assert!(!eps.is_zero());
        assert!(eps <= ExactRatio::from_integers(792, 243_745));
        assert!(eps < ExactRatio::from_integers(4106, 300_899));
        assert_eq!(epsilon_of_partition(&parts, &tv(&[6, 14, 21])).unwrap(), eps);
    }

    #[test]
    fn brute_force_forced_split() {
        let (eps, parts) = brute_force_pmd(&tv(&[1, 1]), 2, &SearchGuard::default()).unwrap();
        assert_eq!(eps, ExactRatio::from_integers(1, 2));
        assert_eq!(parts, vec![tv(&[0, 1]), tv(&[1, 0])]);
    }

    #[test]
    fn brute_force_matches_plain_enumeration() {
        // The pruned search must agree with the unpruned walk, value and
        // canonical argmax both.
        for (b, k) in [
            (vec![2u128, 1], 2u64),
            (vec![3, 2], 2),
            (vec![3, 2], 3),
            (vec![2, 2, 2], 2),
            (vec![4, 3], 3),
            (vec![1, 2, 3], 3),
            (vec![5, 4], 2),
        ] {
            let b = TypeVector::new(b).unwrap();
            let guard = SearchGuard::default();
            let (eps, parts) = brute_force_pmd(&b, k, &guard).unwrap();
            let mut best: Option<(ExactRatio, Vec<TypeVector>)> = None;
            enumerate_k_partitions(&b, k, &guard, |cand| {
                let e = epsilon_of_partition(cand, &b).unwrap();
                let better = match &best {
                    None => true,
                    Some((cur, _)) => e < *cur,
                };
                if better {
                    best = Some((e, cand.to_vec()));
                }
            })
            .unwrap();
            let (plain_eps, plain_parts) = best.unwrap();
            assert_eq!(eps, plain_eps, "epsilon for {b} k={k}");
            assert_eq!(parts, plain_parts, "argmax for {b} k={k}");
        }
    }

    #[test]
    fn infeasible_instances_error() {
        assert_eq!(
            brute_force_pmd(&tv(&[1, 1]), 3, &SearchGuard::default()).unwrap_err(),
            OracleError::NoFeasiblePartition
        );
        assert_eq!(
            brute_force_pmd(&tv(&[0, 0]), 1, &SearchGuard::default()).unwrap_err(),
            OracleError::NoFeasiblePartition
        );
    }

    #[test]
    fn perfect_search_agrees_with_gcd() {
        let found = search_perfect_partition(&tv(&[6, 15, 21]), 3, &SearchGuard::default())
            .unwrap();
        assert!(found.is_some());
        let none = search_perfect_partition(&tv(&[5, 7]), 2, &SearchGuard::default()).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn best_upper_point_examples() {
        assert_eq!(brute_force_best_upper_point(5, 7), LatticePoint2::new(2, 3));
        // slopes tie at 2 for (1,2) and (2,4); the smaller i wins
        assert_eq!(brute_force_best_upper_point(3, 5), LatticePoint2::new(1, 2));
        assert_eq!(brute_force_best_upper_point(2, 3), LatticePoint2::new(1, 2));
    }
}
