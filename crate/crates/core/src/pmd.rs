//! Optimal maximin-diversity partitions for two-type budgets.
//!
//! A `k`-partition of `b = (b1, b2)` is a staircase path from the origin to
//! `b` with `k - 1` interior breakpoints; the parts are the segment steps.
//! Because `D(x) = 2 cos^2(theta_x)`, maximizing the worst part diversity
//! means keeping every segment's direction as close to the diagonal as the
//! integer lattice allows.
//!
//! Two constructions cover all cases with `2 <= k <= b1`:
//!
//! * **two parts** ([`split_two`]): either scale `b / gcd(b)`, or pick the
//!   staircase point with the smallest slope above the budget segment. For
//!   coprime budgets the vertical distances of the staircase points
//!   `(i, ceil(b2*i/b1))` are distinct multiples of `1/b1`, so the best
//!   point is found by one modular inverse.
//! * **k parts** ([`breakpoints_k`]): shear off the integer slope with
//!   `phi: (x, y) -> (x, y - kappa*x)`, and, while the part count is too
//!   small for a direct staircase, discard the flat region with
//!   `eta: (x, y) -> (x - m*y, y)` and recur on the shrunken budget. Both
//!   shears are unimodular and preserve the slope order, so a path that is
//!   optimal down in the recursion maps back to an optimal path for `b`.
//!
//! All slope logic is exact; a solve on 64-bit budgets performs
//! `O(k log^2 max(b1, b2))` word operations.

use std::cmp::Ordering;

use num::integer::gcd;
use thiserror::Error;

use crate::diversity::{
    epsilon_of_partition, simpson_index, DiversityError, DiversityValue, TypeVector,
};
use crate::lattice::{in_upper_region, mod_inverse, slope_cmp, LatticePoint2};
use crate::ratio::ExactRatio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PmdError {
    #[error("cannot form {requested} nonzero parts; at most {max_parts} are feasible")]
    TooFewResources { requested: u64, max_parts: u64 },
    #[error("the operation needs more parts than requested")]
    TooFewParts,
    #[error("budget must be ordered with b1 <= b2")]
    UnsortedBudget,
    #[error("b1 divides b2; the instance belongs to the perfect-partition branch")]
    DegenerateBudget,
    #[error("ell is outside its admissible range for this frame")]
    BadEll,
    #[error("shear would map the point below the axis")]
    NegativeImage,
    #[error("breakpoints must advance strictly in the componentwise order")]
    NonMonotonePath,
    #[error("segment slopes must be non-increasing along the path")]
    IncreasingSlopes,
}

/// A validated two-type instance: `b1 <= b2` and `2 <= k <= b1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoTypeInstance {
    pub b1: u64,
    pub b2: u64,
    pub k: u64,
}

impl TwoTypeInstance {
    pub fn new(b1: u64, b2: u64, k: u64) -> Result<Self, PmdError> {
        if b1 > b2 {
            return Err(PmdError::UnsortedBudget);
        }
        if k < 2 {
            return Err(PmdError::TooFewParts);
        }
        if k > b1 {
            return Err(PmdError::TooFewResources {
                requested: k,
                max_parts: b1,
            });
        }
        Ok(TwoTypeInstance { b1, b2, k })
    }
}

/// One level of the shear recursion: `b2 = kappa*b1 + b2p` with
/// `0 < b2p < b1`, and `m = floor(b1p / b2p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionFrame {
    pub kappa: u64,
    pub b1p: u64,
    pub b2p: u64,
    pub m: u64,
}

impl ReductionFrame {
    pub fn new(b1: u64, b2: u64) -> Result<Self, PmdError> {
        if b1 == 0 || b1 > b2 {
            return Err(PmdError::UnsortedBudget);
        }
        if b2 % b1 == 0 {
            return Err(PmdError::DegenerateBudget);
        }
        let kappa = b2 / b1;
        let b2p = b2 - kappa * b1;
        Ok(ReductionFrame {
            kappa,
            b1p: b1,
            b2p,
            m: b1 / b2p,
        })
    }
}

/// Record of one recursion level, kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceFrame {
    pub kappa: u64,
    pub b1p: u64,
    pub b2p: u64,
    pub m: u64,
    /// Staircase parameter of the base level; `None` on levels that recur.
    pub ell: Option<u64>,
}

impl TraceFrame {
    fn from_frame(frame: &ReductionFrame, ell: Option<u64>) -> Self {
        TraceFrame {
            kappa: frame.kappa,
            b1p: frame.b1p,
            b2p: frame.b2p,
            m: frame.m,
            ell,
        }
    }
}

/// Vertical shear `(x, y) -> (x, y - kappa*x)`.
///
/// Bijective on the upper region (where `y >= kappa*x` always holds) and
/// reverses the diversity order into the slope order of the images.
pub fn phi(frame: &ReductionFrame, p: LatticePoint2) -> Result<LatticePoint2, PmdError> {
    let shear = frame.kappa as u128 * p.x as u128;
    let y = p.y as u128;
    if y < shear {
        return Err(PmdError::NegativeImage);
    }
    Ok(LatticePoint2::new(p.x, (y - shear) as u64))
}

/// Inverse of [`phi`]: `(x, y) -> (x, y + kappa*x)`.
pub fn phi_inv(frame: &ReductionFrame, p: LatticePoint2) -> LatticePoint2 {
    let y = p.y as u128 + frame.kappa as u128 * p.x as u128;
    LatticePoint2::new(
        p.x,
        y.try_into()
            .expect("inverse shear stays within the 64-bit budget box"),
    )
}

/// Horizontal shear `(x, y) -> (x - m*y, y)`, defined where `x >= m*y`.
/// Preserves the slope order.
pub fn eta(frame: &ReductionFrame, p: LatticePoint2) -> Result<LatticePoint2, PmdError> {
    let shear = frame.m as u128 * p.y as u128;
    let x = p.x as u128;
    if x < shear {
        return Err(PmdError::NegativeImage);
    }
    Ok(LatticePoint2::new((x - shear) as u64, p.y))
}

/// Inverse of [`eta`]: `(x, y) -> (x + m*y, y)`.
pub fn eta_inv(frame: &ReductionFrame, p: LatticePoint2) -> LatticePoint2 {
    let x = p.x as u128 + frame.m as u128 * p.y as u128;
    LatticePoint2::new(
        x.try_into()
            .expect("inverse shear stays within the 64-bit budget box"),
        p.y,
    )
}

/// Optimal two-part split of `(b1, b2)` with `2 <= b1 <= b2`.
///
/// When `gcd >= 2` the scaled budget `b/gcd` is already perfect. Otherwise
/// the first part is the staircase point `(i*, ceil(b2*i*/b1))` whose
/// vertical distance to the budget segment is the minimum `1/b1`, found by
/// solving `tau * i = b1 - 1 (mod b1)` for `tau = b2 mod b1`.
pub fn split_two(b1: u64, b2: u64) -> Result<(TypeVector, TypeVector), PmdError> {
    if b1 > b2 {
        return Err(PmdError::UnsortedBudget);
    }
    if b1 < 2 {
        return Err(PmdError::TooFewResources {
            requested: 2,
            max_parts: b1,
        });
    }
    let d = gcd(b1, b2);
    if d >= 2 {
        let x = TypeVector::pair(b1 / d, b2 / d);
        let rest = TypeVector::pair(b1 - b1 / d, b2 - b2 / d);
        return Ok((x, rest));
    }
    let tau = b2 % b1;
    let inv = mod_inverse(tau as u128, b1 as u128).expect("tau and b1 are coprime") as u64;
    let i_star = b1 - inv;
    let height = (b2 as u128 * i_star as u128).div_ceil(b1 as u128) as u64;
    let x = TypeVector::pair(i_star, height);
    let rest = TypeVector::pair(b1 - i_star, b2 - height);
    Ok((x, rest))
}

/// The `k - 1` breakpoints of the direct staircase construction, in the
/// sheared coordinates of `frame`.
///
/// Valid when `b1p - ell*b2p + 1 <= k <= b1p - (ell-1)*b2p` for some
/// `ell in [1, m]`: emits `(i*ell, i)` for `i = 1..min(b2p, k-1)` and, if
/// more breakpoints are needed, consecutive integer points on the
/// horizontal line through `(ell*b2p, b2p)`. The largest segment slope of
/// the induced path is then exactly `1/ell`, which no choice of `k - 1`
/// lattice points can improve.
pub fn base_case_breakpoints(
    frame: &ReductionFrame,
    k: u64,
    ell: u64,
) -> Result<Vec<LatticePoint2>, PmdError> {
    if k < 2 {
        return Err(PmdError::TooFewParts);
    }
    if ell < 1 || ell > frame.m || frame.b2p == 0 {
        return Err(PmdError::BadEll);
    }
    let b1p = frame.b1p as u128;
    let b2p = frame.b2p as u128;
    let ell_wide = ell as u128;
    let parts = k as u128;
    let lo = b1p + 1 - ell_wide * b2p;
    let hi = b1p - (ell_wide - 1) * b2p;
    if parts < lo || parts > hi {
        return Err(PmdError::BadEll);
    }
    let staircase = (parts - 1).min(b2p);
    let mut points = Vec::with_capacity(k as usize - 1);
    for i in 1..=staircase {
        points.push(LatticePoint2::new((i * ell_wide) as u64, i as u64));
    }
    if parts - 1 > b2p {
        for j in 1..=(parts - 1 - b2p) {
            points.push(LatticePoint2::new((ell_wide * b2p + j) as u64, b2p as u64));
        }
    }
    Ok(points)
}

fn find_ell(frame: &ReductionFrame, k: u64) -> Option<u64> {
    debug_assert!(k <= frame.b1p);
    // The admissible k-ranges for ell = 1..m tile [b1p - m*b2p + 1, b1p],
    // so the candidate is unique.
    let need = (frame.b1p - k + 1) as u128;
    let ell = need.div_ceil(frame.b2p as u128);
    if ell <= frame.m as u128 {
        let ell = ell as u64;
        debug_assert!(frame.b1p - (ell - 1) * frame.b2p >= k);
        debug_assert!(frame.b1p + 1 <= k as u128 as u64 + ell * frame.b2p);
        Some(ell)
    } else {
        None
    }
}

/// The breakpoints of an optimal `k`-partition path, `k >= 3`, plus the
/// recursion trace.
///
/// Requires `k <= b1` and `b1` not dividing `b2` (that case has
/// `gcd >= b1 >= k` and belongs to the perfect-partition branch).
pub fn breakpoints_k(
    b1: u64,
    b2: u64,
    k: u64,
) -> Result<(BreakpointPath, Vec<TraceFrame>), PmdError> {
    if b1 > b2 {
        return Err(PmdError::UnsortedBudget);
    }
    if k < 3 {
        return Err(PmdError::TooFewParts);
    }
    if k > b1 {
        return Err(PmdError::TooFewResources {
            requested: k,
            max_parts: b1,
        });
    }
    if b2 % b1 == 0 {
        return Err(PmdError::DegenerateBudget);
    }

    // Descend iteratively; the frame stack is bounded by O(log max(b1, b2)).
    let mut outer_frames: Vec<ReductionFrame> = Vec::new();
    let mut trace: Vec<TraceFrame> = Vec::new();
    let (mut c1, mut c2) = (b1, b2);
    let (base_frame, ell) = loop {
        let frame = ReductionFrame::new(c1, c2)?;
        if let Some(ell) = find_ell(&frame, k) {
            trace.push(TraceFrame::from_frame(&frame, Some(ell)));
            break (frame, ell);
        }
        trace.push(TraceFrame::from_frame(&frame, None));
        let next1 = frame.b1p - frame.m * frame.b2p;
        let next2 = frame.b2p;
        debug_assert!(next1 + next2 < c1 + c2, "each level shrinks the budget");
        debug_assert!(next1 >= k, "a level only recurs when k fits the next budget");
        outer_frames.push(frame);
        c1 = next1;
        c2 = next2;
    };

    let mut points = base_case_breakpoints(&base_frame, k, ell)?;
    for p in &mut points {
        *p = phi_inv(&base_frame, *p);
    }
    for frame in outer_frames.iter().rev() {
        for p in &mut points {
            *p = phi_inv(frame, eta_inv(frame, *p));
        }
    }
    let path = BreakpointPath { points, b1, b2 };
    debug_assert_eq!(path.validate(), Ok(()));
    Ok((path, trace))
}

/// Interior breakpoints `w_1 < ... < w_{k-1}` of a staircase path from the
/// origin to `(b1, b2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointPath {
    pub points: Vec<LatticePoint2>,
    pub b1: u64,
    pub b2: u64,
}

impl BreakpointPath {
    pub fn budget(&self) -> (u64, u64) {
        (self.b1, self.b2)
    }

    /// Checks the path invariants: every step advances by a nonzero
    /// nonnegative vector, segment slopes are non-increasing, and every
    /// breakpoint lies weakly above the budget segment inside the box.
    pub fn validate(&self) -> Result<(), PmdError> {
        let mut prev = LatticePoint2::new(0, 0);
        let mut prev_step: Option<LatticePoint2> = None;
        let end = LatticePoint2::new(self.b1, self.b2);
        for &w in self.points.iter().chain(std::iter::once(&end)) {
            if w.x < prev.x || w.y < prev.y {
                return Err(PmdError::NonMonotonePath);
            }
            let step = LatticePoint2::new(w.x - prev.x, w.y - prev.y);
            if step.x == 0 && step.y == 0 {
                return Err(PmdError::NonMonotonePath);
            }
            if let Some(last) = prev_step {
                if slope_cmp(step, last) == Ordering::Greater {
                    return Err(PmdError::IncreasingSlopes);
                }
            }
            prev_step = Some(step);
            prev = w;
        }
        for &w in &self.points {
            if !in_upper_region(w, self.b1, self.b2) {
                return Err(PmdError::NonMonotonePath);
            }
        }
        Ok(())
    }
}

/// Differences along the path: `x_1 = w_1`, `x_j = w_j - w_{j-1}`, and the
/// final part `b - w_{k-1}`. An empty path yields the whole budget.
pub fn partition_from_breakpoints(path: &BreakpointPath) -> Result<Vec<TypeVector>, PmdError> {
    let mut parts = Vec::with_capacity(path.points.len() + 1);
    let mut prev = LatticePoint2::new(0, 0);
    let end = LatticePoint2::new(path.b1, path.b2);
    for &w in path.points.iter().chain(std::iter::once(&end)) {
        if w.x < prev.x || w.y < prev.y {
            return Err(PmdError::NonMonotonePath);
        }
        let step = TypeVector::pair(w.x - prev.x, w.y - prev.y);
        if step.is_zero() {
            return Err(PmdError::NonMonotonePath);
        }
        parts.push(step);
        prev = w;
    }
    Ok(parts)
}

/// Which construction produced a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Perfect,
    AlgorithmOne,
    AlgorithmTwo,
    Oracle,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Perfect => "perfect",
            Branch::AlgorithmOne => "alg1",
            Branch::AlgorithmTwo => "alg2",
            Branch::Oracle => "oracle",
        }
    }
}

/// A solved instance: the parts, their exact diversities, the exact
/// epsilon, and how they were obtained.
#[derive(Debug, Clone)]
pub struct PartitionResult {
    pub budget: TypeVector,
    pub k: u64,
    pub branch: Branch,
    pub parts: Vec<TypeVector>,
    pub diversities: Vec<DiversityValue>,
    pub epsilon: ExactRatio,
    pub trace: Vec<TraceFrame>,
}

impl PartitionResult {
    /// Assembles a result, re-deriving the per-part diversities and the
    /// epsilon from the parts themselves.
    pub fn from_parts(
        budget: TypeVector,
        k: u64,
        branch: Branch,
        parts: Vec<TypeVector>,
        trace: Vec<TraceFrame>,
    ) -> Result<Self, DiversityError> {
        let epsilon = epsilon_of_partition(&parts, &budget)?;
        let diversities = parts
            .iter()
            .map(simpson_index)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PartitionResult {
            budget,
            k,
            branch,
            parts,
            diversities,
            epsilon,
            trace,
        })
    }

    pub fn min_diversity(&self) -> &DiversityValue {
        self.diversities
            .iter()
            .min_by(|a, b| a.exact.cmp(&b.exact))
            .expect("a partition has at least one part")
    }
}

/// Dispatcher over the three constructions.
///
/// Normalizes the budget to `b1 <= b2` (un-swapping the output), then:
/// `k <= gcd` goes to the perfect branch, `k = 2` to [`split_two`], and
/// `k >= 3` to [`breakpoints_k`].
pub fn solve(b1: u64, b2: u64, k: u64) -> Result<PartitionResult, PmdError> {
    if k == 0 {
        return Err(PmdError::TooFewParts);
    }
    let swapped = b1 > b2;
    let (lo, hi) = if swapped { (b2, b1) } else { (b1, b2) };
    if k > lo {
        return Err(PmdError::TooFewResources {
            requested: k,
            max_parts: lo,
        });
    }
    let d = gcd(lo, hi);
    let (branch, parts, trace) = if k <= d {
        let parts = crate::perfect::build_perfect_partition(&TypeVector::pair(lo, hi), k)
            .expect("k <= gcd(b) is always feasible");
        (Branch::Perfect, parts, Vec::new())
    } else if k == 2 {
        let (x, rest) = split_two(lo, hi)?;
        (Branch::AlgorithmOne, vec![x, rest], Vec::new())
    } else {
        let (path, trace) = breakpoints_k(lo, hi, k)?;
        let parts = partition_from_breakpoints(&path)?;
        (Branch::AlgorithmTwo, parts, trace)
    };
    let parts = if swapped {
        parts.into_iter().map(swap_pair).collect()
    } else {
        parts
    };
    let result = PartitionResult::from_parts(TypeVector::pair(b1, b2), k, branch, parts, trace)
        .expect("solver output is always a valid partition");
    Ok(result)
}

fn swap_pair(v: TypeVector) -> TypeVector {
    let c = v.counts();
    TypeVector::new(vec![c[1], c[0]]).expect("two entries")
}
