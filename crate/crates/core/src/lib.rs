//! Exact-arithmetic library for partitioning a typed population into
//! groups that preserve its Simpson diversity.
//!
//! A community with `r` types is a vector of nonnegative integer counts.
//! Its Simpson dominance index `D(x) = |x|_1^2 / |x|_2^2` lies in `[1, r]`
//! and is maximal when all types are equally abundant. This crate answers
//! two questions about splitting a budget vector `b` into `k` nonzero
//! integer parts:
//!
//! * when can every part match the global index exactly (`perfect`), and
//! * otherwise, how small can the worst relative loss
//!   `epsilon = 1 - min_i D(x_i) / D(b)` be made (`pmd`, two types).
//!
//! All decisions are made with exact integer arithmetic; floating point
//! appears only in rendered output. The [`oracle`] module provides an
//! exhaustive ground-truth search used by the test suites.

pub mod diversity;
pub mod lattice;
pub mod oracle;
pub mod perfect;
pub mod pmd;
pub mod ratio;

pub use diversity::{
    compare_diversity, epsilon_of_partition, hill_number, simpson_index,
    squared_cos_angle_with_ones, DiversityError, DiversityValue, TypeVector,
};
pub use lattice::{ext_euclid, mod_inverse, ExtEuclidResult, LatticeError, LatticePoint2};
pub use perfect::{build_perfect_partition, max_perfect_parts, PerfectError, PerfectVerdict};
pub use pmd::{solve, Branch, PartitionResult, PmdError, TraceFrame};
pub use ratio::ExactRatio;
