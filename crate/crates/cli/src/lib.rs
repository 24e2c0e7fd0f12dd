//! Report rendering and golden scenarios behind the `divpart` binary.

pub mod report;
pub mod scenarios;
