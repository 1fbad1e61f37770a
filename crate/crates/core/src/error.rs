use thiserror::Error;

use crate::schlafli::{RegionKind, Scheme};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{{{p},{q}}} is not hyperbolic: 1/p + 1/q must be < 1/2")]
    NotHyperbolic { p: i64, q: i64 },

    #[error("degenerate input {{{p},{q}}}: both p and q must be at least 3")]
    DegenerateInput { p: i64, q: i64 },

    #[error("scheme {scheme} cannot be used with q = {q}")]
    SchemeParityMismatch { scheme: Scheme, q: u32 },

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("region {0} does not occur in this splitting")]
    UnknownRegion(RegionKind),

    #[error("resource cap exceeded: {needed} items requested, cap is {cap}")]
    CapExceeded { needed: String, cap: u64 },

    #[error("need more than {need} levels for the recurrence check, got {have}")]
    TooFewLevels { have: usize, need: usize },

    #[error("basis is not strictly increasing at index {index}")]
    NonMonotoneBasis { index: usize },

    #[error("{value} has no representation with digits in 0..={bound}")]
    Unrepresentable { value: u64, bound: u64 },

    #[error("digit {digit} outside 0..={bound}")]
    DigitOutOfRange { digit: u64, bound: u64 },

    #[error("root modulus too close to 1 to decide: {modulus}")]
    IndeterminateModulus { modulus: f64 },

    #[error("tessellation too shallow: {0}")]
    InsufficientTessellationDepth(String),

    #[error("tile has no father edge")]
    NoFatherEdge,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
