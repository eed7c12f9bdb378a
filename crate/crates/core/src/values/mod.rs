//! Exact valuation values: rational combinations of rationally independent reals.

mod basis;
mod vector;

pub use basis::{Generator, GeneratorSpec, IntervalOracle, RealBasis, DEFAULT_EXTRA_PRECISION};
pub use vector::{rational_rank, RationalInterval, ValueVector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("values live over different bases")]
    BasisMismatch,
    #[error("comparison undecided at {bits} bits of precision; the basis may be dependent")]
    IndeterminateComparison { bits: u64 },
    #[error("interval width must be positive")]
    NonPositiveWidth,
    #[error("generator index {index} out of range for a basis of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("basis has no unit generator to carry a rational value")]
    NoUnitGenerator,
    #[error("generator {0} repeats an earlier one")]
    DuplicateGenerator(usize),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("a basis needs at least one generator")]
    EmptyBasis,
    #[error("division by a non-positive value")]
    NonPositiveDivisor,
}
