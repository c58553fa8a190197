//! Crate-wide error type.
//!
//! Operational failures (bad input, configured limits) are reported through
//! [`Error`]; violated mathematical invariants that would indicate an
//! implementation bug surface as [`Error::StructureViolation`]. Mismatched
//! field contexts in arithmetic are programming errors and panic instead.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u128),

    #[error("field cardinality {p}^{k} does not fit in 128 bits")]
    CardinalityOverflow { p: u64, k: u32 },

    #[error("the zero polynomial has no factorization data")]
    ZeroPolynomial,

    #[error("the zero element is not invertible")]
    ZeroElement,

    #[error("matrix is singular (zero determinant)")]
    Singular,

    #[error("identity class excluded: matrix is scalar, so its projective order is 1")]
    IdentityClass,

    #[error("field too large for exhaustive enumeration and no sample budget given (q = {q})")]
    BudgetExceeded { q: u128 },

    #[error("no element of multiplicative order {order} exists in a field with {q} elements")]
    NoPrimitiveRoot { order: u128, q: u128 },

    #[error("polynomial degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: u128, cap: u64 },

    #[error("polynomial action needs degree >= 2, got {0}")]
    DegreeTooSmall(usize),

    #[error("polynomial action is only defined on irreducible inputs")]
    NotIrreducible,

    #[error("element lies in the base field, where the fractional-linear action may degenerate")]
    BaseFieldElement,

    #[error("factor degree {degree} is outside the admissible degree menu {menu:?} (implementation bug)")]
    StructureViolation { degree: usize, menu: Vec<usize> },

    #[error("enumeration of {count} vectors exceeds the configured cap {cap}")]
    EnumerationCap { count: String, cap: u64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("closed-form bounds need r >= 3, got {0}")]
    RTooSmall(u32),

    #[error("no analytic order bound applies to a diagonal matrix: the shifted root satisfies a Kummer relation that can cap its order below every closed form")]
    DiagonalCase,

    #[error("group order {q}^{n} - 1 does not fit in {bits} bits")]
    OrderWidth { q: u128, n: u32, bits: u32 },

    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    pub fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse { what, input: input.into() }
    }
}
