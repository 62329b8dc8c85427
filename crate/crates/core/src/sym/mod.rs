//! Exact-arithmetic graded polynomial algebra.
//!
//! Polynomials live over a fixed [`Algebra`] of named commuting (even) and
//! Grassmann (odd) variables, with the deformation parameter λ as a
//! distinguished central even variable used for grading and truncation.
//! Coefficients are exact ([`crate::scalar::Gauss`] in general,
//! [`crate::scalar::Dyadic`] on the fast path), so "vanishes identically"
//! never depends on a floating-point tolerance.

mod algebra;
mod poly;
mod polymat;
mod table;

pub use algebra::{Algebra, Parity, Var, MAX_EVEN, MAX_ODD};
pub(crate) use poly::rat_f64;
pub use poly::{Assignment, GradedPoly, Monomial};
pub use polymat::PolyMat;
pub use table::{bracket_matrix, jacobiator, poisson_bracket, BracketTable};

use thiserror::Error;

/// Default λ-truncation order: enough headroom to resolve structure two
/// orders past the eighth, where the truncated deformation first fails.
pub const DEFAULT_TRUNCATION: u8 = 10;

#[derive(Debug, Error)]
pub enum SymError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable name `{0}` is reserved")]
    ReservedName(String),
    #[error("too many variables: {n} {parity} (limit {limit})")]
    TooManyVariables {
        n: usize,
        parity: &'static str,
        limit: usize,
    },
    #[error("bracket table entry for ({u}, {v}) violates graded antisymmetry")]
    AntisymmetryInconsistency { u: String, v: String },
    #[error("odd variable `{0}` present in numeric substitution")]
    OddInSubstitution(String),
    #[error("missing assignment for variable `{0}`")]
    MissingAssignment(String),
    #[error("arguments of mixed Grassmann parity")]
    MixedParity,
    #[error("coefficient {0} is not a real dyadic rational")]
    NonDyadicCoefficient(String),
    #[error("matrix dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
}
