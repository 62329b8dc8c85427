//! Executable verification of the bracket structure's identities:
//! Lie-Poisson covariance of each sector, the Jacobi order analysis
//! (symbolic and numeric), centrality and Casimir statements, and the
//! canonical limits.
//!
//! Exact-mode checks assert zero polynomials or zero rationals, never a
//! tolerance. Numeric-mode checks report the residual together with a
//! finite-difference error-model estimate and pass when the residual stays
//! within ten times the estimate. Every check is deterministic under a fixed
//! seed; re-running produces bit-identical reports.

mod numeric;
mod symbolic;

pub use numeric::{
    default_lambda_grid, fd_jacobiator, jacobi_exact_f, jacobi_numeric_scaling, FdJacobiator,
    ScalingOutcome,
};
pub use symbolic::{
    check_adjoint_invariance, check_centrality_and_limits, check_group_selfconsistency,
    check_left_multiplication, check_spinor_covariance, check_vector_covariance,
    jacobi_order_analysis, VectorSector,
};

use serde::Serialize;
use thiserror::Error;

use crate::brackets::BracketError;
use crate::sym::SymError;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("could not find a usable sampling point after {0} attempts")]
    SamplingExhausted(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Exploratory,
}

/// One verification record; serializes to a single JSON line with fields
/// {check, params, status, residual, details}.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: serde_json::Value,
    pub status: Status,
    pub residual: f64,
    pub details: serde_json::Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Exploratory)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }
}
