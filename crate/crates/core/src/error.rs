use thiserror::Error;

use crate::fibration::ClosureVerdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("matrix is not symplectic for genus {0}")]
    NotSymplectic(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("word is empty; a fibration needs at least one singular fiber")]
    EmptyWord,
    #[error("undeclared curve '{0}'")]
    UndeclaredCurve(String),
    #[error("duplicate curve name '{0}'")]
    DuplicateCurve(String),
    #[error("curve '{name}': {reason}")]
    InvalidCurve { name: String, reason: String },
    #[error("handle monodromies: {0}")]
    Handles(String),
    #[error("flags: {0}")]
    Flags(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeyerError {
    #[error("signature is only computed over the sphere (base genus {0} given)")]
    WrongBaseGenus(usize),
    #[error("monodromy is not closed (verdict: {0})")]
    NotClosed(ClosureVerdict),
    #[error("genus mismatch between cocycle arguments ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error(
        "sign calibration failed: {0}. The Meyer aggregation formula itself must be revisited \
         against the published signature algorithms (open question: calibrated formula \
         inconsistent with the anchors); refusing to guess a variant"
    )]
    Calibration(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("full invariants are only derived over the sphere (base genus {0} given)")]
    WrongBaseGenus(usize),
    #[error("monodromy is not closed (verdict: {0})")]
    NotClosed(ClosureVerdict),
    #[error("b2 + sigma = {b2} + {sigma} is odd; signature and handle counts disagree")]
    ParityError { b2: i64, sigma: i64 },
    #[error("Kodaira dimension is only classified for minimal manifolds")]
    NotMinimal,
    #[error("inconsistent input: K.omega > 0 with K^2 = {0} < 0 on a minimal manifold")]
    InconsistentInput(i64),
    #[error("degree bound needs a codomain of genus at least 1")]
    InvalidCodomain,
    #[error(transparent)]
    Signature(#[from] MeyerError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("report does not match (g, h) = ({g}, {h}): {reason}")]
    MismatchedReport { g: usize, h: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("no catalog entry named '{0}'")]
    NotFound(String),
    #[error("fiber genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("fibration '{0}' is not closed")]
    NotClosed(String),
    #[error("fiber sum is only defined here over the sphere ('{0}' has positive base genus)")]
    WrongBaseGenus(String),
    #[error("search space of {states} words exceeds the budget of {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
    #[error("invalid search: {0}")]
    InvalidSearch(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}
