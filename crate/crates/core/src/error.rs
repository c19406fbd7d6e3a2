//! Error type shared by every layer of the calculator.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("arithmetic genus is not integral for {0}: D^2 + K.D is odd")]
    NonIntegralGenus(String),
    #[error("divisor must have integral coordinates: {0}")]
    NonIntegral(String),
    #[error("divisor is not nef and big relative to the model: {0}")]
    NotNefBig(String),
    #[error("divisor is not big (A^2 = {0} <= 0)")]
    NotBig(String),
    #[error("divisor is not ample relative to the model: {0}")]
    NotAmple(String),
    #[error("curve configuration is not negative definite: {0}")]
    NotNegativeDefinite(String),
    #[error("curve configuration is not connected: {0}")]
    NotConnected(String),
    #[error("model inconsistency: {0}")]
    ModelInconsistent(String),
    #[error("no ample reference class configured for this surface")]
    NoAmpleReference,
    #[error("not pseudo-effective or the curve model is incomplete: {0}")]
    NotPseudoEffectiveOrIncompleteModel(String),
    #[error("Zariski decomposition is ambiguous: {0}")]
    AmbiguousDecomposition(String),
    #[error("no solution within the search box (bound {0})")]
    BoxExhausted(u32),
    #[error("coordinatewise minimum is not unique within the search box")]
    NonUniqueMinimum,
    #[error("correction divisor is not integral: {0}")]
    IntegralityFailure(String),
    #[error("x must be positive, got {0}")]
    NonpositiveX(String),
    #[error("input must be positive: {0}")]
    NonpositiveInput(String),
    #[error("l and p must be positive integers (l = {l}, p = {p})")]
    NonpositiveLP { l: String, p: String },
    #[error("theorem hypothesis cannot be verified from the lattice: {0}")]
    UnverifiableHypothesis(String),
    #[error("unknown curve name '{0}'")]
    UnknownCurveName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
