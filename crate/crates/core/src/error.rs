//! Error type shared by the whole library.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot take the order of the zero function")]
    ZeroFunction,
    #[error("absolute value of zero is undefined")]
    ZeroValue,
    #[error("declared degree {expected} inconsistent with coefficient list of length {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("point lies on the invariant hyperplane x_N = 0")]
    OnHyperplane,
    #[error("restriction to the invariant hyperplane is not a morphism (resultant vanishes)")]
    NotAMorphism,
    #[error("dimension N = {0} unsupported (only N = 1, 2)")]
    UnsupportedDimension(usize),
    #[error("degree d = {0} invalid (need d >= 2)")]
    BadDegree(u32),
    #[error("a coefficient or coordinate has a pole at the parameter value")]
    PoleAtParameter,
    #[error("specialized map is degenerate at this parameter (bad fiber)")]
    DegenerateFiber,
    #[error("restriction resultant vanishes; no Nullstellensatz certificate")]
    SingularRestriction,
    #[error("family is not fibral (a hyperplane coefficient is non-constant)")]
    NotFibral,
    #[error("Green's iteration inconclusive at place {place} after {n_max} steps")]
    Inconclusive { place: String, n_max: u32 },
    #[error("point map lands in the invariant hyperplane identically")]
    PointInHyperplane,
    #[error("parameter value lies in the support of the divisor")]
    PointInSupport,
    #[error("family has no valid divisor: {0}")]
    DegenerateFamily(String),
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
