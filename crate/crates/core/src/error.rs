//! Error type shared across the crate.

use crate::algebra::{Bidegree, Signature};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("signature mismatch: (n={}, d={}) vs (n={}, d={})", .0.n, .0.d, .1.n, .1.d)]
    SignatureMismatch(Signature, Signature),

    #[error("generator index out of range: {gen} for signature (n={}, d={})", .sig.n, .sig.d)]
    IndexOutOfRange { gen: String, sig: Signature },

    #[error("expected a homogeneous element of total degree {expected}, found {found}")]
    WrongDegree { expected: u32, found: String },

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("expected bidegree {expected}, found {found}")]
    WrongBidegree { expected: Bidegree, found: String },

    #[error("endomorphism is not skew-symmetric: {0}")]
    NotSkew(String),

    #[error("tensor function contains momentum (p) terms: {0}")]
    MomentumTerms(String),

    #[error("I^2 != alpha*id: {0}")]
    NotScalarSquare(String),

    #[error("lambda_0 = {value} is excluded: equals 4/((-3)^{m} - 1)")]
    ExcludedLambda { value: String, m: u32 },

    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),

    #[error("unknown tensor name: {0}")]
    UnknownTensor(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
