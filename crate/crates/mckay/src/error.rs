//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}: A needs rank >= 1, D rank >= 4, E rank in {{6,7,8}}")]
    InvalidRank { family: char, rank: u32 },

    #[error("invalid label {0:?}: expected a family letter followed by a rank, e.g. \"A3\", \"D5\", \"E7\"")]
    InvalidLabel(String),

    #[error("vector length {got} does not match vertex count {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex {0} has a loop and is not a fundamental root")]
    NotFundamental(usize),

    #[error("operation requires an affine diagram")]
    NotAffine,

    #[error("series contexts differ: {0}")]
    ContextMismatch(String),

    #[error("negative exponent entry in {0}; this ring has no negative powers")]
    NegativeExponent(String),

    #[error("substitution leaves the nonnegative-exponent domain: term {term} maps to exponent {image}")]
    SubstitutionDomain { term: String, image: String },

    #[error("exponent {exponent} has total degree beyond the truncation order {order}")]
    CoefficientOutOfRange { exponent: String, order: usize },

    #[error("series has constant term {got}, expected {expected}")]
    WrongConstantTerm { expected: String, got: String },

    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    #[error("stability parameter is not generic: zero pairing with root {root}")]
    NonGenericParameter { root: String },

    #[error("non-generic path: {0}")]
    NonGenericPath(String),

    #[error("operation requires a stability parameter without an infinitesimal part")]
    PerturbedParameter,

    #[error("the imaginary wall {root} carries no wall-crossing factor")]
    ImaginaryWall { root: String },

    #[error("total dimension is zero")]
    ZeroTotalDimension,

    #[error("framing dimension is zero")]
    ZeroFramingDimension,

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
