use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has zero constant term (root 0)")]
    ZeroConstantTerm,
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("no contracting direction: automorphism is distal")]
    NoContractingDirection,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("subgroup is not invariant: {0}")]
    NotInvariant(String),
    #[error("measure is not L-invariant: {0}")]
    NotLInvariant(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
