use num_bigint::BigUint;
use thiserror::Error;

use crate::residue::Valuation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("operation requires a prime-power modulus, got {0}")]
    UnsupportedModulus(u64),

    #[error("element is not invertible (p-adic valuation {valuation})")]
    NotInvertible { valuation: Valuation },

    #[error("phi_{i}(p^j) is negative for p = {p}")]
    NegativeCount { p: u64, i: u64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("enumeration needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },

    #[error("invalid type: {0}")]
    InvalidType(String),

    #[error("diagonal entries must be distinct (repeated value {0})")]
    DuplicateEntries(u64),

    #[error("cannot reconstruct valuation graph: {0}")]
    Reconstruction(String),

    #[error("type count mismatch: formula gives {formula}, multiset scan gives {scanned}")]
    TypeCountMismatch { formula: BigUint, scanned: BigUint },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
