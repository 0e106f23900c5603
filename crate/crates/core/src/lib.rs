//! Exact counts of diagonalizable matrices over `Z/p^k`.
//!
//! A diagonalizable matrix over `Z/p^k` is similar to exactly one diagonal
//! matrix up to reordering the diagonal, so
//! `|Diag_n| = sum over types T of t(T) |GL_n| / c(T)`. The crate computes
//! each factor exactly and cross-checks the sum against brute-force orbit
//! enumeration.

pub mod closed;
pub mod error;
pub mod group;
pub mod matrix;
pub mod oracle;
pub mod ratio;
pub mod residue;
pub mod types;
pub mod valuation;

pub use error::{Error, Result};
pub use group::{centralizer_order, class_size, gl_order, MatrixType};
pub use matrix::{enumerate_gl, DiagonalSpec, RingMatrix, DEFAULT_BUDGET};
pub use ratio::ExactRatio;
pub use residue::{Modulus, Residue, Valuation};
pub use types::{classify_diagonal, diag_count_engine, diag_count_semidirect, enumerate_types, t_of_type, TypeReport};
pub use valuation::ValuationGraph;
