//! Semi-tensor product algebra over Boolean logic matrices.
//!
//! ```
//! use stp_sweep::stp::{structural_matrix, stp, Operator};
//!
//! // M_∨ ⋉ M_¬ = M_→, i.e. a → b = ¬a ∨ b
//! let lhs = stp(&structural_matrix(Operator::Or).to_dense(),
//!               &structural_matrix(Operator::Not).to_dense());
//! assert_eq!(lhs, structural_matrix(Operator::Implies).to_dense());
//! ```

mod canon;
mod expr;
mod logic;
mod matrix;

use thiserror::Error;

pub use canon::{canonical_form, canonical_form_with, dense, evaluate, Strategy};
pub use expr::BoolExpr;
pub use logic::{
    khatri_rao, structural_matrix, BoolVec, LogicMatrix, LutEval, Operator, MAX_ARITY,
};
pub use matrix::{kronecker, stp, IntMatrix};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StpError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("a {rows}x{cols} matrix needs {} entries, got {got}", rows * cols)]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("inner dimensions differ: {left} columns vs {right} rows")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("cannot apply a Boolean vector to an arity-0 logic matrix")]
    ZeroArity,
    #[error("arity {0} exceeds the maximum of {MAX_ARITY}")]
    ArityTooLarge(usize),
    #[error("truth row length {0} is not a power of two")]
    BadRowLength(usize),
    #[error("invalid truth-row character `{0}`")]
    BadRowChar(char),
    #[error("column {0} is not a Boolean vector")]
    NotLogic(usize),
    #[error("variable x{index} is outside x1..x{n}")]
    VarOutOfRange { index: usize, n: usize },
    #[error("table of arity {expected} applied to {got} operands")]
    LutArity { expected: usize, got: usize },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
