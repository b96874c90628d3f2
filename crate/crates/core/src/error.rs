use alloc::string::String;

/// Errors raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("row {row} is linearly dependent on the rows before it")]
    DependentRow { row: usize },
    #[error("row {row} of the right-hand side is not in the row span")]
    Inconsistent { row: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("lattices span different subspaces")]
    DifferentSpans,
    #[error("lattice is not full rank in its ambient space")]
    NotFull,
    #[error("{0} is not contained in {1}")]
    NotContained(&'static str, &'static str),
    #[error("group axiom fails: {0}")]
    GroupAxiom(String),
    #[error("malformed group spec: {0}")]
    GroupSpec(String),
    #[error("group is not abelian; supply rational split data instead")]
    NonAbelian,
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("action does not preserve the lattice span")]
    ActionMismatch,
    #[error("formula input invalid: {0}")]
    Formula(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
