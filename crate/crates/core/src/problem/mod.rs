//! Problem descriptions: the expression language for coefficient fields,
//! the problem record, the built-in library, hypothesis validation and an
//! independent residual oracle.

mod expr;
mod library;
mod residual;
mod spec;
mod validate;

use thiserror::Error;

use crate::kernels::KernelError;

pub use expr::{BinOp, Expr, ExprError, Func, Var};
pub use library::{by_name, example_9_1, example_9_2, Nonlinearity, LIBRARY_NAMES};
pub use residual::{residual_at, residual_oracle};
pub use spec::{BoundaryCondition, FractionalOrders, FractionalTerm, MemoryKernel, ProblemSpec};
pub use validate::{validate_hypotheses, Hypothesis, Status, ValidationEntry, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("invalid orders: {0}")]
    Orders(String),
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("invalid kernel: {0}")]
    Kernel(String),
    #[error("unknown library problem '{0}'")]
    UnknownProblem(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("quadrature: {0}")]
    Quadrature(#[from] KernelError),
}
