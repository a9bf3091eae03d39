//! Implicit finite-difference scheme on a uniform space-time mesh.
//!
//! Each Caputo term `D^θ(c u)` is replaced by a Grünwald-Letnikov sum over the
//! stored products `c u` of all previous levels, the memory term by a
//! product-trapezoid rule with exact kernel masses, and the spatial operator
//! by central differences imposed at every node including the two ends,
//! where ghost values are eliminated through the boundary conditions. One
//! tridiagonal solve advances a level; `f` is taken explicitly from the
//! previous level.

mod boundary;
mod grid;
mod history;
mod richardson;
mod stepper;
mod tridiag;
mod weights;

use thiserror::Error;

use crate::kernels::KernelError;
use crate::problem::ProblemError;

pub use boundary::{eliminate_ghosts, BoundaryRow};
pub use grid::{build_grid, Grid, SolutionField};
pub use history::{caputo_history_sum, HistoryBuffer, HistorySum};
pub use richardson::{max_abs_error, richardson, solve, SolveOptions};
pub use stepper::{advance, Stepper};
pub use tridiag::{thomas_solve, TridiagonalSystem};
pub use weights::{convolution_weights, ConvolutionWeights};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid kernel: {0}")]
    Kernel(String),
    #[error("history holds {found} levels, expected {expected}")]
    HistoryLength { expected: usize, found: usize },
    #[error("{side} boundary has both coefficients zero")]
    DegenerateBoundary { side: &'static str },
    #[error("zero diagonal in row {row}")]
    SingularDiagonal { row: usize },
    #[error("non-finite {what} in row {row}")]
    NonFinite { what: &'static str, row: usize },
    #[error("zero pivot in row {row} of the tridiagonal sweep")]
    ZeroPivot { row: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("at time level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<SchemeError>,
    },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Weights(#[from] KernelError),
}

impl SchemeError {
    pub(crate) fn at_level(self, level: usize) -> Self {
        match self {
            e @ SchemeError::AtLevel { .. } => e,
            e => SchemeError::AtLevel {
                level,
                source: Box::new(e),
            },
        }
    }
}
