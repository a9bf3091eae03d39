//! Solver and kernel toolkit for one-dimensional semilinear multi-term
//! time-fractional integro-differential problems.
//!
//! * [`kernels`]: Γ, ψ, `ω_θ`, Mittag-Leffler, Grünwald-Letnikov weights, the
//!   sign kernel `𝒩` with its positivity thresholds, and a Caputo quadrature
//!   oracle.
//! * [`scheme`]: the implicit finite-difference scheme (GL history sums,
//!   trapezoidal memory term, ghost-point boundaries, Thomas solve) and
//!   Richardson extrapolation.
//! * [`problem`]: problem definitions built from a small expression language,
//!   the two reference examples, hypothesis checks and a continuous residual
//!   oracle.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

pub mod kernels;
pub mod problem;
pub mod scheme;
mod scalar;

pub use scalar::Scalar;

pub type GlWeights = kernels::GlWeights<f64>;
pub type PositivityReport = kernels::PositivityReport<f64>;
pub type ConvolutionWeights = scheme::ConvolutionWeights<f64>;
pub type Grid = scheme::Grid<f64>;
pub type HistoryBuffer = scheme::HistoryBuffer<f64>;
pub type SolutionField = scheme::SolutionField<f64>;
pub type TridiagonalSystem = scheme::TridiagonalSystem<f64>;
pub type FractionalOrders = problem::FractionalOrders<f64>;
pub type ProblemSpec = problem::ProblemSpec<f64>;
