//! Special functions and fractional-calculus kernels.

mod fractional;
mod positivity;
mod quadrature;
mod special;

use thiserror::Error;

pub use fractional::{
    gl_weights, kernel_n, mittag_leffler, omega, threshold_t1, threshold_t2, GlWeights,
};
pub use positivity::{
    nu_hat_gamma, nu_star, positivity_report, sample_kernels, KernelSample, PositivityReport,
    SampleRequest, ROOT_TOLERANCE, STANDARD_RATIOS,
};
pub use quadrature::{caputo_oracle, central_derivative, gauss8, SingularConvolution};
pub use special::{digamma, gamma, ln_gamma};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("gamma function pole at x = {x}")]
    Pole { x: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("order violation: {0}")]
    OrderViolation(String),
    #[error("no sign change of N(t*; nu, r*nu) on (0,1) for t* = {t_star}, r = {ratio}")]
    NoSignChange { t_star: f64, ratio: f64 },
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("quadrature tolerance {requested:e} not reached (last change {achieved:e})")]
    ToleranceNotReached { achieved: f64, requested: f64 },
}
