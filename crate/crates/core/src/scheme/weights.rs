use super::{Grid, SchemeError};
use crate::problem::MemoryKernel;
use crate::Scalar;

/// `𝒦_{m,j} = ∫_{σ_m}^{σ_{m+1}} 𝒦(σ_{j+1} − s) ds`. On a uniform mesh this
/// depends only on the lag `j − m`, so one entry per lag is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionWeights<S> {
    by_lag: Vec<S>,
}

impl<S: Scalar> ConvolutionWeights<S> {
    /// Weights for any kernel with a known antiderivative; all zero for
    /// [`MemoryKernel::None`].
    pub fn new(kernel: &MemoryKernel<S>, grid: &Grid<S>) -> Result<Self, SchemeError> {
        if let MemoryKernel::Power { beta } = kernel {
            if !(*beta >= S::zero() && *beta < S::one()) {
                return Err(SchemeError::Kernel(format!(
                    "power kernel exponent must lie in [0,1), got {beta}"
                )));
            }
        }
        let mut by_lag = Vec::with_capacity(grid.steps);
        let mut below = kernel.mass(S::zero());
        for n in 1..=grid.steps {
            let above = kernel.mass(grid.t(n));
            by_lag.push(above - below);
            below = above;
        }
        if let Some(bad) = by_lag.iter().position(|w| !w.is_finite()) {
            return Err(SchemeError::Kernel(format!(
                "non-finite convolution weight at lag {bad}"
            )));
        }
        Ok(Self { by_lag })
    }

    /// `𝒦_{m,j}` for `0 ≤ m ≤ j`.
    pub fn get(&self, m: usize, j: usize) -> S {
        debug_assert!(m <= j);
        self.by_lag[j - m]
    }

    pub fn max_level(&self) -> usize {
        self.by_lag.len()
    }

    pub fn is_zero(&self) -> bool {
        self.by_lag.iter().all(|w| *w == S::zero())
    }
}

/// Weights of the power kernel `𝒦(t) = t^{−β}`.
pub fn convolution_weights<S: Scalar>(
    beta: S,
    grid: &Grid<S>,
) -> Result<ConvolutionWeights<S>, SchemeError> {
    ConvolutionWeights::new(&MemoryKernel::Power { beta }, grid)
}
