use super::SchemeError;
use crate::Scalar;

/// `lower[k] x_{k−1} + diag[k] x_k + upper[k] x_{k+1} = rhs[k]`.
///
/// During assembly `lower[0]` and `upper[K]` hold the coefficients of the
/// ghost values `u_{−1}`, `u_{K+1}`; [`super::eliminate_ghosts`] clears them.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<S> {
    pub lower: Vec<S>,
    pub diag: Vec<S>,
    pub upper: Vec<S>,
    pub rhs: Vec<S>,
}

impl<S: Scalar> TridiagonalSystem<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![S::zero(); n],
            diag: vec![S::zero(); n],
            upper: vec![S::zero(); n],
            rhs: vec![S::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A x` ignoring the ghost slots.
    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let n = self.len();
        (0..n)
            .map(|k| {
                let mut v = self.diag[k] * x[k];
                if k > 0 {
                    v += self.lower[k] * x[k - 1];
                }
                if k + 1 < n {
                    v += self.upper[k] * x[k + 1];
                }
                v
            })
            .collect()
    }
}

/// Thomas algorithm; fails on a zero or non-finite pivot.
pub fn thomas_solve<S: Scalar>(sys: &TridiagonalSystem<S>) -> Result<Vec<S>, SchemeError> {
    let n = sys.len();
    let mut c = vec![S::zero(); n];
    let mut d = vec![S::zero(); n];
    let mut prev_c = S::zero();
    let mut prev_d = S::zero();
    for k in 0..n {
        let a = if k > 0 { sys.lower[k] } else { S::zero() };
        let pivot = sys.diag[k] - a * prev_c;
        if pivot == S::zero() || !pivot.is_finite() {
            return Err(SchemeError::ZeroPivot { row: k });
        }
        let up = if k + 1 < n { sys.upper[k] } else { S::zero() };
        c[k] = up / pivot;
        d[k] = (sys.rhs[k] - a * prev_d) / pivot;
        prev_c = c[k];
        prev_d = d[k];
    }
    let mut x = d;
    for k in (0..n.saturating_sub(1)).rev() {
        let next = x[k + 1];
        x[k] -= c[k] * next;
    }
    Ok(x)
}
