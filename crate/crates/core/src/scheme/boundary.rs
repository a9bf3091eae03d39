use super::{SchemeError, TridiagonalSystem};
use crate::Scalar;

/// `c_deriv u_x + c_value u = phi` at one end, with `phi` already sampled at
/// the new level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRow<S> {
    pub c_deriv: S,
    pub c_value: S,
    pub phi: S,
}

impl<S: Scalar> BoundaryRow<S> {
    /// Ghost value `u_{−1}` (`outward = −1`) or `u_{K+1}` (`outward = +1`)
    /// from the central difference of the condition; `None` for Dirichlet.
    pub fn ghost(&self, edge: S, inner: S, h: S, outward: S) -> Option<S> {
        if self.c_deriv == S::zero() {
            return None;
        }
        let two_h = h + h;
        Some(inner + outward * two_h / self.c_deriv * (self.phi - self.c_value * edge))
    }
}

fn check(side: &'static str, bc: &BoundaryRow<impl Scalar>) -> Result<(), SchemeError> {
    if bc.c_deriv.is_zero() && bc.c_value.is_zero() {
        return Err(SchemeError::DegenerateBoundary { side });
    }
    Ok(())
}

/// Folds the ghost coefficients `lower[0]`, `upper[K]` into the end rows, or
/// replaces an end row by a Dirichlet row when its derivative coefficient is
/// zero.
pub fn eliminate_ghosts<S: Scalar>(
    sys: &mut TridiagonalSystem<S>,
    left: &BoundaryRow<S>,
    right: &BoundaryRow<S>,
    h: S,
) -> Result<(), SchemeError> {
    check("left", left)?;
    check("right", right)?;
    let last = sys.len() - 1;
    let two_h = h + h;

    let g = std::mem::replace(&mut sys.lower[0], S::zero());
    if left.c_deriv.is_zero() {
        sys.diag[0] = S::one();
        sys.upper[0] = S::zero();
        sys.rhs[0] = left.phi / left.c_value;
    } else {
        // u_{−1} = u_1 − (2h/c₁)(φ₁ − c₂ u_0)
        let r = two_h / left.c_deriv;
        sys.upper[0] += g;
        sys.diag[0] += g * r * left.c_value;
        sys.rhs[0] += g * r * left.phi;
    }

    let g = std::mem::replace(&mut sys.upper[last], S::zero());
    if right.c_deriv.is_zero() {
        sys.diag[last] = S::one();
        sys.lower[last] = S::zero();
        sys.rhs[last] = right.phi / right.c_value;
    } else {
        // u_{K+1} = u_{K−1} + (2h/c₃)(φ₂ − c₄ u_K)
        let r = two_h / right.c_deriv;
        sys.lower[last] += g;
        sys.diag[last] -= g * r * right.c_value;
        sys.rhs[last] -= g * r * right.phi;
    }
    Ok(())
}
