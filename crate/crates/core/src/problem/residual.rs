//! Pointwise PDE residual of a candidate solution, computed without any part
//! of the discrete scheme: Caputo terms and the memory convolution by graded
//! quadrature, spatial derivatives by 5-point stencils.

use super::{ProblemError, ProblemSpec};
use crate::kernels::{caputo_oracle, central_derivative, SingularConvolution};
use crate::Scalar;

fn second_x<S: Scalar>(u: &dyn Fn(S, S) -> S, x: S, t: S, h: S) -> S {
    let c = S::lit(12.0) * h * h;
    (-u(x + h + h, t) + S::lit(16.0) * u(x + h, t) - S::lit(30.0) * u(x, t)
        + S::lit(16.0) * u(x - h, t)
        - u(x - h - h, t))
        / c
}

fn first_x<S: Scalar>(u: &dyn Fn(S, S) -> S, x: S, t: S, h: S) -> S {
    (-u(x + h + h, t) + S::lit(8.0) * u(x + h, t) - S::lit(8.0) * u(x - h, t) + u(x - h - h, t))
        / (S::lit(12.0) * h)
}

/// Residual `L[u] − f − g` of `candidate(x, t)` at one interior point.
pub fn residual_at<S: Scalar>(
    problem: &ProblemSpec<S>,
    candidate: &dyn Fn(S, S) -> S,
    x: S,
    t: S,
    tol: S,
) -> Result<S, ProblemError> {
    if !(t > S::zero()) {
        return Err(ProblemError::Invalid(format!(
            "residual needs t > 0, got {t}"
        )));
    }
    let hx = S::lit(1e-3) * problem.length;
    let inner_tol = tol / S::lit(10.0);

    let mut lhs = S::zero();
    for term in problem.fractional_terms() {
        let cu = |s: S| term.coeff.at(x, s) * candidate(x, s);
        let d = if term.order < S::one() {
            caputo_oracle(&cu, term.order, t, inner_tol)?
        } else {
            central_derivative(&cu, t)
        };
        lhs += term.sign * d;
    }

    let u = candidate(x, t);
    let uxx = second_x(candidate, x, t, hx);
    let ux = first_x(candidate, x, t, hx);
    lhs += -problem.diffusion.at(x, t) * uxx + problem.advection.at(x, t) * ux;

    if !problem.kernel.is_none() {
        let kernel = |tau: S| problem.kernel.value(tau);
        let kernel_mass = |w: S| problem.kernel.mass(w);
        let density = |s: S| problem.memory_coeff.at(x, s) * second_x(candidate, x, s, hx);
        let half = S::lit(0.5);
        let left_mass = |w: S| w * density(w * half);
        let right_mass = |w: S| w * density(t - w * half);
        let conv = SingularConvolution {
            kernel: &kernel,
            kernel_mass: &kernel_mass,
            density: &density,
            left_mass: &left_mass,
            right_mass: &right_mass,
        };
        lhs -= conv.integrate(t, inner_tol)?;
    }

    Ok(lhs - problem.nonlinearity.eval(x, t, u) - problem.source.at(x, t))
}

/// Largest absolute residual of `candidate` over `points`.
pub fn residual_oracle<S: Scalar>(
    problem: &ProblemSpec<S>,
    candidate: &dyn Fn(S, S) -> S,
    points: &[(S, S)],
    tol: S,
) -> Result<S, ProblemError> {
    let mut worst = S::zero();
    for &(x, t) in points {
        let r = residual_at(problem, candidate, x, t, tol)?.abs();
        if !(r <= worst) {
            worst = r;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::example_9_1;

    fn interior() -> Vec<(f64, f64)> {
        (1..=5)
            .flat_map(|i| (1..=5).map(move |j| (i as f64 / 6.0, j as f64 / 6.0)))
            .collect()
    }

    #[test]
    fn manufactured_solution_has_small_residual() {
        let p = example_9_1(0.5_f64, 1.0 / 6.0, 0.25).unwrap();
        let exact = p.exact.clone().unwrap();
        let u = |x: f64, t: f64| exact.at(x, t);
        let r = residual_oracle(&p, &u, &interior(), 1e-6).unwrap();
        assert!(r < 1e-3, "residual {r}");
    }

    #[test]
    fn perturbed_solution_is_detected() {
        let p = example_9_1(0.5_f64, 1.0 / 6.0, 0.25).unwrap();
        let exact = p.exact.clone().unwrap();
        let u = |x: f64, t: f64| exact.at(x, t) + 0.1 * t;
        let r = residual_oracle(&p, &u, &interior(), 1e-6).unwrap();
        assert!(r > 1e-2, "residual {r}");
    }

    #[test]
    fn rejects_initial_time() {
        let p = example_9_1(0.5_f64, 1.0 / 6.0, 0.25).unwrap();
        assert!(residual_at(&p, &|_, _| 0.0, 0.5, 0.0, 1e-6).is_err());
    }
}
