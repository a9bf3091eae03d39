//! Reference problems on `(0, 1) × (0, 1]` with homogeneous Neumann data.
//!
//! Both share `𝒦(t) = t^{−1/3}`, `𝔞 = cos(πx/4) + t`, `𝔡 = x + t`,
//! `b = t^{1/3} + sin(πx)` and `u₀ = cos(πx)`.

use super::{
    BoundaryCondition, Expr, FractionalOrders, MemoryKernel, ProblemError, ProblemSpec,
};
use crate::Scalar;

/// Library names accepted by [`by_name`].
pub const LIBRARY_NAMES: [&str; 3] = ["example_9_1", "example_9_2_linear", "example_9_2_nonlinear"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    /// `f = 0`
    Linear,
    /// `f = x t cos(u²)`
    Nonlinear,
}

fn parse(src: &str) -> Expr {
    Expr::parse(src).unwrap_or_else(|e| panic!("library expression '{src}': {e}"))
}

fn lit<S: Scalar>(v: S) -> String {
    format!("{:?}", v.to_f64().expect("finite order"))
}

fn shared<S: Scalar>(
    name: &str,
    orders: FractionalOrders<S>,
    rho0: &str,
    rho1: &str,
    gamma1: &str,
    nonlinearity: &str,
    source: Expr,
    exact: Option<Expr>,
) -> ProblemSpec<S> {
    ProblemSpec {
        name: name.to_string(),
        orders,
        diffusion: parse("cos(pi*x/4) + t"),
        advection: parse("x + t"),
        memory_coeff: parse("t^(1/3) + sin(pi*x)"),
        rho0: parse(rho0),
        rho: vec![parse(rho1)],
        gamma: vec![parse(gamma1)],
        kernel: MemoryKernel::Power {
            beta: S::one() / S::lit(3.0),
        },
        nonlinearity: parse(nonlinearity),
        source,
        initial: parse("cos(pi*x)"),
        left: BoundaryCondition::neumann(Expr::num(0.0)),
        right: BoundaryCondition::neumann(Expr::num(0.0)),
        exact,
        length: S::one(),
        horizon: S::one(),
    }
}

/// Manufactured problem with exact solution `u = cos(πx) + t^ν/Γ(1+ν)`,
/// `ϱ₀ = 1 + t`, `ϱ₁ = 1/2`, `γ₁ = (1+t²)/2`, `f = x t sin(u²)`.
pub fn example_9_1<S: Scalar>(nu: S, nu1: S, mu1: S) -> Result<ProblemSpec<S>, ProblemError> {
    if !(nu < S::one()) {
        return Err(ProblemError::Orders(format!(
            "example 9.1 needs nu < 1, got {nu}"
        )));
    }
    let orders = FractionalOrders::new(nu, vec![nu1], vec![mu1])?;
    orders.check_ordering()?;
    let (n, a, b) = (lit(nu), lit(nu1), lit(mu1));
    let source = format!(
        "pi^2*(cos(pi*x/4) + t + 3*t^(2/3)*sin(pi*x)/2 + t*pi/(3*sin(pi/3)))*cos(pi*x) \
         - x*t*sin((cos(pi*x) + t^{n}/gamma(1 + {n}))^2) \
         - (x + t)*pi*sin(pi*x) + 1 \
         + t^(1 - {n})*cos(pi*x)/gamma(2 - {n}) \
         + (1 + {n})*t \
         + t^({n} - {a})/(2*gamma(1 + {n} - {a})) \
         - (1/2)*(t^({n} - {b})/gamma(1 + {n} - {b}) \
                  + 2*t^(2 - {b})*cos(pi*x)/gamma(3 - {b}) \
                  + (2 + {n})*(1 + {n})*t^(2 + {n} - {b})/gamma(3 + {n} - {b}))"
    );
    let exact = format!("cos(pi*x) + t^{n}/gamma(1 + {n})");
    Ok(shared(
        "example_9_1",
        orders,
        "1 + t",
        "1/2",
        "(1 + t^2)/2",
        "x*t*sin(u^2)",
        parse(&source),
        Some(parse(&exact)),
    ))
}

/// Constant-coefficient problem `ϱ₀ = 1`, `ϱ₁ = γ₁ = 1/2`, `g = 0`, with
/// `ν₁ = ν/3`, `μ₁ = ν/2`. No closed-form solution.
pub fn example_9_2<S: Scalar>(
    variant: Nonlinearity,
    nu: S,
) -> Result<ProblemSpec<S>, ProblemError> {
    if !(nu > S::zero() && nu < S::one()) {
        return Err(ProblemError::Orders(format!(
            "example 9.2 needs nu in (0,1), got {nu}"
        )));
    }
    let orders = FractionalOrders::new(nu, vec![nu / S::lit(3.0)], vec![nu / S::lit(2.0)])?;
    let (name, f) = match variant {
        Nonlinearity::Linear => ("example_9_2_linear", "0"),
        Nonlinearity::Nonlinear => ("example_9_2_nonlinear", "x*t*cos(u^2)"),
    };
    Ok(shared(name, orders, "1", "1/2", "1/2", f, Expr::num(0.0), None))
}

/// Looks up a library problem. `nu1`/`mu1` default to `ν/3` and `ν/2`;
/// Example 9.2 always uses those defaults.
pub fn by_name<S: Scalar>(
    name: &str,
    nu: S,
    nu1: Option<S>,
    mu1: Option<S>,
) -> Result<ProblemSpec<S>, ProblemError> {
    match name {
        "example_9_1" => example_9_1(
            nu,
            nu1.unwrap_or(nu / S::lit(3.0)),
            mu1.unwrap_or(nu / S::lit(2.0)),
        ),
        "example_9_2_linear" => example_9_2(Nonlinearity::Linear, nu),
        "example_9_2_nonlinear" => example_9_2(Nonlinearity::Nonlinear, nu),
        other => Err(ProblemError::UnknownProblem(other.to_string())),
    }
}
