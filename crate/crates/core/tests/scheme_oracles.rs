use fracsolve_core::problem::{example_9_1, BoundaryCondition, Expr, FractionalOrders, MemoryKernel, ProblemSpec};
use fracsolve_core::scheme::{advance, build_grid, max_abs_error, solve, SolveOptions};

fn heat_dirichlet() -> ProblemSpec<f64> {
    let e = |s: &str| Expr::parse(s).unwrap();
    ProblemSpec {
        name: "heat".into(),
        orders: FractionalOrders::single(1.0).unwrap(),
        diffusion: e("1"),
        advection: e("0"),
        memory_coeff: e("0"),
        rho0: e("1"),
        rho: vec![],
        gamma: vec![],
        kernel: MemoryKernel::None,
        nonlinearity: e("0"),
        source: e("0"),
        initial: e("sin(pi*x)"),
        left: BoundaryCondition::dirichlet(e("0")),
        right: BoundaryCondition::dirichlet(e("0")),
        exact: Some(e("exp(-pi^2*t)*sin(pi*x)")),
        length: 1.0,
        horizon: 0.2,
    }
}

#[test]
fn heat_equation_converges_first_order_in_time() {
    let p = heat_dirichlet();
    let exact = p.exact.clone().unwrap();
    let err = |k, j| {
        let g = build_grid(k, j, 1.0, 0.2).unwrap();
        max_abs_error(&advance(&p, &g).unwrap(), &|x, t| exact.at(x, t))
    };
    let (e1, e2, e3) = (err(64, 20), err(64, 40), err(64, 80));
    assert!(e1 < 2e-2, "{e1}");
    let (r1, r2) = (e1 / e2, e2 / e3);
    assert!((1.7..2.3).contains(&r1) && (1.7..2.3).contains(&r2), "{r1} {r2}");
}

#[test]
fn heat_equation_converges_second_order_in_space() {
    let p = heat_dirichlet();
    let exact = p.exact.clone().unwrap();
    let err = |k| {
        let g = build_grid(k, 2000, 1.0, 0.2).unwrap();
        let u = solve(&p, &g, SolveOptions { richardson: true }).unwrap();
        max_abs_error(&u, &|x, t| exact.at(x, t))
    };
    let ratio = err(8) / err(16);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

/// Values produced by an independent array-language prototype of the same
/// scheme (dense solves, hand-written sums).
#[test]
fn example_9_1_matches_prototype() {
    let cases = [
        (0.1, 10, 7.822806924107964e-02, 2.444335165534415e-02),
        (0.5, 10, 7.057929686799758e-02, 2.199584431963460e-02),
        (0.5, 20, 4.404930380665650e-02, 5.607162420728382e-03),
        (0.9, 30, 1.056216527814868e-02, 2.197264748503368e-03),
    ];
    for (nu, n, plain, extrapolated) in cases {
        let p = example_9_1(nu, nu / 3.0, nu / 2.0).unwrap();
        let exact = p.exact.clone().unwrap();
        let g = build_grid(n, n, 1.0, 1.0).unwrap();
        let ex = |x: f64, t: f64| exact.at(x, t);
        let a = max_abs_error(&solve(&p, &g, SolveOptions { richardson: false }).unwrap(), &ex);
        let b = max_abs_error(&solve(&p, &g, SolveOptions { richardson: true }).unwrap(), &ex);
        println!("nu={nu} n={n}: {a:.4e} {b:.4e}");
        assert!(((a - plain) / plain).abs() < 1e-9, "nu={nu}, n={n}: {a}");
        assert!(((b - extrapolated) / extrapolated).abs() < 1e-9, "nu={nu}, n={n}: {b}");
    }
}

/// With ν = 1 and Dirichlet data the scheme is backward Euler on the
/// 3-point Laplacian, whose solution from sin(πx) is known in closed form:
/// `u_k^n = (1 + σλ)^{−n} sin(π x_k)`, `λ = (4/h²) sin²(πh/2)`.
#[test]
fn heat_equation_matches_discrete_closed_form() {
    let mut p = heat_dirichlet();
    p.horizon = 1.0;
    let g = build_grid(64, 256, 1.0, 1.0).unwrap();
    let u = advance(&p, &g).unwrap();
    let lambda = 4.0 / (g.h * g.h) * (std::f64::consts::PI * g.h / 2.0).sin().powi(2);
    let discrete = |x: f64, t: f64| {
        let n = (t / g.sigma).round() as i32;
        (1.0 + g.sigma * lambda).powi(-n) * (std::f64::consts::PI * x).sin()
    };
    assert!(max_abs_error(&u, &discrete) < 1e-13);
}
