use super::{
    caputo_history_sum, eliminate_ghosts, thomas_solve, BoundaryRow, ConvolutionWeights, Grid,
    HistoryBuffer, SchemeError, SolutionField, TridiagonalSystem,
};
use crate::kernels::{gl_weights, GlWeights};
use crate::problem::{BoundaryCondition, Expr, ProblemSpec};
use crate::Scalar;

struct Term<'p, S> {
    sign: S,
    coeff: &'p Expr,
    gl: GlWeights<S>,
    history: HistoryBuffer<S>,
}

/// Level-by-level driver of the scheme. Holds the solution rows computed so
/// far, the per-term product histories and the memory-term history
/// `b^m Δ_h u^m`.
pub struct Stepper<'p, S> {
    problem: &'p ProblemSpec<S>,
    grid: Grid<S>,
    xs: Vec<S>,
    terms: Vec<Term<'p, S>>,
    conv: Option<ConvolutionWeights<S>>,
    memory: Vec<Vec<S>>,
    rows: Vec<Vec<S>>,
}

fn boundary_row<S: Scalar>(bc: &BoundaryCondition<S>, t: S) -> BoundaryRow<S> {
    BoundaryRow {
        c_deriv: bc.c_deriv,
        c_value: bc.c_value,
        phi: bc.data.at(S::zero(), t),
    }
}

fn first_non_finite<S: Scalar>(v: &[S]) -> Option<usize> {
    v.iter().position(|x| !x.is_finite())
}

impl<'p, S: Scalar> Stepper<'p, S> {
    pub fn new(problem: &'p ProblemSpec<S>, grid: Grid<S>) -> Result<Self, SchemeError> {
        problem.check()?;
        let close = |a: S, b: S| (a - b).abs() <= S::lit(1e-12) * a.abs().max(b.abs());
        if !close(grid.length, problem.length) || !close(grid.horizon, problem.horizon) {
            return Err(SchemeError::GridMismatch(format!(
                "grid spans [0,{}]x[0,{}] but the problem is posed on [0,{}]x[0,{}]",
                grid.length, grid.horizon, problem.length, problem.horizon
            )));
        }
        let xs = grid.xs();
        let u0: Vec<S> = xs.iter().map(|&x| problem.initial.at(x, S::zero())).collect();
        if let Some(k) = first_non_finite(&u0) {
            return Err(SchemeError::NonFinite {
                what: "initial value",
                row: k,
            });
        }
        let mut terms = Vec::new();
        for term in problem.fractional_terms() {
            let product = xs
                .iter()
                .zip(&u0)
                .map(|(&x, &u)| term.coeff.at(x, S::zero()) * u)
                .collect();
            terms.push(Term {
                sign: term.sign,
                coeff: term.coeff,
                gl: gl_weights(term.order, grid.steps)?,
                history: HistoryBuffer::new(product),
            });
        }
        let conv = if problem.kernel.is_none() {
            None
        } else {
            Some(ConvolutionWeights::new(&problem.kernel, &grid)?)
        };
        let mut stepper = Self {
            problem,
            grid,
            xs,
            terms,
            conv,
            memory: Vec::new(),
            rows: Vec::new(),
        };
        if stepper.conv.is_some() {
            let b0 = stepper.memory_level(&u0, S::zero());
            stepper.memory.push(b0);
        }
        stepper.rows.push(u0);
        Ok(stepper)
    }

    pub fn grid(&self) -> &Grid<S> {
        &self.grid
    }

    /// Index of the last completed level.
    pub fn level(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn is_done(&self) -> bool {
        self.level() == self.grid.steps
    }

    pub fn row(&self, j: usize) -> &[S] {
        &self.rows[j]
    }

    /// `b(x_k, t) Δ_h u_k` with ghost values from the boundary data at `t`.
    fn memory_level(&self, u: &[S], t: S) -> Vec<S> {
        let h = self.grid.h;
        let h2 = h * h;
        let last = u.len() - 1;
        let left = boundary_row(&self.problem.left, t);
        let right = boundary_row(&self.problem.right, t);
        (0..=last)
            .map(|k| {
                let below = if k == 0 {
                    left.ghost(u[0], u[1], h, -S::one())
                } else {
                    Some(u[k - 1])
                };
                let above = if k == last {
                    right.ghost(u[last], u[last - 1], h, S::one())
                } else {
                    Some(u[k + 1])
                };
                match (below, above) {
                    (Some(a), Some(c)) => {
                        self.problem.memory_coeff.at(self.xs[k], t) * (a - u[k] - u[k] + c) / h2
                    }
                    // Dirichlet ends: the row is replaced, the value is unused
                    _ => S::zero(),
                }
            })
            .collect()
    }

    /// Assembles the system for level `j+1` from completed levels `0..=j`.
    /// `lower[0]` and `upper[K]` still carry the ghost coefficients.
    pub fn assemble_step(&self) -> Result<TridiagonalSystem<S>, SchemeError> {
        let j = self.level();
        if j >= self.grid.steps {
            return Err(SchemeError::InvalidGrid(format!(
                "all {} steps already taken",
                self.grid.steps
            )));
        }
        let (h, sigma) = (self.grid.h, self.grid.sigma);
        let h2 = h * h;
        let two_h = h + h;
        let half = S::lit(0.5);
        let t_now = self.grid.t(j);
        let t_next = self.grid.t(j + 1);
        let n = self.xs.len();
        let p = self.problem;
        let mut sys = TridiagonalSystem::zeros(n);

        for term in &self.terms {
            let coeff_next: Vec<S> = self.xs.iter().map(|&x| term.coeff.at(x, t_next)).collect();
            let sum = caputo_history_sum(&term.history, &coeff_next, &term.gl, sigma, j)?;
            for k in 0..n {
                sys.diag[k] += term.sign * sum.implicit[k];
                sys.rhs[k] -= term.sign * sum.lag[k];
            }
        }

        // trapezoid weights of B^l for l = 0..=j; the B^{j+1} half is implicit
        let (tail, explicit_weights) = match &self.conv {
            Some(cw) => {
                let w: Vec<S> = (0..=j)
                    .map(|l| {
                        let mut v = cw.get(l, j);
                        if l >= 1 {
                            v += cw.get(l - 1, j);
                        }
                        v * half
                    })
                    .collect();
                (cw.get(j, j) * half, w)
            }
            None => (S::zero(), Vec::new()),
        };

        let prev = &self.rows[j];
        for k in 0..n {
            let x = self.xs[k];
            let mut a = p.diffusion.at(x, t_next);
            if self.conv.is_some() {
                a += tail * p.memory_coeff.at(x, t_next);
            }
            let d = p.advection.at(x, t_next);
            sys.lower[k] = -a / h2 - d / two_h;
            sys.upper[k] = -a / h2 + d / two_h;
            sys.diag[k] += (a + a) / h2;
            let mut rhs = p.nonlinearity.eval(x, t_now, prev[k]) + p.source.at(x, t_next);
            for (w, level) in explicit_weights.iter().zip(&self.memory) {
                rhs += *w * level[k];
            }
            sys.rhs[k] += rhs;
        }

        for (what, v) in [
            ("lower coefficient", &sys.lower),
            ("diagonal coefficient", &sys.diag),
            ("upper coefficient", &sys.upper),
            ("right-hand side", &sys.rhs),
        ] {
            if let Some(row) = first_non_finite(v) {
                return Err(SchemeError::NonFinite { what, row });
            }
        }
        Ok(sys)
    }

    /// Assembles, eliminates ghosts, solves and records level `j+1`.
    pub fn step(&mut self) -> Result<(), SchemeError> {
        let level = self.level() + 1;
        self.try_step().map_err(|e| e.at_level(level))
    }

    fn try_step(&mut self) -> Result<(), SchemeError> {
        let mut sys = self.assemble_step()?;
        let t_next = self.grid.t(self.level() + 1);
        let left = boundary_row(&self.problem.left, t_next);
        let right = boundary_row(&self.problem.right, t_next);
        if let Some(row) = first_non_finite(&[left.phi, right.phi]) {
            return Err(SchemeError::NonFinite {
                what: "boundary datum",
                row: row * self.grid.cells,
            });
        }
        eliminate_ghosts(&mut sys, &left, &right, self.grid.h)?;
        if let Some(row) = sys.diag.iter().position(|d| d.is_zero()) {
            return Err(SchemeError::SingularDiagonal { row });
        }
        let u = thomas_solve(&sys)?;
        if let Some(row) = first_non_finite(&u) {
            return Err(SchemeError::NonFinite {
                what: "solution value",
                row,
            });
        }
        for term in &mut self.terms {
            let product = self
                .xs
                .iter()
                .zip(&u)
                .map(|(&x, &v)| term.coeff.at(x, t_next) * v)
                .collect();
            term.history.push(product);
        }
        if self.conv.is_some() {
            let b = self.memory_level(&u, t_next);
            self.memory.push(b);
        }
        self.rows.push(u);
        Ok(())
    }

    /// Runs the remaining steps and returns the full field.
    pub fn run(mut self) -> Result<SolutionField<S>, SchemeError> {
        while !self.is_done() {
            self.step()?;
        }
        SolutionField::from_rows(self.grid, self.rows)
    }
}

/// Solves `problem` on `grid` through all `J` levels.
pub fn advance<S: Scalar>(
    problem: &ProblemSpec<S>,
    grid: &Grid<S>,
) -> Result<SolutionField<S>, SchemeError> {
    Stepper::new(problem, *grid)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example_9_1, FractionalOrders, MemoryKernel};
    use crate::scheme::build_grid;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn heat(nu: f64, a: &str, initial: &str) -> ProblemSpec<f64> {
        ProblemSpec {
            name: "heat".into(),
            orders: FractionalOrders::single(nu).unwrap(),
            diffusion: e(a),
            advection: e("0"),
            memory_coeff: e("0"),
            rho0: e("1"),
            rho: vec![],
            gamma: vec![],
            kernel: MemoryKernel::None,
            nonlinearity: e("0"),
            source: e("0"),
            initial: e(initial),
            left: BoundaryCondition::neumann(e("0")),
            right: BoundaryCondition::neumann(e("0")),
            exact: None,
            length: 1.0,
            horizon: 1.0,
        }
    }

    #[test]
    fn backward_euler_reduction() {
        let (a, sigma, h) = (0.7, 0.05, 0.125);
        let p = heat(1.0, "0.7", "cos(pi*x)");
        let g = build_grid(8, 20, 1.0, 1.0).unwrap();
        let mut st = Stepper::new(&p, g).unwrap();
        st.step().unwrap();
        st.step().unwrap();
        let sys = st.assemble_step().unwrap();
        let prev = st.row(2);
        for k in 0..=8 {
            assert!((sys.diag[k] - (1.0 / sigma + 2.0 * a / (h * h))).abs() <= 1e-14 * sys.diag[k]);
            assert!((sys.lower[k] + a / (h * h)).abs() <= 1e-14 * sys.diag[k]);
            assert!((sys.upper[k] + a / (h * h)).abs() <= 1e-14 * sys.diag[k]);
            assert!((sys.rhs[k] - prev[k] / sigma).abs() <= 1e-14 * (1.0 + sys.rhs[k].abs()));
        }
    }

    #[test]
    fn constant_data_is_preserved() {
        let mut p = heat(0.6, "0", "cos(pi*x)");
        p.rho = vec![e("2")];
        p.orders = FractionalOrders::new(0.6, vec![0.2], vec![]).unwrap();
        let g = build_grid(10, 15, 1.0, 1.0).unwrap();
        let u = advance(&p, &g).unwrap();
        for j in 0..=15 {
            for k in 0..=10 {
                assert!((u.get(j, k) - u.get(0, k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let mut p = example_9_1(0.5, 1.0 / 6.0, 0.25).unwrap();
        p.initial = e("0");
        p.source = e("0");
        let g = build_grid(12, 12, 1.0, 1.0).unwrap();
        let u = advance(&p, &g).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn identical_runs_are_bitwise_equal() {
        let p = example_9_1(0.3_f64, 0.1, 0.15).unwrap();
        let g = build_grid(16, 16, 1.0, 1.0).unwrap();
        let a = advance(&p, &g).unwrap();
        let b = advance(&p, &g).unwrap();
        assert!(a
            .values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn single_precision_run() {
        let p = example_9_1(0.5_f32, 1.0 / 6.0, 0.25).unwrap();
        let g = build_grid(10, 10, 1.0_f32, 1.0).unwrap();
        let u = advance(&p, &g).unwrap();
        let exact = p.exact.as_ref().unwrap();
        let err = crate::scheme::max_abs_error(&u, &|x, t| exact.at(x, t));
        assert!(u.is_finite() && err < 0.2, "f32 error {err}");
    }

    #[test]
    fn failures_carry_the_level() {
        let p = heat(0.5, "1/(0.5 - t)", "cos(pi*x)");
        let g = build_grid(4, 4, 1.0, 1.0).unwrap();
        match advance(&p, &g) {
            Err(SchemeError::AtLevel { level: 2, source }) => {
                assert!(matches!(*source, SchemeError::NonFinite { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_must_match_problem() {
        let p = heat(0.5, "1", "0");
        let g = build_grid(4, 4, 2.0, 1.0).unwrap();
        assert!(matches!(Stepper::new(&p, g), Err(SchemeError::GridMismatch(_))));
    }
}
