use super::{advance, build_grid, Grid, SchemeError, SolutionField};
use crate::problem::ProblemSpec;
use crate::Scalar;

/// `(2^p u_fine − u_coarse)/(2^p − 1)` on the coarse levels, where `u_fine`
/// uses `σ/2` on the same spatial mesh.
pub fn richardson<S: Scalar>(
    coarse: &SolutionField<S>,
    fine: &SolutionField<S>,
    p: u32,
) -> Result<SolutionField<S>, SchemeError> {
    let (cg, fg) = (&coarse.grid, &fine.grid);
    if p < 1 {
        return Err(SchemeError::GridMismatch("extrapolation order must be >= 1".into()));
    }
    if cg.cells != fg.cells
        || fg.steps != 2 * cg.steps
        || cg.length != fg.length
        || cg.horizon != fg.horizon
    {
        return Err(SchemeError::GridMismatch(format!(
            "fine grid (K = {}, J = {}) is not the coarse grid (K = {}, J = {}) with halved time step",
            fg.cells, fg.steps, cg.cells, cg.steps
        )));
    }
    let factor = S::lit(2f64.powi(p as i32));
    let denom = factor - S::one();
    let rows = (0..=cg.steps)
        .map(|j| {
            coarse
                .row(j)
                .iter()
                .zip(fine.row(2 * j))
                .map(|(&c, &f)| (factor * f - c) / denom)
                .collect()
        })
        .collect();
    SolutionField::from_rows(*cg, rows)
}

/// `ℷ = max_{j,k} |u(x_k, σ_j) − u_k^j|`.
pub fn max_abs_error<S: Scalar>(numeric: &SolutionField<S>, exact: &dyn Fn(S, S) -> S) -> S {
    let g = &numeric.grid;
    let mut worst = S::zero();
    for (j, row) in numeric.rows().enumerate() {
        let t = g.t(j);
        for (k, &v) in row.iter().enumerate() {
            let d = (exact(g.x(k), t) - v).abs();
            if !(d <= worst) {
                worst = d;
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Combine the run with a `σ/2` run (first order in time).
    pub richardson: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { richardson: true }
    }
}

/// [`advance`], optionally followed by temporal Richardson extrapolation.
pub fn solve<S: Scalar>(
    problem: &ProblemSpec<S>,
    grid: &Grid<S>,
    options: SolveOptions,
) -> Result<SolutionField<S>, SchemeError> {
    let coarse = advance(problem, grid)?;
    if !options.richardson {
        return Ok(coarse);
    }
    let fine_grid = build_grid(grid.cells, 2 * grid.steps, grid.length, grid.horizon)?;
    let fine = advance(problem, &fine_grid)?;
    richardson(&coarse, &fine, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(steps: usize, f: impl Fn(f64, f64) -> f64) -> SolutionField<f64> {
        let g = build_grid(4, steps, 1.0, 1.0).unwrap();
        let rows = (0..=steps)
            .map(|j| (0..=4).map(|k| f(g.x(k), g.t(j))).collect())
            .collect();
        SolutionField::from_rows(g, rows).unwrap()
    }

    #[test]
    fn equal_fields_are_unchanged() {
        let c = field(5, |x, t| x * t + 1.0);
        let f = field(10, |x, t| x * t + 1.0);
        let r = richardson(&c, &f, 1).unwrap();
        for (a, b) in r.values().iter().zip(c.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn cancels_first_order_error() {
        let exact = |x: f64, t: f64| (x * t).sin();
        let c = field(5, |x, t| exact(x, t) + 0.3 * 0.2);
        let f = field(10, |x, t| exact(x, t) + 0.3 * 0.1);
        let r = richardson(&c, &f, 1).unwrap();
        assert!(max_abs_error(&r, &exact) < 1e-15);
    }

    #[test]
    fn second_order_extrapolation() {
        let c = field(4, |x, _| x + 4.0 * 0.0625);
        let f = field(8, |x, _| x + 0.0625);
        let r = richardson(&c, &f, 2).unwrap();
        assert!(max_abs_error(&r, &|x, _| x) < 1e-15);
    }

    #[test]
    fn mismatched_grids() {
        let c = field(5, |_, _| 0.0);
        assert!(richardson(&c, &field(5, |_, _| 0.0), 1).is_err());
        assert!(richardson(&c, &field(10, |_, _| 0.0), 0).is_err());
    }

    #[test]
    fn error_norm() {
        let c = field(3, |x, t| x + t);
        assert_eq!(max_abs_error(&c, &|x, t| x + t), 0.0);
        let g = c.grid;
        let mut rows: Vec<Vec<f64>> = c.rows().map(|r| r.to_vec()).collect();
        rows[2][3] += 1e-3;
        let bumped = SolutionField::from_rows(g, rows).unwrap();
        assert!((max_abs_error(&bumped, &|x, t| x + t) - 1e-3).abs() < 1e-15);
    }
}
