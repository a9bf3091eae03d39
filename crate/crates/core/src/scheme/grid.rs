use super::SchemeError;
use crate::Scalar;

/// Uniform mesh `x_k = k h`, `σ_j = j σ` on `[0, L] × [0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<S> {
    /// `K`, number of spatial cells.
    pub cells: usize,
    /// `J`, number of time steps.
    pub steps: usize,
    pub length: S,
    pub horizon: S,
    pub h: S,
    pub sigma: S,
}

pub fn build_grid<S: Scalar>(
    cells: usize,
    steps: usize,
    length: S,
    horizon: S,
) -> Result<Grid<S>, SchemeError> {
    if cells < 2 || steps < 1 {
        return Err(SchemeError::InvalidGrid(format!(
            "need K >= 2 and J >= 1, got K = {cells}, J = {steps}"
        )));
    }
    if !(length > S::zero() && horizon > S::zero() && length.is_finite() && horizon.is_finite()) {
        return Err(SchemeError::InvalidGrid(format!(
            "need L > 0 and T > 0, got L = {length}, T = {horizon}"
        )));
    }
    Ok(Grid {
        cells,
        steps,
        length,
        horizon,
        h: length / S::from_count(cells),
        sigma: horizon / S::from_count(steps),
    })
}

impl<S: Scalar> Grid<S> {
    pub fn x(&self, k: usize) -> S {
        self.h * S::from_count(k)
    }

    pub fn t(&self, j: usize) -> S {
        self.sigma * S::from_count(j)
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn xs(&self) -> Vec<S> {
        (0..=self.cells).map(|k| self.x(k)).collect()
    }
}

/// `u_k^j` for `j = 0..=J`, `k = 0..=K`, stored row-major by level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<S> {
    pub grid: Grid<S>,
    values: Vec<S>,
}

impl<S: Scalar> SolutionField<S> {
    /// Builds a field from its rows; fails unless there are `J+1` rows of
    /// `K+1` values.
    pub fn from_rows(grid: Grid<S>, rows: Vec<Vec<S>>) -> Result<Self, SchemeError> {
        if rows.len() != grid.steps + 1 || rows.iter().any(|r| r.len() != grid.nodes()) {
            return Err(SchemeError::GridMismatch(format!(
                "expected {} rows of {} values",
                grid.steps + 1,
                grid.nodes()
            )));
        }
        Ok(Self {
            grid,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, j: usize, k: usize) -> S {
        self.values[j * self.grid.nodes() + k]
    }

    pub fn row(&self, j: usize) -> &[S] {
        let n = self.grid.nodes();
        &self.values[j * n..(j + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.values.chunks(self.grid.nodes())
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> S {
        self.values.iter().fold(S::zero(), |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_follow_dimensions() {
        let g = build_grid(10, 10, 1.0_f64, 1.0).unwrap();
        assert!((g.h - 0.1).abs() < 1e-15 && (g.sigma - 0.1).abs() < 1e-15);
        let g = build_grid(4, 2, 2.0_f64, 1.0).unwrap();
        assert_eq!((g.h, g.sigma), (0.5, 0.5));
        assert_eq!(g.x(4), 2.0);
        assert_eq!(g.t(2), 1.0);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(build_grid(0, 10, 1.0_f64, 1.0).is_err());
        assert!(build_grid(1, 10, 1.0_f64, 1.0).is_err());
        assert!(build_grid(4, 0, 1.0_f64, 1.0).is_err());
        assert!(build_grid(4, 4, 0.0_f64, 1.0).is_err());
        assert!(build_grid(4, 4, 1.0_f64, -1.0).is_err());
    }

    #[test]
    fn field_layout() {
        let g = build_grid(2, 1, 1.0_f64, 1.0).unwrap();
        let f = SolutionField::from_rows(g, vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(f.get(1, 0), 4.0);
        assert_eq!(f.row(0), &[1.0, 2.0, 3.0]);
        assert_eq!(f.max_abs(), 6.0);
        assert!(SolutionField::from_rows(g, vec![vec![1.0; 3]]).is_err());
    }
}
