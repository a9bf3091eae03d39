use super::SchemeError;
use crate::kernels::GlWeights;
use crate::Scalar;

/// Stored products `c(x_k, σ_m) u_k^m` of one fractional term, one row per
/// completed level.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryBuffer<S> {
    levels: Vec<Vec<S>>,
}

impl<S: Scalar> HistoryBuffer<S> {
    /// Starts from the level-0 product `c(·, 0) u₀`.
    pub fn new(initial_product: Vec<S>) -> Self {
        Self {
            levels: vec![initial_product],
        }
    }

    pub fn push(&mut self, product: Vec<S>) {
        self.levels.push(product);
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, m: usize) -> &[S] {
        &self.levels[m]
    }
}

/// Per-node split of the GL approximation of `D^θ(c u)` at `σ_{j+1}`:
/// `implicit[k] · u_k^{j+1} + lag[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HistorySum<S> {
    pub implicit: Vec<S>,
    pub lag: Vec<S>,
}

/// `implicit = σ^{−θ} ρ₀ c^{j+1}`,
/// `lag = σ^{−θ} [Σ_{m=1}^{j+1} ρ_m P^{j+1−m} − P⁰ Σ_{m=0}^{j+1} ρ_m]`.
pub fn caputo_history_sum<S: Scalar>(
    history: &HistoryBuffer<S>,
    coeff_next: &[S],
    gl: &GlWeights<S>,
    sigma: S,
    j: usize,
) -> Result<HistorySum<S>, SchemeError> {
    if history.len() != j + 1 {
        return Err(SchemeError::HistoryLength {
            expected: j + 1,
            found: history.len(),
        });
    }
    if gl.len() < j + 2 {
        return Err(SchemeError::HistoryLength {
            expected: j + 2,
            found: gl.len(),
        });
    }
    let scale = sigma.powf(-gl.order());
    let rho = gl.weights();
    let total: S = rho[..j + 2].iter().fold(S::zero(), |a, &r| a + r);
    let base = history.level(0);
    let mut lag: Vec<S> = base.iter().map(|&p| -p * total).collect();
    for m in 1..=j + 1 {
        let w = rho[m];
        for (acc, &p) in lag.iter_mut().zip(history.level(j + 1 - m)) {
            *acc += w * p;
        }
    }
    lag.iter_mut().for_each(|v| *v *= scale);
    let implicit = coeff_next.iter().map(|&c| scale * rho[0] * c).collect();
    Ok(HistorySum { implicit, lag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{caputo_oracle, gl_weights};

    #[test]
    fn constant_history_has_zero_derivative() {
        let gl = gl_weights(0.4_f64, 12).unwrap();
        let mut h = HistoryBuffer::new(vec![2.5, -1.0]);
        for j in 0..10 {
            let s = caputo_history_sum(&h, &[1.0, 1.0], &gl, 0.1, j).unwrap();
            assert!((s.lag[0] + s.implicit[0] * 2.5).abs() < 1e-12);
            assert!((s.lag[1] - s.implicit[1]).abs() < 1e-12);
            h.push(vec![2.5, -1.0]);
        }
    }

    #[test]
    fn first_step_algebra() {
        let (theta, sigma, p0) = (0.3_f64, 0.05, 1.7);
        let gl = gl_weights(theta, 1).unwrap();
        let h = HistoryBuffer::new(vec![p0]);
        let s = caputo_history_sum(&h, &[1.0], &gl, sigma, 0).unwrap();
        let want = -sigma.powf(-theta) * p0 * gl[0];
        assert!((s.lag[0] - want).abs() < 1e-12);
    }

    #[test]
    fn linear_history_matches_oracle() {
        let (theta, sigma) = (0.6_f64, 1e-3);
        let n = 1000;
        let gl = gl_weights(theta, n).unwrap();
        let mut h = HistoryBuffer::new(vec![0.0]);
        for m in 1..n {
            h.push(vec![m as f64 * sigma]);
        }
        let s = caputo_history_sum(&h, &[1.0], &gl, sigma, n - 1).unwrap();
        let total = s.implicit[0] * 1.0 + s.lag[0];
        let want = caputo_oracle(&|t: f64| t, theta, 1.0, 1e-10).unwrap();
        assert!(((total - want) / want).abs() < 0.02, "{total} vs {want}");
    }

    #[test]
    fn length_mismatch() {
        let gl = gl_weights(0.5_f64, 5).unwrap();
        let h = HistoryBuffer::new(vec![0.0]);
        assert!(matches!(
            caputo_history_sum(&h, &[1.0], &gl, 0.1, 2),
            Err(SchemeError::HistoryLength { .. })
        ));
        assert!(caputo_history_sum(&h, &[1.0], &gl_weights(0.5, 0).unwrap(), 0.1, 0).is_err());
    }
}
