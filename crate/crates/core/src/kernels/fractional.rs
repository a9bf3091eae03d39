//! Fractional-calculus primitives: the Riemann-Liouville kernel `ω_θ`, the
//! sign kernel `𝒩`, Grünwald-Letnikov weights, the Mittag-Leffler series and
//! the explicit time thresholds `T₁`, `T₂`.

use super::{
    special::{gamma_unchecked, ln_gamma},
    KernelError,
};
use crate::Scalar;

/// `ω_θ(t) = t^{θ−1} / Γ(θ)`.
pub fn omega<S: Scalar>(theta: S, t: S) -> Result<S, KernelError> {
    if !(theta > S::zero()) {
        return Err(KernelError::Domain(format!(
            "omega requires theta > 0, got {theta}"
        )));
    }
    if t < S::zero() || (t == S::zero() && theta < S::one()) || t.is_nan() {
        return Err(KernelError::Domain(format!(
            "omega_{theta} is singular or undefined at t = {t}"
        )));
    }
    Ok(t.powf(theta - S::one()) / gamma_unchecked(theta))
}

/// `𝒩(t; θ₁, θ₂) = ω_{1−θ₁}(t) − ω_{1−θ₂}(t)` for `0 < θ₂ ≤ θ₁ < 1`.
pub fn kernel_n<S: Scalar>(t: S, theta1: S, theta2: S) -> Result<S, KernelError> {
    if !(theta2 > S::zero() && theta2 <= theta1 && theta1 < S::one()) {
        return Err(KernelError::OrderViolation(format!(
            "kernel N needs 0 < theta2 <= theta1 < 1, got theta1 = {theta1}, theta2 = {theta2}"
        )));
    }
    Ok(omega(S::one() - theta1, t)? - omega(S::one() - theta2, t)?)
}

/// Grünwald-Letnikov weights `ρ_m = (−1)^m binom(θ, m)` for `m = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlWeights<S> {
    order: S,
    weights: Vec<S>,
}

impl<S: Scalar> GlWeights<S> {
    pub fn order(&self) -> S {
        self.order
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Number of weights held, `n + 1`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Running sums `Σ_{m=0}^{n} ρ_m` for every `n`.
    pub fn partial_sums(&self) -> Vec<S> {
        self.weights
            .iter()
            .scan(S::zero(), |acc, &w| {
                *acc += w;
                Some(*acc)
            })
            .collect()
    }
}

impl<S> std::ops::Index<usize> for GlWeights<S> {
    type Output = S;

    fn index(&self, m: usize) -> &S {
        &self.weights[m]
    }
}

/// Builds `ρ_0..ρ_n` with `ρ_0 = 1`, `ρ_m = ρ_{m−1} (1 − (1+θ)/m)`.
pub fn gl_weights<S: Scalar>(theta: S, n: usize) -> Result<GlWeights<S>, KernelError> {
    if !(theta > S::zero() && theta <= S::one()) {
        return Err(KernelError::Domain(format!(
            "GL weights need an order in (0,1], got {theta}"
        )));
    }
    let mut weights = Vec::with_capacity(n + 1);
    weights.push(S::one());
    let shifted = S::one() + theta;
    for m in 1..=n {
        let prev = weights[m - 1];
        weights.push(prev * (S::one() - shifted / S::from_count(m)));
    }
    Ok(GlWeights {
        order: theta,
        weights,
    })
}

fn check_threshold_orders<S: Scalar>(
    theta1: S,
    theta2: S,
    theta: S,
    horizon: S,
) -> Result<(), KernelError> {
    if !(S::zero() < theta2 && theta2 < theta1 && theta1 <= theta && theta <= S::one()) {
        return Err(KernelError::OrderViolation(format!(
            "thresholds need 0 < theta2 < theta1 <= theta <= 1, got ({theta2}, {theta1}, {theta})"
        )));
    }
    if !(horizon > S::zero()) {
        return Err(KernelError::Domain(format!(
            "time horizon must be positive, got {horizon}"
        )));
    }
    Ok(())
}

/// `T₁ = min{T, (θ₁ Γ(1+θ₁−θ₂) / θ₂)^{1/(θ₁−θ₂)}}`.
pub fn threshold_t1<S: Scalar>(theta1: S, theta2: S, horizon: S) -> Result<S, KernelError> {
    check_threshold_orders(theta1, theta2, theta1, horizon)?;
    let gap = theta1 - theta2;
    let base = theta1 * gamma_unchecked(S::one() + gap) / theta2;
    Ok(horizon.min(base.powf(gap.recip())))
}

/// `T₂ = min{T, (θ₁ Γ(1+θ−θ₂) / (θ₂ Γ(1+θ−θ₁)))^{1/(θ₁−θ₂)}}`.
pub fn threshold_t2<S: Scalar>(
    theta1: S,
    theta2: S,
    theta: S,
    horizon: S,
) -> Result<S, KernelError> {
    check_threshold_orders(theta1, theta2, theta, horizon)?;
    let gap = theta1 - theta2;
    let base = theta1 * gamma_unchecked(S::one() + theta - theta2)
        / (theta2 * gamma_unchecked(S::one() + theta - theta1));
    Ok(horizon.min(base.powf(gap.recip())))
}

const ML_MAX_TERMS: usize = 100_000;

/// Mittag-Leffler function `E_θ(z) = Σ_{m≥0} z^m / Γ(1+mθ)` by direct
/// summation. Intended for moderate real arguments (`|z| ≤ 50`).
pub fn mittag_leffler<S: Scalar>(theta: S, z: S) -> Result<S, KernelError> {
    if !(theta > S::zero() && theta <= S::one()) {
        return Err(KernelError::Domain(format!(
            "Mittag-Leffler order must lie in (0,1], got {theta}"
        )));
    }
    if !z.is_finite() {
        return Err(KernelError::Domain(format!(
            "Mittag-Leffler argument must be finite, got {z}"
        )));
    }
    if z == S::zero() {
        return Ok(S::one());
    }
    let ln_z = z.abs().ln();
    let negative = z < S::zero();
    let cutoff = S::lit(1e-16);
    let mut sum = S::one();
    let mut prev_mag = S::one();
    for m in 1..ML_MAX_TERMS {
        let mf = S::from_count(m);
        let mag = (mf * ln_z - ln_gamma(S::one() + mf * theta)?).exp();
        let term = if negative && m % 2 == 1 { -mag } else { mag };
        sum += term;
        // terms grow before they decay when |z| > 1
        if mag < prev_mag && mag < cutoff * (S::one() + sum.abs()) {
            return Ok(sum);
        }
        prev_mag = mag;
    }
    Err(KernelError::NonConvergence {
        terms: ML_MAX_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn omega_basics() {
        for t in [0.1_f64, 1.0, 7.5] {
            assert_relative_eq!(omega(1.0, t).unwrap(), 1.0, max_relative = 1e-14);
        }
        assert_relative_eq!(omega(2.0_f64, 3.0).unwrap(), 3.0, max_relative = 1e-14);
        // 1/(2√π)
        assert_relative_eq!(
            omega(0.5_f64, 4.0).unwrap(),
            0.282_094_791_773_878_1,
            max_relative = 1e-13
        );
        assert!(omega(0.5_f64, 0.0).is_err());
        assert!(omega(0.5_f64, -1.0).is_err());
        assert_eq!(omega(1.0_f64, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn kernel_n_examples() {
        for t in [0.01_f64, 0.5, 2.0] {
            assert_eq!(kernel_n(t, 0.4, 0.4).unwrap(), 0.0);
        }
        assert!(kernel_n(0.1_f64, 0.72, 0.36).unwrap().abs() < 2e-3);
        // ω_{0.5}(0.01) − ω_{0.75}(0.01) = 10/√π − 0.01^{-1/4}/Γ(3/4)
        let v = kernel_n(0.01_f64, 0.5, 0.25).unwrap();
        assert!(v > 0.0);
        assert_relative_eq!(v, 3.061_322_505_763_019_5, max_relative = 1e-12);
        assert!(kernel_n(0.1_f64, 0.3, 0.5).is_err());
        assert!(kernel_n(0.1_f64, 1.0, 0.5).is_err());
    }

    #[test]
    fn gl_weight_examples() {
        assert_eq!(gl_weights(0.3_f64, 0).unwrap().weights(), &[1.0]);
        assert_eq!(gl_weights(1.0_f64, 3).unwrap().weights(), &[1.0, -1.0, 0.0, 0.0]);
        assert_eq!(gl_weights(0.5_f64, 2).unwrap()[2], -0.125);
        assert!(gl_weights(0.0_f64, 3).is_err());
        assert!(gl_weights(1.5_f64, 3).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold_t1(0.5_f64, 0.25, 1.0).unwrap(), 1.0);
        let t1 = threshold_t1(0.5_f64, 0.25, 100.0).unwrap();
        assert!((t1 - 10.80).abs() < 0.01, "{t1}");
        // (2 Γ(1.25))^4, Γ(1.25) = 0.9064024770554771
        assert_relative_eq!(t1, (2.0_f64 * 0.906_402_477_055_477_1).powi(4), max_relative = 1e-13);
        let t2 = threshold_t2(0.5_f64, 0.25, 0.5, 100.0).unwrap();
        assert_eq!(t1, t2);
        assert!(threshold_t1(0.25_f64, 0.5, 1.0).is_err());
        assert!(threshold_t2(0.5_f64, 0.25, 0.4, 1.0).is_err());
        assert!(threshold_t1(0.5_f64, 0.25, 0.0).is_err());
    }

    #[test]
    fn mittag_leffler_examples() {
        for theta in [0.1_f64, 0.5, 1.0] {
            assert_eq!(mittag_leffler(theta, 0.0).unwrap(), 1.0);
        }
        assert_relative_eq!(
            mittag_leffler(1.0_f64, 1.0).unwrap(),
            std::f64::consts::E,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            mittag_leffler(1.0_f64, -2.0).unwrap(),
            (-2.0_f64).exp(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            mittag_leffler(1.0_f64, 20.0).unwrap(),
            20.0_f64.exp(),
            max_relative = 1e-12
        );
        assert!(mittag_leffler(0.0_f64, 1.0).is_err());
    }
}
