//! Positivity thresholds for the sign kernel `𝒩(t; ν, rν)`.
//!
//! `𝒩(t; ν, rν) ≥ 0` on `(0, T*]` is equivalent to
//! `t^{(r−1)ν} ≥ Γ(1−ν)/Γ(1−rν)` there. The left side decreases in `t`, so
//! only `t = T*` binds and `ν*` is a one-dimensional root in `ν`.

use super::{digamma, kernel_n, omega, KernelError};
use crate::Scalar;

/// Absolute bisection tolerance for every threshold root.
pub const ROOT_TOLERANCE: f64 = 1e-6;

/// Ratios `μ_j / ν = 1/(j+1)` for `j = 1, 2, 3`.
pub const STANDARD_RATIOS: [f64; 3] = [1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0];

const BRACKET_EPS: f64 = 1e-6;

/// Bisects a function that is non-negative at `lo` and negative at `hi`,
/// returning the last point where it was non-negative.
fn bisect_last_nonnegative<S: Scalar>(
    mut lo: S,
    mut hi: S,
    f: impl Fn(S) -> Result<S, KernelError>,
) -> Result<S, KernelError> {
    let tol = S::lit(ROOT_TOLERANCE);
    while hi - lo > tol {
        let mid = (lo + hi) * S::lit(0.5);
        if f(mid)? >= S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest `ν ∈ (0,1)` with `𝒩(t; ν, ratio·ν) ≥ 0` for all `t ∈ (0, t_star]`.
pub fn nu_star<S: Scalar>(t_star: S, ratio: S) -> Result<S, KernelError> {
    if !(t_star > S::zero()) {
        return Err(KernelError::Domain(format!(
            "t_star must be positive, got {t_star}"
        )));
    }
    if !(ratio > S::zero() && ratio < S::one()) {
        return Err(KernelError::Domain(format!(
            "ratio must lie in (0,1), got {ratio}"
        )));
    }
    let eps = S::lit(BRACKET_EPS);
    let residual = |nu: S| kernel_n(t_star, nu, ratio * nu);
    let lo = eps;
    let hi = S::one() - eps;
    let (f_lo, f_hi) = (residual(lo)?, residual(hi)?);
    if !(f_lo >= S::zero() && f_hi < S::zero()) {
        return Err(KernelError::NoSignChange {
            t_star: t_star.to_f64().unwrap_or(f64::NAN),
            ratio: ratio.to_f64().unwrap_or(f64::NAN),
        });
    }
    bisect_last_nonnegative(lo, hi, residual)
}

/// Threshold `ν̂` below which `ω_{1−ν}(t)` increases in `ν` for every
/// `t ∈ (0, t_star]`: the root of `ψ(1−ν) = ln t_star`.
///
/// Returns 0 at `t_star = e^{−γ}` and a domain error above it.
pub fn nu_hat_gamma<S: Scalar>(t_star: S) -> Result<S, KernelError> {
    if !(t_star > S::zero()) {
        return Err(KernelError::Domain(format!(
            "t_star must be positive, got {t_star}"
        )));
    }
    let ln_t = t_star.ln();
    // ψ(1) = −γ
    let at_zero = -S::euler_gamma() - ln_t;
    let degenerate = S::lit(1e-12);
    if at_zero.abs() <= degenerate {
        return Ok(S::zero());
    }
    if at_zero < S::zero() {
        return Err(KernelError::Domain(format!(
            "t_star = {t_star} is not below e^(-gamma)"
        )));
    }
    let hi = S::one() - S::lit(1e-9);
    bisect_last_nonnegative(S::zero(), hi, |nu| Ok(digamma(S::one() - nu)? - ln_t))
}

/// One sampled point of the Figure-1 style curves.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSample<S> {
    pub t: S,
    /// `ω_{1−ν}(t)`
    pub omega: S,
    /// `𝒩(t; ν, ratio·ν)` for each ratio in the report, in order.
    pub kernels: Vec<S>,
}

/// Thresholds for one `T*`, plus optional kernel curves.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport<S> {
    pub t_star: S,
    pub nu_hat_gamma: S,
    /// `(ratio, ν*)` pairs in the order requested.
    pub nu_star_by_ratio: Vec<(S, S)>,
    pub samples: Option<Vec<KernelSample<S>>>,
}

impl<S: Scalar> PositivityReport<S> {
    /// `ν* = min_j ν*_j`.
    pub fn nu_star_min(&self) -> Option<S> {
        self.nu_star_by_ratio
            .iter()
            .map(|&(_, v)| v)
            .reduce(|a, b| a.min(b))
    }
}

/// Sampling request for the kernel curves: order `nu`, `count` points on
/// `(0, T*]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRequest<S> {
    pub nu: S,
    pub count: usize,
}

/// Computes `ν̂_γ` and `ν*` for each ratio at `t_star`.
pub fn positivity_report<S: Scalar>(
    t_star: S,
    ratios: &[S],
    sample: Option<SampleRequest<S>>,
) -> Result<PositivityReport<S>, KernelError> {
    let nu_hat = nu_hat_gamma(t_star)?;
    let nu_star_by_ratio = ratios
        .iter()
        .map(|&r| nu_star(t_star, r).map(|v| (r, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let samples = match sample {
        Some(req) => Some(sample_kernels(t_star, ratios, req)?),
        None => None,
    };
    Ok(PositivityReport {
        t_star,
        nu_hat_gamma: nu_hat,
        nu_star_by_ratio,
        samples,
    })
}

/// Samples `ω_{1−ν}` and `𝒩(·; ν, rν)` at `t_i = i·T*/count`, `i = 1..=count`.
pub fn sample_kernels<S: Scalar>(
    t_star: S,
    ratios: &[S],
    req: SampleRequest<S>,
) -> Result<Vec<KernelSample<S>>, KernelError> {
    let step = t_star / S::from_count(req.count.max(1));
    (1..=req.count)
        .map(|i| {
            let t = step * S::from_count(i);
            let kernels = ratios
                .iter()
                .map(|&r| kernel_n(t, req.nu, r * req.nu))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(KernelSample {
                t,
                omega: omega(S::one() - req.nu, t)?,
                kernels,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_star_spec_examples() {
        assert!((nu_star(0.1_f64, 0.5).unwrap() - 0.7200).abs() < 5e-4);
        assert!((nu_star(0.01_f64, 1.0 / 3.0).unwrap() - 0.9616).abs() < 5e-4);
        assert!((nu_star(0.11_f64, 0.25).unwrap() - 0.7851).abs() < 5e-4);
    }

    #[test]
    fn nu_hat_examples() {
        assert!((nu_hat_gamma(0.1_f64).unwrap() - 0.5614).abs() < 5e-4);
        assert!((nu_hat_gamma(0.01_f64).unwrap() - 0.7703).abs() < 5e-4);
        let t_gamma = (-f64::euler_gamma()).exp();
        assert_eq!(nu_hat_gamma(t_gamma).unwrap(), 0.0);
        assert!(nu_hat_gamma(0.6_f64).is_err());
    }

    #[test]
    fn nu_star_without_sign_change() {
        // beyond e^{-γ} the kernel is already negative for tiny ν
        let err = nu_star(0.9_f64, 0.5).unwrap_err();
        assert!(matches!(err, KernelError::NoSignChange { .. }));
        assert!(nu_star(0.1_f64, 1.0).is_err());
    }

    #[test]
    fn report_holds_kernel_nonnegative() {
        let ratios = STANDARD_RATIOS;
        let report = positivity_report(0.05_f64, &ratios, None).unwrap();
        for &(r, v) in &report.nu_star_by_ratio {
            assert!(v > 0.0 && v < 1.0);
            for i in 1..=1000 {
                let t = 0.05 * i as f64 / 1000.0;
                assert!(kernel_n(t, v, r * v).unwrap() >= -1e-9);
            }
        }
        assert!(report.nu_hat_gamma > 0.0 && report.nu_hat_gamma < 1.0);
        assert_eq!(report.nu_star_min(), Some(report.nu_star_by_ratio[0].1));
    }

    #[test]
    fn samples_have_requested_shape() {
        let req = SampleRequest { nu: 0.5, count: 50 };
        let report = positivity_report(0.1_f64, &STANDARD_RATIOS, Some(req)).unwrap();
        let samples = report.samples.unwrap();
        assert_eq!(samples.len(), 50);
        assert!((samples[49].t - 0.1).abs() < 1e-15);
        assert!(samples.iter().all(|s| s.kernels.len() == 3));
    }
}
