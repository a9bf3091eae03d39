//! Sampled checks of the structural hypotheses. Violations are reported as
//! warnings and never stop a solve.

use std::fmt;

use super::{MemoryKernel, ProblemSpec};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Ordering of the fractional orders.
    H1,
    /// Positivity of `𝔞`, `ϱ₀`, `ϱ_i`, `γ_j`.
    H2,
    /// Monotonicity in time of `ϱ_i`, `γ_j`.
    H3,
    /// Kernel exponent `β ∈ (0, 1−ν]`.
    H4,
    /// Growth bounds on `f`; documented only.
    H6,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::H1 => "h1",
            Hypothesis::H2 => "h2",
            Hypothesis::H3 => "h3",
            Hypothesis::H4 => "h4",
            Hypothesis::H6 => "h6",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationEntry {
    pub id: Hypothesis,
    pub status: Status,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn overall(&self) -> Status {
        if self.entries.iter().any(|e| e.status == Status::Warn) {
            Status::Warn
        } else {
            Status::Pass
        }
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ValidationEntry> {
        self.entries.iter().filter(|e| e.status == Status::Warn)
    }

    pub fn status_of(&self, id: Hypothesis) -> Status {
        if self
            .entries
            .iter()
            .any(|e| e.id == id && e.status == Status::Warn)
        {
            Status::Warn
        } else {
            Status::Pass
        }
    }

    fn push(&mut self, id: Hypothesis, ok: bool, message: String) {
        self.entries.push(ValidationEntry {
            id,
            status: if ok { Status::Pass } else { Status::Warn },
            message,
        });
    }
}

impl fmt::Display for ValidationEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "pass",
            Status::Warn => "warn",
        };
        write!(f, "[{}] {}: {}", self.id, tag, self.message)
    }
}

/// Samples the coefficient fields on an `(n+1) × (n+1)` grid of
/// `[0, L] × [0, T]` and reports each hypothesis.
pub fn validate_hypotheses<S: Scalar>(problem: &ProblemSpec<S>, samples: usize) -> ValidationReport {
    let mut report = ValidationReport {
        entries: Vec::new(),
    };
    let n = samples.max(1);
    let xs: Vec<S> = (0..=n)
        .map(|i| problem.length * S::from_count(i) / S::from_count(n))
        .collect();
    let ts: Vec<S> = (0..=n)
        .map(|i| problem.horizon * S::from_count(i) / S::from_count(n))
        .collect();

    // h1
    let orders = &problem.orders;
    match orders.check_ordering() {
        Ok(()) => report.push(
            Hypothesis::H1,
            true,
            format!(
                "orders ordered below nu = {}: nu_i = {:?}, mu_j = {:?}",
                orders.nu, orders.nu_list, orders.mu_list
            ),
        ),
        Err(e) => report.push(Hypothesis::H1, false, e.to_string()),
    }
    let largest = orders
        .nu_list
        .iter()
        .chain(&orders.mu_list)
        .copied()
        .fold(S::zero(), S::max);
    let alpha_bound = orders.nu / S::lit(2.0);
    report.push(
        Hypothesis::H1,
        true,
        format!(
            "informational: largest lower order {largest} vs nu(2-alpha)/2 = {alpha_bound} at the \
             strictest reference alpha = 1 ({}); the Hölder exponent alpha is not fixed, so this is \
             not enforced",
            if largest < alpha_bound { "below" } else { "not below" }
        ),
    );

    // h2
    let sample_min = |field: &super::Expr| {
        xs.iter()
            .flat_map(|&x| ts.iter().map(move |&t| field.at(x, t)))
            .fold(S::infinity(), |m, v| if v.is_nan() { S::nan() } else { m.min(v) })
    };
    let mut positive = vec![("a", sample_min(&problem.diffusion)), ("rho0", sample_min(&problem.rho0))];
    positive.extend(problem.rho.iter().map(|e| ("rho_i", sample_min(e))));
    positive.extend(problem.gamma.iter().map(|e| ("gamma_j", sample_min(e))));
    for (name, min) in positive {
        report.push(
            Hypothesis::H2,
            min > S::zero(),
            format!("sampled min of {name} = {min} (delta must be > 0)"),
        );
    }

    // h3
    let slack = S::lit(-1e-12);
    let min_increment = |field: &super::Expr| {
        xs.iter()
            .flat_map(|&x| ts.windows(2).map(move |w| field.at(x, w[1]) - field.at(x, w[0])))
            .fold(S::infinity(), S::min)
    };
    let mut monotone = vec![("rho0", min_increment(&problem.rho0))];
    monotone.extend(problem.rho.iter().map(|e| ("rho_i", min_increment(e))));
    monotone.extend(problem.gamma.iter().map(|e| ("gamma_j", min_increment(e))));
    for (name, inc) in monotone {
        report.push(
            Hypothesis::H3,
            inc >= slack,
            format!("smallest sampled time increment of {name} = {inc} (must be >= 0)"),
        );
    }

    // h4
    match &problem.kernel {
        MemoryKernel::None => report.push(Hypothesis::H4, true, "no memory term".into()),
        MemoryKernel::Power { beta } => {
            let upper = S::one() - orders.nu;
            report.push(
                Hypothesis::H4,
                *beta > S::zero() && *beta <= upper,
                format!("kernel exponent beta = {beta}, required in (0, 1 - nu] = (0, {upper}]"),
            );
        }
        MemoryKernel::Custom { .. } => report.push(
            Hypothesis::H4,
            true,
            "custom kernel: summability bound not checked".into(),
        ),
    }

    report.push(
        Hypothesis::H6,
        true,
        "informational: growth bounds L, L1-L4, r on f are not checkable for arbitrary expressions"
            .into(),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example_9_1, example_9_2, FractionalOrders, Nonlinearity};

    #[test]
    fn example_9_1_passes() {
        let p = example_9_1(0.5_f64, 1.0 / 6.0, 0.25).unwrap();
        let report = validate_hypotheses(&p, 20);
        assert_eq!(report.overall(), Status::Pass, "{:#?}", report);
    }

    #[test]
    fn mu_equal_to_nu_warns_h1() {
        let mut p = example_9_1(0.5_f64, 1.0 / 6.0, 0.25).unwrap();
        p.orders = FractionalOrders::new(0.5, vec![1.0 / 6.0], vec![0.5]).unwrap();
        let report = validate_hypotheses(&p, 10);
        assert_eq!(report.status_of(Hypothesis::H1), Status::Warn);
        assert_eq!(report.overall(), Status::Warn);
    }

    #[test]
    fn large_beta_warns_h4() {
        let mut p = example_9_1(0.5_f64, 1.0 / 6.0, 0.25).unwrap();
        p.kernel = MemoryKernel::Power { beta: 0.9 };
        let report = validate_hypotheses(&p, 10);
        assert_eq!(report.status_of(Hypothesis::H4), Status::Warn);
        assert_eq!(report.status_of(Hypothesis::H2), Status::Pass);
    }

    #[test]
    fn negative_diffusion_warns_h2() {
        let mut p = example_9_2(Nonlinearity::Linear, 0.4_f64).unwrap();
        p.diffusion = "x - 0.5".parse().unwrap();
        let report = validate_hypotheses(&p, 10);
        assert_eq!(report.status_of(Hypothesis::H2), Status::Warn);
        assert_eq!(report.status_of(Hypothesis::H3), Status::Pass);
    }

    #[test]
    fn decreasing_gamma_warns_h3() {
        let mut p = example_9_2(Nonlinearity::Linear, 0.4_f64).unwrap();
        p.gamma = vec!["1 - t/2".parse().unwrap()];
        let report = validate_hypotheses(&p, 10);
        assert_eq!(report.status_of(Hypothesis::H3), Status::Warn);
    }

    #[test]
    fn validation_is_pure() {
        let p = example_9_1(0.3_f64, 0.1, 0.15).unwrap();
        let before = p.clone();
        let a = validate_hypotheses(&p, 8);
        let b = validate_hypotheses(&p, 8);
        assert_eq!(a, b);
        assert_eq!(p, before);
    }
}
