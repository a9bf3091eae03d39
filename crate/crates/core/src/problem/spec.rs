use super::{expr::Var, Expr, ProblemError};
use crate::Scalar;

/// Orders `(ν; ν₁..ν_M; μ₁..μ_N)` of the multi-term operator.
///
/// Construction only checks that every order lies in `(0, 1]`. The ordering
/// chain `0 < ν₁ < … < ν_M < ν`, `0 < μ₁ < … < μ_N < ν` is checked by
/// [`FractionalOrders::check_ordering`] and reported by hypothesis
/// validation.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalOrders<S> {
    pub nu: S,
    pub nu_list: Vec<S>,
    pub mu_list: Vec<S>,
}

impl<S: Scalar> FractionalOrders<S> {
    pub fn new(nu: S, nu_list: Vec<S>, mu_list: Vec<S>) -> Result<Self, ProblemError> {
        let in_range = |v: S| v > S::zero() && v <= S::one();
        if !in_range(nu) || !nu_list.iter().chain(&mu_list).all(|&v| in_range(v)) {
            return Err(ProblemError::Orders(format!(
                "every order must lie in (0,1]: nu = {nu}, nu_i = {nu_list:?}, mu_j = {mu_list:?}"
            )));
        }
        Ok(Self {
            nu,
            nu_list,
            mu_list,
        })
    }

    /// Single-term operator of order `nu`.
    pub fn single(nu: S) -> Result<Self, ProblemError> {
        Self::new(nu, Vec::new(), Vec::new())
    }

    pub fn check_ordering(&self) -> Result<(), ProblemError> {
        let increasing = |v: &[S]| v.windows(2).all(|w| w[0] < w[1]);
        let below_nu = |v: &[S]| v.iter().all(|&o| o > S::zero() && o < self.nu);
        if !increasing(&self.nu_list) || !below_nu(&self.nu_list) {
            return Err(ProblemError::Orders(format!(
                "need 0 < nu_1 < ... < nu_M < nu = {}, got {:?}",
                self.nu, self.nu_list
            )));
        }
        if !increasing(&self.mu_list) || !below_nu(&self.mu_list) {
            return Err(ProblemError::Orders(format!(
                "need 0 < mu_1 < ... < mu_N < nu = {}, got {:?}",
                self.nu, self.mu_list
            )));
        }
        if let Some(clash) = self.nu_list.iter().find(|v| self.mu_list.contains(v)) {
            return Err(ProblemError::Orders(format!(
                "order {clash} appears among both nu_i and mu_j"
            )));
        }
        Ok(())
    }
}

/// Memory kernel `𝒦` of the convolution term.
#[derive(Debug, Clone, PartialEq)]
pub enum MemoryKernel<S> {
    /// No memory term.
    None,
    /// `𝒦(t) = t^{−β}`, `β ∈ [0, 1)`.
    Power { beta: S },
    /// User kernel `𝒦(τ)` with antiderivative `A(τ) = ∫₀^τ 𝒦`, both in `t`.
    Custom {
        kernel: Expr,
        antiderivative: Expr,
    },
}

impl<S: Scalar> MemoryKernel<S> {
    pub fn is_none(&self) -> bool {
        matches!(self, MemoryKernel::None)
    }

    /// `𝒦(τ)`.
    pub fn value(&self, tau: S) -> S {
        match self {
            MemoryKernel::None => S::zero(),
            MemoryKernel::Power { beta } => tau.powf(-*beta),
            MemoryKernel::Custom { kernel, .. } => kernel.at(S::zero(), tau),
        }
    }

    /// `∫₀^τ 𝒦(s) ds`.
    pub fn mass(&self, tau: S) -> S {
        match self {
            MemoryKernel::None => S::zero(),
            MemoryKernel::Power { beta } => {
                let e = S::one() - *beta;
                tau.powf(e) / e
            }
            MemoryKernel::Custom { antiderivative, .. } => antiderivative.at(S::zero(), tau),
        }
    }

    fn check(&self) -> Result<(), ProblemError> {
        match self {
            MemoryKernel::Power { beta } if !(*beta >= S::zero() && *beta < S::one()) => {
                Err(ProblemError::Kernel(format!(
                    "power kernel exponent must lie in [0,1), got {beta}"
                )))
            }
            MemoryKernel::Custom {
                kernel,
                antiderivative,
            } if [kernel, antiderivative]
                .iter()
                .any(|e| e.uses(Var::X) || e.uses(Var::U)) =>
            {
                Err(ProblemError::Kernel(
                    "custom kernel expressions may only use t".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// `𝔠_deriv ∂u/∂x + 𝔠_value u = φ(t)` at one end of the interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition<S> {
    pub c_deriv: S,
    pub c_value: S,
    pub data: Expr,
}

impl<S: Scalar> BoundaryCondition<S> {
    pub fn neumann(flux: Expr) -> Self {
        Self {
            c_deriv: S::one(),
            c_value: S::zero(),
            data: flux,
        }
    }

    pub fn dirichlet(value: Expr) -> Self {
        Self {
            c_deriv: S::zero(),
            c_value: S::one(),
            data: value,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        self.c_deriv == S::zero()
    }
}

/// Full description of an initial-boundary value problem on `(0, L) × (0, T]`:
///
/// ```text
/// D^ν(ϱ₀u) + Σ D^{ν_i}(ϱ_i u) − Σ D^{μ_j}(γ_j u) − 𝔞 u_xx + 𝔡 u_x − 𝒦 * (b u_xx)
///     = f(x, t, u) + g(x, t)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<S> {
    pub name: String,
    pub orders: FractionalOrders<S>,
    /// `𝔞(x, t)`
    pub diffusion: Expr,
    /// `𝔡(x, t)`
    pub advection: Expr,
    /// `b(x, t)` under the memory convolution.
    pub memory_coeff: Expr,
    /// `ϱ₀` multiplying `u` under `D^ν`.
    pub rho0: Expr,
    /// `ϱ_i`, one per `ν_i`.
    pub rho: Vec<Expr>,
    /// `γ_j`, one per `μ_j`.
    pub gamma: Vec<Expr>,
    pub kernel: MemoryKernel<S>,
    /// `f(x, t, u)`
    pub nonlinearity: Expr,
    /// `g(x, t)`
    pub source: Expr,
    /// `u₀(x)`
    pub initial: Expr,
    pub left: BoundaryCondition<S>,
    pub right: BoundaryCondition<S>,
    pub exact: Option<Expr>,
    pub length: S,
    pub horizon: S,
}

impl<S: Scalar> ProblemSpec<S> {
    /// Structural checks: term counts match the order lists, fields only use
    /// the variables they may depend on, boundary data is not degenerate.
    pub fn check(&self) -> Result<(), ProblemError> {
        if self.rho.len() != self.orders.nu_list.len() {
            return Err(ProblemError::Invalid(format!(
                "{} rho coefficients for {} nu_i orders",
                self.rho.len(),
                self.orders.nu_list.len()
            )));
        }
        if self.gamma.len() != self.orders.mu_list.len() {
            return Err(ProblemError::Invalid(format!(
                "{} gamma coefficients for {} mu_j orders",
                self.gamma.len(),
                self.orders.mu_list.len()
            )));
        }
        if !(self.length > S::zero() && self.horizon > S::zero()) {
            return Err(ProblemError::Invalid(format!(
                "domain length and horizon must be positive, got L = {}, T = {}",
                self.length, self.horizon
            )));
        }
        let mut no_u = vec![
            ("diffusion", &self.diffusion),
            ("advection", &self.advection),
            ("memory_coeff", &self.memory_coeff),
            ("rho0", &self.rho0),
            ("source", &self.source),
            ("initial", &self.initial),
            ("left.data", &self.left.data),
            ("right.data", &self.right.data),
        ];
        no_u.extend(self.rho.iter().map(|e| ("rho", e)));
        no_u.extend(self.gamma.iter().map(|e| ("gamma", e)));
        if let Some(ex) = &self.exact {
            no_u.push(("exact", ex));
        }
        if let Some((name, _)) = no_u.iter().find(|(_, e)| e.uses(Var::U)) {
            return Err(ProblemError::Invalid(format!(
                "field '{name}' may not depend on u"
            )));
        }
        if self.initial.uses(Var::T) {
            return Err(ProblemError::Invalid("initial data may not depend on t".into()));
        }
        for (side, bc) in [("left", &self.left), ("right", &self.right)] {
            if bc.data.uses(Var::X) {
                return Err(ProblemError::Invalid(format!(
                    "{side} boundary data may only depend on t"
                )));
            }
            if bc.c_deriv == S::zero() && bc.c_value == S::zero() {
                return Err(ProblemError::Invalid(format!(
                    "{side} boundary has both coefficients zero"
                )));
            }
        }
        self.kernel.check()
    }

    /// Fractional terms in the order `ν`, `ν_i`, `μ_j`.
    pub fn fractional_terms(&self) -> Vec<FractionalTerm<'_, S>> {
        let term = |order: S, sign: S, coeff| FractionalTerm { order, sign, coeff };
        let mut terms = vec![term(self.orders.nu, S::one(), &self.rho0)];
        terms.extend(
            self.orders
                .nu_list
                .iter()
                .zip(&self.rho)
                .map(|(&o, c)| term(o, S::one(), c)),
        );
        terms.extend(
            self.orders
                .mu_list
                .iter()
                .zip(&self.gamma)
                .map(|(&o, c)| term(o, -S::one(), c)),
        );
        terms
    }
}

/// One `± D^θ(c u)` term of the time operator.
#[derive(Debug, Clone, Copy)]
pub struct FractionalTerm<'a, S> {
    pub order: S,
    /// `+1` for `ϱ` terms, `−1` for `γ` terms.
    pub sign: S,
    pub coeff: &'a Expr,
}
