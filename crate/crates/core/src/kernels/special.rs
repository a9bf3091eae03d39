//! Gamma, log-gamma and digamma.
//!
//! Gamma uses the Lanczos approximation with `g = 7` and nine coefficients,
//! reflected for arguments below one half. Relative error stays under
//! `3e-14` on `[0.05, 50]` in double precision.

use super::KernelError;
use crate::Scalar;

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sqrt(2 * pi)`
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// `ln(sqrt(2 * pi))`
const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Integer arguments up to this value return the factorial product, which is
/// exact in double precision.
const EXACT_FACTORIAL_LIMIT: f64 = 23.0;

fn is_pole<S: Scalar>(x: S) -> bool {
    x <= S::zero() && x == x.floor()
}

/// Lanczos series evaluated at `z = x - 1`.
fn lanczos_sum<S: Scalar>(z: S) -> S {
    LANCZOS_COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(S::lit(LANCZOS_COEFFS[0]), |acc, (i, &c)| {
            acc + S::lit(c) / (z + S::from_count(i))
        })
}

/// Euler Gamma function.
pub fn gamma<S: Scalar>(x: S) -> Result<S, KernelError> {
    if x.is_nan() {
        return Err(KernelError::Domain("gamma of NaN".to_string()));
    }
    if is_pole(x) {
        return Err(KernelError::Pole {
            x: x.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked<S: Scalar>(x: S) -> S {
    let half = S::lit(0.5);
    if x >= S::one() && x <= S::lit(EXACT_FACTORIAL_LIMIT) && x == x.floor() {
        let mut acc = S::one();
        let mut k = S::lit(2.0);
        while k < x {
            acc *= k;
            k += S::one();
        }
        return acc;
    }
    if x < half {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        S::PI() / ((S::PI() * x).sin() * gamma_unchecked(S::one() - x))
    } else {
        let z = x - S::one();
        let t = z + S::lit(LANCZOS_G) + half;
        S::lit(SQRT_TWO_PI) * t.powf(z + half) * (-t).exp() * lanczos_sum(z)
    }
}

/// Natural logarithm of `|Γ(x)|`.
pub fn ln_gamma<S: Scalar>(x: S) -> Result<S, KernelError> {
    if x.is_nan() {
        return Err(KernelError::Domain("ln_gamma of NaN".to_string()));
    }
    if is_pole(x) {
        return Err(KernelError::Pole {
            x: x.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked<S: Scalar>(x: S) -> S {
    let half = S::lit(0.5);
    if x < half {
        S::PI().ln() - (S::PI() * x).sin().abs().ln() - ln_gamma_unchecked(S::one() - x)
    } else {
        let z = x - S::one();
        let t = z + S::lit(LANCZOS_G) + half;
        S::lit(LN_SQRT_TWO_PI) + (z + half) * t.ln() - t + lanczos_sum(z).ln()
    }
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
///
/// Shifts the argument above 10 with `ψ(x) = ψ(x+1) - 1/x`, then sums the
/// asymptotic expansion in `1/x²`.
pub fn digamma<S: Scalar>(x: S) -> Result<S, KernelError> {
    if !(x > S::zero()) || !x.is_finite() {
        return Err(KernelError::Domain(format!(
            "digamma requires x > 0, got {x}"
        )));
    }
    let mut x = x;
    let mut acc = S::zero();
    let shift = S::lit(10.0);
    while x < shift {
        acc -= x.recip();
        x += S::one();
    }
    // Bernoulli terms B_2k / (2k) for k = 1..7
    const TAIL: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
        1.0 / 12.0,
    ];
    let inv2 = (x * x).recip();
    let mut series = S::zero();
    for &c in TAIL.iter().rev() {
        series = (series + S::lit(c)) * inv2;
    }
    Ok(acc + x.ln() - S::lit(0.5) / x - series)
}
