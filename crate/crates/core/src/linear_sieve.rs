//! Upper and lower linear sieve functions.
//!
//! `F` and `f` are the continuous solutions of
//!
//! ```text
//! (s F(s))' = f(s − 1),   (s f(s))' = F(s − 1),
//! s F(s) = 2e^γ on [1, 3],  s f(s) = 0 for s ≤ 2,
//! ```
//!
//! carried one delay step past the initial data: `F` up to `s = 5`, `f` up
//! to `s = 4`.

use crate::error::{Error, Result};
use crate::params::{derive_exponents, to_f64, ThetaExponent, Q};
use crate::quadrature::{integrate_1d, GridSpec};

/// Euler–Mascheroni constant (not to be confused with the sieve exponent
/// [`crate::params::SieveExponents::gamma_cut`]).
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// `2e^γ`.
pub fn two_e_gamma() -> f64 {
    2.0 * EULER_MASCHERONI.exp()
}

fn log_kernel_integral(upper: f64) -> Result<f64> {
    let grid = GridSpec {
        rel_tol: 1e-12,
        ..GridSpec::adaptive()
    };
    Ok(integrate_1d(|t| (t - 1.0).ln() / t, 2.0, upper, &grid)?.value)
}

/// Upper-bound sieve function `F(s)` for `1 ≤ s ≤ 5`.
#[allow(non_snake_case)]
pub fn upper_F(s: f64) -> Result<f64> {
    if !(1.0..=5.0).contains(&s) {
        return Err(Error::domain(format!("F(s) is shipped for 1 <= s <= 5, got {s}")));
    }
    let base = two_e_gamma() / s;
    if s <= 3.0 {
        Ok(base)
    } else {
        Ok(base * (1.0 + log_kernel_integral(s - 1.0)?))
    }
}

/// Lower-bound sieve function `f(s)` for `0 < s ≤ 4`.
pub fn lower_f(s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 4.0) {
        return Err(Error::domain(format!("f(s) is shipped for 0 < s <= 4, got {s}")));
    }
    if s <= 2.0 {
        Ok(0.0)
    } else {
        Ok(two_e_gamma() / s * (s - 1.0).ln())
    }
}

/// Sieve dimension `s = log D / log z` with `z = x^{α−1}`, exactly.
pub fn sieve_level(alpha: Q, theta: ThetaExponent) -> Result<Q> {
    let e = derive_exponents(alpha, theta)?;
    if e.h_exp <= Q::from_integer(0) {
        return Err(Error::domain("linear sieve factor needs alpha > 1".to_string()));
    }
    Ok(e.d_exp / e.h_exp)
}

/// `e^{−γ} · α/(α−1) · F(log D / log z)` with `z = x^{α−1}`.
pub fn linear_sieve_factor(alpha: Q, theta: ThetaExponent) -> Result<f64> {
    let s = sieve_level(alpha, theta)?;
    factor_from_level(to_f64(&alpha), to_f64(&s))
}

/// Floating-point variant for quadrature nodes.
pub fn linear_sieve_factor_f64(alpha: f64, theta: ThetaExponent) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 1.5) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (1, 3/2)")));
    }
    let t = theta.to_f64();
    let d_exp = (1.0 - 2.0 * t * alpha) / (2.0 - 4.0 * t);
    factor_from_level(alpha, d_exp / (alpha - 1.0))
}

fn factor_from_level(alpha: f64, s: f64) -> Result<f64> {
    if !(1.0..=5.0).contains(&s) {
        return Err(Error::domain(format!(
            "sieve level s = {s} at alpha = {alpha} is outside [1, 5]"
        )));
    }
    Ok((-EULER_MASCHERONI).exp() * alpha / (alpha - 1.0) * upper_F(s)?)
}

/// The closed form `4(1 − 2θ)α/(1 − 2θα)` the factor reduces to when `s ≤ 3`.
pub fn linear_sieve_closed_form(alpha: f64, theta: ThetaExponent) -> f64 {
    let t = theta.to_f64();
    4.0 * (1.0 - 2.0 * t) * alpha / (1.0 - 2.0 * t * alpha)
}
