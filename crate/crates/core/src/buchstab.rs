//! The Buchstab function `ω(u)`.
//!
//! On `[0, 3)` the closed forms are exact. Beyond that only the certified
//! envelope constants are shipped:
//!
//! | range          | value                 |
//! |----------------|-----------------------|
//! | `u < 1`        | `0`                   |
//! | `1 ≤ u < 2`    | `1/u`                 |
//! | `2 ≤ u < 3`    | `(1 + ln(u − 1))/u`   |
//! | `3 ≤ u < 4`    | `≤ 0.5644`            |
//! | `u ≥ 4`        | `≤ 0.5617`            |
//! | `u ≥ 2.47`     | `≥ 0.5607`            |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const UPPER_3_4: f64 = 0.5644;
pub const UPPER_4_INF: f64 = 0.5617;
pub const LOWER_FROM_2_47: f64 = 0.5607;

/// Points where `ω` or one of its envelopes is discontinuous or has a kink.
pub const BREAKPOINTS: [f64; 5] = [1.0, 2.0, 2.47, 3.0, 4.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaMode {
    Exact,
    Upper,
    Lower,
}

impl std::str::FromStr for OmegaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(OmegaMode::Exact),
            "upper" => Ok(OmegaMode::Upper),
            "lower" => Ok(OmegaMode::Lower),
            _ => Err(Error::domain(format!("unknown omega mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for OmegaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OmegaMode::Exact => "exact",
            OmegaMode::Upper => "upper",
            OmegaMode::Lower => "lower",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OmegaValue {
    pub u: f64,
    pub mode: OmegaMode,
    pub value: f64,
}

#[inline]
fn exact_below_three(u: f64) -> f64 {
    if u < 1.0 {
        0.0
    } else if u < 2.0 {
        1.0 / u
    } else {
        (1.0 + (u - 1.0).ln()) / u
    }
}

/// Unchecked evaluation for hot loops; `Exact` beyond 3 falls back to the
/// upper envelope.
#[inline]
pub(crate) fn omega_unchecked(u: f64, mode: OmegaMode) -> f64 {
    if u < 3.0 {
        return exact_below_three(u);
    }
    match mode {
        OmegaMode::Lower => LOWER_FROM_2_47,
        OmegaMode::Upper | OmegaMode::Exact => {
            if u < 4.0 {
                UPPER_3_4
            } else {
                UPPER_4_INF
            }
        }
    }
}

/// `ω(u)` in the requested mode.
pub fn omega(u: f64, mode: OmegaMode) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::domain(format!("omega needs finite u >= 0, got {u}")));
    }
    if mode == OmegaMode::Exact && u >= 3.0 {
        return Err(Error::domain(format!(
            "no exact formula for omega at u = {u} >= 3"
        )));
    }
    Ok(omega_unchecked(u, mode))
}

pub fn omega_value(u: f64, mode: OmegaMode) -> Result<OmegaValue> {
    Ok(OmegaValue {
        u,
        mode,
        value: omega(u, mode)?,
    })
}

/// Central-difference residual of `(uω(u))′ = ω(u − 1)` on `(2, 3)`.
pub fn omega_de_residual(u: f64, h: f64) -> Result<f64> {
    if !(u > 2.0 && u < 3.0) {
        return Err(Error::domain(format!("residual check needs 2 < u < 3, got {u}")));
    }
    if !(h > 0.0 && h < 0.01) {
        return Err(Error::domain(format!("step must lie in (0, 0.01), got {h}")));
    }
    // Near the ends the stencil leaves the exact branch; clamp it.
    let lo = (u - h).max(2.0);
    let hi = (u + h).min(3.0 - f64::EPSILON * 4.0);
    let g = |t: f64| t * exact_below_three(t);
    let derivative = (g(hi) - g(lo)) / (hi - lo);
    Ok((derivative - exact_below_three(u - 1.0)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_pieces() {
        assert!((omega(1.5, OmegaMode::Exact).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let v = omega(2.5, OmegaMode::Exact).unwrap();
        assert!((v - (1.0 + 1.5f64.ln()) / 2.5).abs() < 1e-15);
        assert!((v - 0.562_186_04).abs() < 1e-8);
        for mode in [OmegaMode::Exact, OmegaMode::Upper, OmegaMode::Lower] {
            assert_eq!(omega(0.5, mode).unwrap(), 0.0);
            assert_eq!(omega(0.0, mode).unwrap(), 0.0);
        }
    }

    #[test]
    fn envelopes() {
        assert_eq!(omega(3.5, OmegaMode::Upper).unwrap(), 0.5644);
        assert_eq!(omega(3.0, OmegaMode::Upper).unwrap(), 0.5644);
        assert_eq!(omega(4.0, OmegaMode::Upper).unwrap(), 0.5617);
        assert_eq!(omega(40.0, OmegaMode::Upper).unwrap(), 0.5617);
        assert_eq!(omega(3.0, OmegaMode::Lower).unwrap(), 0.5607);
        assert_eq!(omega(100.0, OmegaMode::Lower).unwrap(), 0.5607);
    }

    #[test]
    fn exact_mode_refuses_large_u() {
        assert!(matches!(omega(3.0, OmegaMode::Exact), Err(Error::Domain(_))));
        assert!(omega(-0.1, OmegaMode::Upper).is_err());
        assert!(omega(f64::NAN, OmegaMode::Upper).is_err());
    }

    #[test]
    fn continuous_at_two() {
        let left = omega(2.0 - 1e-12, OmegaMode::Exact).unwrap();
        let right = omega(2.0, OmegaMode::Exact).unwrap();
        assert!((left - 0.5).abs() < 1e-11);
        assert_eq!(right, 0.5);
    }

    #[test]
    fn lower_bound_holds_on_exact_branch_from_2_47() {
        let mut u = 2.47;
        while u < 3.0 {
            assert!(omega(u, OmegaMode::Exact).unwrap() >= LOWER_FROM_2_47);
            u += 1e-3;
        }
    }

    #[test]
    fn de_residuals() {
        assert!(omega_de_residual(2.5, 1e-4).unwrap() < 1e-6);
        assert!(omega_de_residual(2.9, 1e-4).unwrap() < 1e-6);
        assert!(omega_de_residual(2.1, 1e-5).unwrap() < 1e-5);
        assert!(omega_de_residual(3.5, 1e-4).is_err());
        assert!(omega_de_residual(2.5, 0.1).is_err());
    }

    proptest::proptest! {
        #[test]
        fn envelope_ordering(u in 0.0f64..50.0) {
            let lo = omega(u, OmegaMode::Lower).unwrap();
            let hi = omega(u, OmegaMode::Upper).unwrap();
            proptest::prop_assert!(lo <= hi);
            if u < 3.0 {
                let ex = omega(u, OmegaMode::Exact).unwrap();
                proptest::prop_assert_eq!(lo, ex);
                proptest::prop_assert_eq!(hi, ex);
            } else {
                proptest::prop_assert!(LOWER_FROM_2_47 <= lo && hi <= UPPER_3_4);
            }
        }

        #[test]
        fn residual_scales_with_step(u in 2.01f64..2.99, h in 1e-5f64..1e-3) {
            proptest::prop_assert!(omega_de_residual(u, h).unwrap() < 10.0 * h);
        }
    }
}
