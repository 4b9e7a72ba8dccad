//! Gauss's correspondence between primitive representations
//! `ℓ = r² + s²` and roots of `ν² + 1 ≡ 0 (mod ℓ)`.

use serde::Serialize;

use super::modular::inv_mod;
use super::roots::roots_neg1;
use super::CheckReport;
use crate::error::{Error, Result};

pub const MAX_ELL: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoSquareRep {
    pub r: u64,
    pub s: u64,
    pub ell: u64,
}

/// All coprime `r, s > 0` with `r² + s² = ℓ`, ordered by `r`.
pub fn two_square_reps(ell: u64) -> Vec<TwoSquareRep> {
    let mut out = Vec::new();
    let mut r = 1u64;
    while r * r < ell {
        let rest = ell - r * r;
        let s = rest.isqrt();
        if s * s == rest && num_integer::gcd(r, s) == 1 {
            out.push(TwoSquareRep { r, s, ell });
        }
        r += 1;
    }
    out
}

/// `ν ≡ (r − r̄ ℓ)/s (mod ℓ)` with `r r̄ ≡ 1 (mod s)` (`r̄ = 0` for `s = 1`).
pub fn gauss_nu(rep: &TwoSquareRep) -> u64 {
    let TwoSquareRep { r, s, ell } = *rep;
    let r_bar = if s == 1 { 0 } else { inv_mod(r % s, s).expect("(r, s) = 1") };
    let num = r as i128 - r_bar as i128 * ell as i128;
    debug_assert_eq!(num.rem_euclid(s as i128), 0);
    (num / s as i128).rem_euclid(ell as i128) as u64
}

/// Representations paired with their roots, after checking that the map is
/// a bijection onto the root set.
///
/// `ℓ = 1` is rejected: its single root `0` has no representation with
/// `r, s > 0`.
pub fn gauss_correspondence(ell: u64) -> Result<Vec<(TwoSquareRep, u64)>> {
    if !(2..=MAX_ELL).contains(&ell) {
        return Err(Error::domain(format!("ell must lie in [2, 10^8], got {ell}")));
    }
    let pairs: Vec<(TwoSquareRep, u64)> = two_square_reps(ell)
        .into_iter()
        .map(|rep| (rep, gauss_nu(&rep)))
        .collect();
    let roots = roots_neg1(ell)?.roots;
    let mut image: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    image.sort_unstable();
    if image != roots {
        return Err(Error::Consistency(format!(
            "two-square correspondence for ell = {ell}: image {image:?}, roots {roots:?}"
        )));
    }
    Ok(pairs)
}

/// Runs [`gauss_correspondence`] for `2 ≤ ℓ ≤ max_ell`; `instances` counts
/// the moduli with `ρ(ℓ) > 0`.
pub fn gauss_check(max_ell: u64) -> Result<CheckReport> {
    let table = super::roots::rho_table(max_ell as usize);
    let mut report = CheckReport::new("gauss");
    for ell in 2..=max_ell {
        if table[ell as usize] == 0 {
            // Still a check: no representation may exist.
            if !two_square_reps(ell).is_empty() {
                report.record(false, || format!("ell = {ell} has representations but rho = 0"));
            }
            continue;
        }
        match gauss_correspondence(ell) {
            Ok(_) => report.record(true, String::new),
            Err(Error::Consistency(msg)) => report.record(false, || msg),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
