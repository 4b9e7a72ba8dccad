//! Kloosterman sums `S(a, b; c) = Σ_{(n, c) = 1} e((an + b n̄)/c)` by direct
//! summation, and the Weil bound.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::modular::{inv_mod, tau};
use super::CheckReport;
use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KloostermanValue {
    pub a: i64,
    pub b: i64,
    pub c: u64,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// `|S| / (τ(c) gcd(a, b, c)^{1/2} c^{1/2})`; at most 1 by Weil.
    pub weil_ratio: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Unit inverses and roots of unity for one modulus, reused across `(a, b)`.
pub struct KloostermanTable {
    c: u64,
    tau: u64,
    units: Vec<(u64, u64)>,
    twiddle: Vec<Complex64>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 || c > MAX_MODULUS {
            return Err(Error::domain(format!("modulus must lie in [1, 10^6], got {c}")));
        }
        let units = (0..c)
            .filter_map(|n| inv_mod(n, c).map(|v| (n, v)))
            .collect();
        let twiddle = (0..c)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / c as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        Ok(KloostermanTable {
            c,
            tau: tau(c)?,
            units,
            twiddle,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    pub fn sum(&self, a: i64, b: i64) -> Complex64 {
        let c = self.c as i128;
        let a = (a as i128).rem_euclid(c) as u64;
        let b = (b as i128).rem_euclid(c) as u64;
        let terms: Vec<Complex64> = self
            .units
            .iter()
            .map(|&(n, v)| {
                let k = ((a as u128 * n as u128 + b as u128 * v as u128) % self.c as u128) as usize;
                self.twiddle[k]
            })
            .collect();
        pairwise(&terms)
    }

    /// The Weil bound `τ(c) gcd(a, b, c)^{1/2} c^{1/2}`.
    pub fn weil_bound(&self, a: i64, b: i64) -> f64 {
        let g = num_integer::gcd(num_integer::gcd(a.unsigned_abs(), b.unsigned_abs()), self.c);
        self.tau as f64 * (g as f64).sqrt() * (self.c as f64).sqrt()
    }

    pub fn evaluate(&self, a: i64, b: i64) -> KloostermanValue {
        let value = self.sum(a, b);
        KloostermanValue {
            a,
            b,
            c: self.c,
            value,
            weil_ratio: value.norm() / self.weil_bound(a, b),
        }
    }
}

fn pairwise(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        xs.iter().sum()
    } else {
        let (l, r) = xs.split_at(xs.len() / 2);
        pairwise(l) + pairwise(r)
    }
}

pub fn kloosterman(a: i64, b: i64, c: u64) -> Result<KloostermanValue> {
    Ok(KloostermanTable::new(c)?.evaluate(a, b))
}

/// Weil bound, symmetry and realness for `c ≤ c_max` with `pairs_per_c`
/// random `(a, b)` per modulus. Parallel over `c`; results are merged in
/// modulus order.
pub fn weil_check(c_max: u64, pairs_per_c: u64, seed: u64) -> Result<CheckReport> {
    let per_c: Vec<CheckReport> = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let table = KloostermanTable::new(c)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ c.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut report = CheckReport::new("weil");
            for _ in 0..pairs_per_c {
                let a = rng.gen_range(-(c as i64) * 2..=(c as i64) * 2);
                let b = rng.gen_range(-(c as i64) * 2..=(c as i64) * 2);
                let s = table.sum(a, b);
                let swapped = table.sum(b, a);
                let bound = table.weil_bound(a, b);
                let ok = s.norm() <= bound * (1.0 + 1e-9)
                    && s.im.abs() < 1e-9 * (c as f64).max(1.0)
                    && (s - swapped).norm() < 1e-9 * (c as f64).max(1.0);
                report.record(ok, || format!("S({a},{b};{c}) = {s}, bound {bound}"));
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut report = CheckReport::new("weil");
    for r in per_c {
        report.merge(r);
    }
    Ok(report)
}
