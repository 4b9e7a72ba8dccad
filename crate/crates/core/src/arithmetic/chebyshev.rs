//! The Chebyshev–Hooley sum `Σ_{x<ℓ≤2x} log(ℓ² + 1)` and the gcd-sum lemma.

use rayon::prelude::*;
use serde::Serialize;

use super::modular::{divisors, phi, tau};
use super::sieve::{prime_roots, sieve_segment};
use crate::error::{Error, Result};

pub const MIN_X: u64 = 1_000;
pub const MAX_X: u64 = 10_000_000;
const SEGMENT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub x: u64,
    /// `Σ log(ℓ² + 1)` summed over `ℓ`.
    pub direct: f64,
    /// `Σ_m Λ(m) #{x < ℓ ≤ 2x : m | ℓ² + 1}` summed over prime powers `m`.
    pub lambda: f64,
    /// `direct / (2x log x)`.
    pub ratio: f64,
    pub relative_gap: f64,
}

type SegmentPart = (f64, Vec<(u64, u64)>, Vec<u64>);

/// Both sides of the Chebyshev–Hooley identity for `x < ℓ ≤ 2x`.
pub fn chebyshev_sum(x: u64) -> Result<ChebyshevReport> {
    if !(MIN_X..=MAX_X).contains(&x) {
        return Err(Error::domain(format!("x must lie in [10^3, 10^7], got {x}")));
    }
    let (lo, hi) = (x + 1, 2 * x + 1);
    let primes = prime_roots(2 * x);
    let segments: Vec<(u64, u64)> = (lo..hi)
        .step_by(SEGMENT as usize)
        .map(|a| (a, (a + SEGMENT).min(hi)))
        .collect();
    // Per segment: direct sum, and (prime-power hit counts, large cofactors).
    let parts: Vec<SegmentPart> = segments
        .par_iter()
        .map(|&(a, b)| {
            let direct: Vec<f64> = (a..b).map(|l| ((l * l + 1) as f64).ln()).collect();
            let mut hits: Vec<(u64, u64)> = Vec::new();
            let seg = sieve_segment(a, b, &primes, |p, e| match hits.last_mut() {
                Some((q, n)) if *q == p => *n += e as u64,
                _ => hits.push((p, e as u64)),
            });
            let large = seg.cofactor.into_iter().filter(|&c| c > 1).collect();
            (crate::quadrature::pairwise_sum(&direct), hits, large)
        })
        .collect();
    let direct: f64 = parts.iter().map(|p| p.0).sum();

    // Λ side, accumulated prime by prime: hit counts are merged over segments
    // first so each prime contributes `count · log p` once.
    let mut counts: std::collections::BTreeMap<u64, u64> = Default::default();
    let mut large: Vec<u64> = Vec::new();
    for (_, hits, big) in &parts {
        for &(p, n) in hits {
            *counts.entry(p).or_default() += n;
        }
        large.extend_from_slice(big);
    }
    large.sort_unstable();
    let mut terms: Vec<f64> = counts.iter().map(|(&p, &n)| n as f64 * (p as f64).ln()).collect();
    terms.extend(large.iter().map(|&q| (q as f64).ln()));
    let lambda = crate::quadrature::pairwise_sum(&terms);

    let xf = x as f64;
    Ok(ChebyshevReport {
        x,
        direct,
        lambda,
        ratio: direct / (2.0 * xf * xf.ln()),
        relative_gap: (direct - lambda).abs() / direct,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GcdSum {
    pub sum: u64,
    pub bound: u64,
    pub ok: bool,
}

pub const MAX_GCD_ARG: u64 = 1_000_000_000;
const DIRECT_LIMIT: u64 = 1_000_000;

/// `Σ_{ℓ ≤ L} (ℓ, q)` against `τ(|q|) L`.
///
/// The sum is evaluated as `Σ_{d | q} φ(d) ⌊L/d⌋`; for `L ≤ 10⁶` the direct
/// sum is computed too and must agree.
pub fn gcd_sum_check(l: u64, q: i64) -> Result<GcdSum> {
    let q_abs = q.unsigned_abs();
    if l == 0 || q == 0 || l > MAX_GCD_ARG || q_abs > MAX_GCD_ARG {
        return Err(Error::domain(format!(
            "need 1 <= L <= 10^9 and 0 < |q| <= 10^9, got L = {l}, q = {q}"
        )));
    }
    let mut sum = 0u64;
    for d in divisors(q_abs)? {
        sum += phi(d)? * (l / d);
    }
    if l <= DIRECT_LIMIT {
        let direct: u64 = (1..=l).map(|k| num_integer::gcd(k, q_abs)).sum();
        if direct != sum {
            return Err(Error::Consistency(format!(
                "gcd sum for L = {l}, q = {q}: direct {direct}, divisor route {sum}"
            )));
        }
    }
    let bound = tau(q_abs)? * l;
    Ok(GcdSum { sum, bound, ok: sum <= bound })
}

/// The gcd-sum lemma on random `(L, q)`.
pub fn gcd_sum_fuzz(instances: u64, seed: u64) -> Result<super::CheckReport> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = super::CheckReport::new("gcd-sum");
    for _ in 0..instances {
        let l = rng.gen_range(1..=20_000u64);
        let q = rng.gen_range(1..=MAX_GCD_ARG as i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let r = gcd_sum_check(l, q)?;
        report.record(r.ok, || format!("L = {l}, q = {q}: {} > {}", r.sum, r.bound));
    }
    Ok(report)
}
