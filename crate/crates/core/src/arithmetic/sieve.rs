//! Segmented sieve over the values `ℓ² + 1`.
//!
//! For every prime `p ≤ bound` with a root of `ν² + 1 ≡ 0 (mod p)` the
//! progressions `ℓ ≡ ±ν (mod p)` are walked and `p` is divided out of
//! `ℓ² + 1` as often as it goes. Once all primes up to `max(ℓ)` are removed
//! the cofactor is `1` or a single prime.

use super::modular::primes_up_to;
use super::roots::sqrt_neg1_mod_prime;

/// A prime together with the roots of `ν² + 1` modulo it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeRoot {
    pub p: u64,
    pub roots: [u64; 2],
    pub count: usize,
}

pub(crate) fn prime_roots(bound: u64) -> Vec<PrimeRoot> {
    primes_up_to(bound)
        .into_iter()
        .filter_map(|p| {
            let r = sqrt_neg1_mod_prime(p)?;
            Some(if p == 2 {
                PrimeRoot { p, roots: [1, 1], count: 1 }
            } else {
                PrimeRoot { p, roots: [r, p - r], count: 2 }
            })
        })
        .collect()
}

/// Factor data for `ℓ² + 1`, `ℓ ∈ [lo, hi)`.
pub(crate) struct Segment {
    /// Remaining cofactor after dividing out every sieving prime.
    pub cofactor: Vec<u64>,
    /// Largest sieving prime dividing `ℓ² + 1` (0 if none).
    pub largest: Vec<u64>,
}

/// Sieves `[lo, hi)`; `on_hit(p, e)` receives each prime and its exponent.
pub(crate) fn sieve_segment(
    lo: u64,
    hi: u64,
    primes: &[PrimeRoot],
    mut on_hit: impl FnMut(u64, u32),
) -> Segment {
    let len = (hi - lo) as usize;
    let mut cofactor: Vec<u64> = (lo..hi).map(|l| l * l + 1).collect();
    let mut largest = vec![0u64; len];
    for pr in primes {
        let p = pr.p;
        for &r in &pr.roots[..pr.count] {
            let start = lo + (r + p - lo % p) % p;
            let mut l = start;
            while l < hi {
                let i = (l - lo) as usize;
                let mut e = 0;
                while cofactor[i].is_multiple_of(p) {
                    cofactor[i] /= p;
                    e += 1;
                }
                on_hit(p, e);
                largest[i] = p;
                l += p;
            }
        }
    }
    Segment { cofactor, largest }
}

#[cfg(test)]
mod tests {
    use super::super::modular::factorize;
    use super::*;

    #[test]
    fn segment_matches_factorization() {
        let primes = prime_roots(3000);
        let seg = sieve_segment(1000, 3000, &primes, |_, _| {});
        for (i, l) in (1000u64..3000).enumerate() {
            let f = factorize(l * l + 1).unwrap();
            let lpf = f.last().unwrap().0;
            let from_sieve = seg.cofactor[i].max(seg.largest[i]);
            assert_eq!(from_sieve, lpf, "l = {l}");
            assert!(seg.cofactor[i] == 1 || seg.cofactor[i] > 3000);
        }
    }
}
