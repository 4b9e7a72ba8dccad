//! Roots of `ν² + 1 ≡ 0 (mod m)` and the counting function `ρ(m)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::modular::{factorize, inv_mod, mul_mod, pow_mod};
use super::CheckReport;
use crate::error::{Error, Result};

/// Upper limit on the modulus accepted by [`roots_neg1`].
pub const MAX_MODULUS: u64 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootsModM {
    pub m: u64,
    /// Sorted, duplicate-free residues in `[0, m)`.
    pub roots: Vec<u64>,
}

impl RootsModM {
    pub fn rho(&self) -> u64 {
        self.roots.len() as u64
    }
}

/// A square root of `−1` modulo the prime `p`, if one exists.
pub fn sqrt_neg1_mod_prime(p: u64) -> Option<u64> {
    if p == 2 {
        return Some(1);
    }
    if p % 4 != 1 {
        return None;
    }
    // g^((p−1)/4) for a quadratic non-residue g.
    let half = (p - 1) / 2;
    (2..p).find(|&g| pow_mod(g, half, p) == p - 1).map(|g| {
        let r = pow_mod(g, (p - 1) / 4, p);
        r.min(p - r)
    })
}

fn roots_prime_power(p: u64, k: u32) -> Vec<u64> {
    if p == 2 {
        return if k == 1 { vec![1] } else { Vec::new() };
    }
    let Some(mut r) = sqrt_neg1_mod_prime(p) else {
        return Vec::new();
    };
    let mut pk = p;
    for _ in 1..k {
        pk *= p;
        // Newton step r ← r − (r² + 1)/(2r) mod p^{j+1}.
        let fr = (mul_mod(r, r, pk) + 1) % pk;
        let inv = inv_mod(mul_mod(2, r, pk), pk).expect("2r is a unit mod p^k");
        r = (r + pk - mul_mod(fr, inv, pk)) % pk;
    }
    let mut v = vec![r, pk - r];
    v.sort_unstable();
    v
}

/// Combines residues modulo coprime `m1`, `m2`.
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
    let diff = (b + m2 - a % m2) % m2;
    let t = mul_mod(diff, inv, m2);
    (a + mul_mod(m1 % m, t, m)) % m
}

/// Complete root set of `ν² + 1 ≡ 0 (mod m)` by factorization, lifting and
/// CRT.
pub fn roots_neg1(m: u64) -> Result<RootsModM> {
    if m == 0 || m > MAX_MODULUS {
        return Err(Error::domain(format!("modulus must lie in [1, 10^12], got {m}")));
    }
    let mut modulus = 1u64;
    let mut roots = vec![0u64];
    for (p, k) in factorize(m)? {
        let local = roots_prime_power(p, k);
        if local.is_empty() {
            return Ok(RootsModM { m, roots: Vec::new() });
        }
        let pk = p.pow(k);
        roots = roots
            .iter()
            .flat_map(|&a| local.iter().map(move |&b| crt(a, modulus, b, pk)))
            .collect();
        modulus *= pk;
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(RootsModM { m, roots })
}

/// `ρ(m)` from the factorization, without enumerating roots.
pub fn rho(m: u64) -> Result<u64> {
    if m == 0 || m > MAX_MODULUS {
        return Err(Error::domain(format!("modulus must lie in [1, 10^12], got {m}")));
    }
    let mut count = 1;
    for (p, k) in factorize(m)? {
        count *= match p {
            2 if k == 1 => 1,
            2 => 0,
            _ if p % 4 == 1 => 2,
            _ => 0,
        };
    }
    Ok(count)
}

/// `ρ(m)` for every `m ≤ n` via a smallest-prime-factor sieve.
pub fn rho_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut table = vec![0u32; n + 1];
    if n >= 1 {
        table[1] = 1;
    }
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut rest = m / p;
        let mut k = 1;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        let local = match p {
            2 if k == 1 => 1,
            2 => 0,
            _ if p % 4 == 1 => 2,
            _ => 0,
        };
        table[m] = local * table[rest];
    }
    table
}

fn brute_force(m: u64) -> Vec<u64> {
    (0..m).filter(|&v| (v * v + 1) % m == 0).collect()
}

/// Compares [`roots_neg1`] with exhaustive search for every `m ≤ m_max`.
pub fn rho_oracle_check(m_max: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("rho-oracle");
    for m in 1..=m_max {
        let fast = roots_neg1(m)?;
        let slow = brute_force(m);
        report.record(fast.roots == slow && rho(m)? == slow.len() as u64, || {
            format!("m = {m}: {:?} vs {:?}", fast.roots, slow)
        });
    }
    Ok(report)
}

/// `ρ(m₁m₂) = ρ(m₁)ρ(m₂)` on random coprime pairs below `bound`.
pub fn rho_multiplicativity_check(pairs: u64, bound: u64, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("rho-multiplicativity");
    let mut done = 0;
    while done < pairs {
        let a = rng.gen_range(1..=bound);
        let b = rng.gen_range(1..=bound);
        if num_integer::gcd(a, b) != 1 {
            continue;
        }
        done += 1;
        let lhs = roots_neg1(a * b)?.rho();
        let rhs = rho(a)? * rho(b)?;
        report.record(lhs == rhs, || format!("rho({a}*{b}) = {lhs}, product {rhs}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(roots_neg1(5).unwrap().roots, vec![2, 3]);
        assert!(roots_neg1(3).unwrap().roots.is_empty());
        assert_eq!(roots_neg1(2).unwrap().roots, vec![1]);
        assert_eq!(roots_neg1(1).unwrap().roots, vec![0]);
        assert_eq!(roots_neg1(65).unwrap().rho(), 4);
        assert_eq!(rho(13).unwrap(), 2);
        assert_eq!(rho(9).unwrap(), 0);
        assert_eq!(rho(1).unwrap(), 1);
        assert_eq!(rho(4).unwrap(), 0);
        assert!(roots_neg1(0).is_err());
    }

    #[test]
    fn hensel_lift_to_high_powers() {
        let m = 5u64.pow(17);
        let r = roots_neg1(m).unwrap();
        assert_eq!(r.rho(), 2);
        for &v in &r.roots {
            assert_eq!((mul_mod(v, v, m) + 1) % m, 0);
        }
    }

    #[test]
    fn large_modulus() {
        let m = 999_999_000_001u64; // 10^12 − 10^6 + 1
        let r = roots_neg1(m).unwrap();
        assert_eq!(r.rho(), rho(m).unwrap());
        for &v in &r.roots {
            assert_eq!((mul_mod(v, v, m) + 1) % m, 0);
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let t = rho_table(5000);
        for m in 1..=5000u64 {
            assert_eq!(t[m as usize] as u64, rho(m).unwrap());
        }
    }

    #[test]
    fn small_oracle_suite() {
        assert!(rho_oracle_check(500).unwrap().passed());
        assert!(rho_multiplicativity_check(200, 1000, 7).unwrap().passed());
    }

    proptest::proptest! {
        #[test]
        fn roots_are_roots(m in 1u64..10_000_000) {
            let r = roots_neg1(m).unwrap();
            proptest::prop_assert_eq!(r.rho(), rho(m).unwrap());
            for &v in &r.roots {
                proptest::prop_assert_eq!((mul_mod(v, v, m) + 1) % m, 0);
            }
        }
    }
}
