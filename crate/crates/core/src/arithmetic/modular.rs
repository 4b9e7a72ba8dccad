//! Word-size modular arithmetic, primality and factorization.

use num_integer::Integer;

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`. `m = 1` gives `Some(0)`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_ITERATIONS: u64 = 1 << 24;

/// Brent's variant of Pollard rho with `f(y) = y² + c`.
fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |y: u64| (mul_mod(y, y, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    let mut spent = 0u64;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
        spent += r;
        if spent > RHO_ITERATIONS {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: u64, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    for c in 1..=16 {
        if let Some(d) = pollard_brent(n, c) {
            split_composite(d, out)?;
            return split_composite(n / d, out);
        }
    }
    Err(Error::Resource(format!("could not factor {n}")))
}

/// Prime factorization as sorted `(p, k)` pairs; `factorize(1)` is empty.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::domain("cannot factor 0"));
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut k = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    };
    push(2, &mut n);
    let mut p = 3;
    while p <= TRIAL_LIMIT && p * p <= n {
        push(p, &mut n);
        p += 2;
    }
    if n == 1 {
        return Ok(out);
    }
    if p * p > n {
        out.push((n, 1));
        return Ok(out);
    }
    let mut primes = Vec::new();
    split_composite(n, &mut primes)?;
    primes.sort_unstable();
    for q in primes {
        match out.last_mut() {
            Some((last, k)) if *last == q => *k += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

pub fn tau(n: u64) -> Result<u64> {
    Ok(factorize(n)?.iter().map(|&(_, k)| k as u64 + 1).product())
}

pub fn phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .iter()
        .map(|&(p, k)| (p - 1) * p.pow(k - 1))
        .product())
}

/// All positive divisors, sorted.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut ds = vec![1u64];
    for (p, k) in factorize(n)? {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    Ok(ds)
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.iter().all(|&(_, k)| k == 1))
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
