//! Smooth weights and the congruence counts `|A_d| = Σ_{ν²+1 ≡ 0 (d)} b(n)`:
//! direct evaluation against the main term `X ρ(d)/d` and truncated Poisson
//! summation.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::modular::is_squarefree;
use super::roots::roots_neg1;
use super::CheckReport;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, GridSpec};

/// Truncation exponent `ε` in `H = (d/x) x^ε`.
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const MIN_X: u64 = 1_000;
pub const MAX_D: u64 = 1_000_000;

/// `t ↦ e⁴ exp(−1/((t − 1)(2 − t)))` on `(1, 2)`, scaled to peak 1.
pub fn bump(t: f64) -> f64 {
    if t <= 1.0 || t >= 2.0 {
        0.0
    } else {
        (4.0 - 1.0 / ((t - 1.0) * (2.0 - t))).exp()
    }
}

fn fine_grid() -> GridSpec {
    GridSpec {
        rel_tol: 1e-13,
        ..GridSpec::adaptive()
    }
}

/// `b(ξ) = w(ξ/x)` with the bump profile `w`, supported on `[x, 2x]`.
pub struct SmoothWeight {
    x: u64,
    profile_mass: f64,
    transforms: Mutex<HashMap<(i64, u64), Complex64>>,
}

impl std::fmt::Debug for SmoothWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothWeight").field("x", &self.x).finish()
    }
}

impl SmoothWeight {
    pub fn new(x: u64) -> Result<Self> {
        if x < MIN_X {
            return Err(Error::domain(format!("scale x must be at least 10^3, got {x}")));
        }
        let profile_mass = integrate_1d(bump, 1.0, 2.0, &fine_grid())?.value;
        Ok(SmoothWeight {
            x,
            profile_mass,
            transforms: Mutex::new(HashMap::new()),
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn at(&self, n: f64) -> f64 {
        bump(n / self.x as f64)
    }

    /// `X = ∫ b(ξ) dξ`.
    pub fn mass(&self) -> f64 {
        self.x as f64 * self.profile_mass
    }

    /// `b̂(h/d) = ∫ b(ξ) e(−ξh/d) dξ`, cached by the reduced fraction.
    pub fn transform(&self, h: i64, d: u64) -> Result<Complex64> {
        let g = num_integer::gcd(h.unsigned_abs(), d).max(1);
        let key = (h / g as i64, d / g);
        if let Some(v) = self.transforms.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let y = self.x as f64 * key.0 as f64 / key.1 as f64;
        let w = std::f64::consts::TAU * y;
        let grid = fine_grid().with_split_points(0, vec![1.25, 1.5, 1.75]);
        let re = integrate_1d(|t| bump(t) * (w * t).cos(), 1.0, 2.0, &grid)?.value;
        let im = integrate_1d(|t| -bump(t) * (w * t).sin(), 1.0, 2.0, &grid)?.value;
        let v = Complex64::new(re, im) * self.x as f64;
        self.transforms.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// `Σ_{n ≡ ν (d)} b(n)` by direct summation over `x < n < 2x`.
    pub fn class_sum(&self, nu: u64, d: u64) -> f64 {
        let x = self.x;
        let first = x + 1 + (nu + d - (x + 1) % d) % d;
        let terms: Vec<f64> = (first..2 * x).step_by(d as usize).map(|n| self.at(n as f64)).collect();
        crate::quadrature::pairwise_sum(&terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceCount {
    pub d: u64,
    pub rho: u64,
    pub exact: f64,
    pub main: f64,
    pub poisson: f64,
    /// Number of frequencies `1 ≤ h ≤ H` used (each with its negative).
    pub frequencies: u64,
}

pub fn count_a_d(weight: &SmoothWeight, d: u64) -> Result<CongruenceCount> {
    count_a_d_with(weight, d, DEFAULT_EPSILON)
}

/// `(exact, main, poisson)` for `|A_d|`, with `H = (d/x) x^ε`.
pub fn count_a_d_with(weight: &SmoothWeight, d: u64, epsilon: f64) -> Result<CongruenceCount> {
    if d == 0 || d > MAX_D {
        return Err(Error::domain(format!("d must lie in [1, 10^6], got {d}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let roots = roots_neg1(d)?.roots;
    if roots.is_empty() {
        return Ok(CongruenceCount {
            d,
            rho: 0,
            exact: 0.0,
            main: 0.0,
            poisson: 0.0,
            frequencies: 0,
        });
    }
    let exact: f64 = roots.iter().map(|&nu| weight.class_sum(nu, d)).sum();
    let rho = roots.len() as u64;
    let main = weight.mass() * rho as f64 / d as f64;
    let xf = weight.x() as f64;
    let h_max = (d as f64 / xf * xf.powf(epsilon)).floor() as u64;
    let mut correction = 0.0;
    for h in 1..=h_max {
        // The root set is closed under ν ↦ −ν, so the character sum is real
        // and the ±h terms combine to 2 Re b̂(h/d) C(h).
        let c: f64 = roots
            .iter()
            .map(|&nu| (std::f64::consts::TAU * ((h as u128 * nu as u128) % d as u128) as f64 / d as f64).cos())
            .sum();
        correction += 2.0 * weight.transform(h as i64, d)?.re * c;
    }
    Ok(CongruenceCount {
        d,
        rho,
        exact,
        main,
        poisson: main + correction / d as f64,
        frequencies: h_max,
    })
}

/// `|exact − poisson| ≤ 10⁻³ max(1, exact)` for every `d ≤ d_max` with
/// `ρ(d) > 0`.
pub fn poisson_check(x: u64, d_max: u64, epsilon: f64) -> Result<CheckReport> {
    let weight = SmoothWeight::new(x)?;
    let table = super::roots::rho_table(d_max as usize);
    let ds: Vec<u64> = (1..=d_max).filter(|&d| table[d as usize] > 0).collect();
    let counts: Vec<CongruenceCount> = ds
        .par_iter()
        .map(|&d| count_a_d_with(&weight, d, epsilon))
        .collect::<Result<_>>()?;
    let mut report = CheckReport::new("poisson");
    for c in counts {
        let gap = (c.exact - c.poisson).abs();
        report.record(gap <= 1e-3 * c.exact.max(1.0), || {
            format!("d = {}: exact {} poisson {} gap {gap}", c.d, c.exact, c.poisson)
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Type2Comparison {
    pub m: u64,
    pub n: u64,
    /// `log(MN)/log x`.
    pub alpha: f64,
    /// `Σ a_m b_n |A_{mn}|`.
    pub lhs: f64,
    /// `X Σ a_m b_n ρ(mn)/(mn)`.
    pub main: f64,
    pub abs_diff: f64,
}

pub const MAX_TYPE2_PRODUCT: u64 = 1_000_000;

/// Bilinear sum over `m ∈ [M, 2M)`, `n ∈ [N, 2N)` by direct counting,
/// against its main term. `b` must vanish off square-free `n`.
pub fn type2_empirical(
    weight: &SmoothWeight,
    m_size: u64,
    n_size: u64,
    a: impl Fn(u64) -> f64 + Sync,
    b: impl Fn(u64) -> f64 + Sync,
) -> Result<Type2Comparison> {
    if m_size == 0 || n_size == 0 {
        return Err(Error::domain("M and N must be positive"));
    }
    if m_size.saturating_mul(n_size) > MAX_TYPE2_PRODUCT {
        return Err(Error::Resource(format!("M N = {} exceeds 10^6", m_size as u128 * n_size as u128)));
    }
    let mut ns = Vec::new();
    for n in n_size..2 * n_size {
        let bn = b(n);
        if bn != 0.0 {
            if !is_squarefree(n)? {
                return Err(Error::domain(format!("b is supported on square-free n, but b({n}) = {bn}")));
            }
            ns.push((n, bn));
        }
    }
    let mass = weight.mass();
    let rows: Vec<(f64, f64)> = (m_size..2 * m_size)
        .into_par_iter()
        .map(|m| {
            let am = a(m);
            let mut lhs = 0.0;
            let mut main = 0.0;
            if am != 0.0 {
                for &(n, bn) in &ns {
                    let c = count_a_d(weight, m * n)?;
                    lhs += am * bn * c.exact;
                    main += am * bn * mass * c.rho as f64 / (m * n) as f64;
                }
            }
            Ok((lhs, main))
        })
        .collect::<Result<_>>()?;
    let lhs: f64 = rows.iter().map(|r| r.0).sum();
    let main: f64 = rows.iter().map(|r| r.1).sum();
    Ok(Type2Comparison {
        m: m_size,
        n: n_size,
        alpha: ((m_size * n_size) as f64).ln() / (weight.x() as f64).ln(),
        lhs,
        main,
        abs_diff: (lhs - main).abs(),
    })
}
