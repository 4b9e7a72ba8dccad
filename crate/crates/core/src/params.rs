//! Exact rational bookkeeping of the sieve exponents.
//!
//! Every exponent the case analysis depends on is an affine function of
//! `α` (where `P = x^α`) with coefficients rational in `θ`. They are carried
//! as [`Affine`] forms over [`Q`] so that breakpoints such as `758/733` come
//! out bit-exact; floats only appear when a quadrature asks for them.
//!
//! All `η`/`ε` bookkeeping exponents are taken to be zero.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for all exponents.
pub type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Converts an exact rational to the nearest `f64`.
pub fn to_f64(v: &Q) -> f64 {
    // i128 -> f64 keeps 53 bits of each part; the quotient is then correctly
    // rounded up to one ulp, which is all the quadrature boundaries need.
    v.numer().to_f64().unwrap() / v.denom().to_f64().unwrap()
}

/// Formats a rational as `p/q` (or `p` when the denominator is one).
pub fn fmt_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"p/q"` or an integer. Decimal notation is rejected so that no
/// silent rounding enters an exact computation.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::domain(format!("expected a rational of the form p/q, got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = i128::from_str(n).map_err(|_| bad())?;
    let d = i128::from_str(d).map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// The spectral-gap exponent `θ` entering the level of distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaExponent(Q);

impl ThetaExponent {
    /// Any rational in `[0, 1/4)`.
    pub fn new(theta: Q) -> Result<Self> {
        if theta.is_negative() || theta >= q(1, 4) {
            return Err(Error::domain(format!(
                "theta = {} must lie in [0, 1/4)",
                fmt_q(&theta)
            )));
        }
        Ok(ThetaExponent(theta))
    }

    /// `θ = 7/64`, the Kim–Sarnak exponent.
    pub fn kim_sarnak() -> Self {
        ThetaExponent(q(7, 64))
    }

    /// `θ = 0`, Selberg's eigenvalue conjecture.
    pub fn selberg() -> Self {
        ThetaExponent(Q::zero())
    }

    pub fn value(&self) -> Q {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    pub fn is_kim_sarnak(&self) -> bool {
        self.0 == q(7, 64)
    }

    pub fn is_selberg(&self) -> bool {
        self.0.is_zero()
    }
}

impl FromStr for ThetaExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ThetaExponent::new(parse_q(s)?)
    }
}

impl fmt::Display for ThetaExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.0))
    }
}

/// `c0 + c1·α` with exact coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub c0: Q,
    pub c1: Q,
}

impl Affine {
    pub fn new(c0: Q, c1: Q) -> Self {
        Affine { c0, c1 }
    }

    pub fn at(&self, alpha: Q) -> Q {
        self.c0 + self.c1 * alpha
    }

    pub fn at_f64(&self, alpha: f64) -> f64 {
        to_f64(&self.c0) + to_f64(&self.c1) * alpha
    }

    /// The unique zero, if the form is not constant.
    pub fn root(&self) -> Option<Q> {
        if self.c1.is_zero() {
            None
        } else {
            Some(-self.c0 / self.c1)
        }
    }
}

impl std::ops::Sub for Affine {
    type Output = Affine;
    fn sub(self, rhs: Affine) -> Affine {
        Affine::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

impl std::ops::Add for Affine {
    type Output = Affine;
    fn add(self, rhs: Affine) -> Affine {
        Affine::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl std::ops::Mul<Q> for Affine {
    type Output = Affine;
    fn mul(self, k: Q) -> Affine {
        Affine::new(self.c0 * k, self.c1 * k)
    }
}

/// The exponent forms for a fixed `θ`, as functions of `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentLines {
    pub theta: ThetaExponent,
    /// Level of distribution `D = x^{d_exp}`.
    pub d_exp: Affine,
    /// Upper end of the Type II range, variant (i).
    pub sigma_i: Affine,
    /// Upper end of the Type II range for prime `n`, variant (ii).
    pub sigma_ii: Affine,
    /// `U = x^ξ`, the reach of the fundamental propositions.
    pub xi: Affine,
    /// `σ_i − (α − 1)`, the sifting limit of the second fundamental proposition.
    pub gamma_cut: Affine,
    /// `α − 1`, the lower end of the Type II range.
    pub h_exp: Affine,
}

impl ExponentLines {
    pub fn new(theta: ThetaExponent) -> Self {
        let t = theta.value();
        let one = Q::one();
        let two = q(2, 1);
        let three = q(3, 1);
        let d_den = two - q(4, 1) * t;
        let d_exp = Affine::new(one / d_den, -two * t / d_den);
        let sigma_i = Affine::new((two - two * t) / three, q(-1, 3));
        let ii_den = three - q(6, 1) * t;
        let sigma_ii = Affine::new(q(4, 1) / ii_den, -(three + two * t) / ii_den);
        let h_exp = Affine::new(-one, one);
        let xi = d_exp - h_exp;
        let gamma_cut = sigma_i - h_exp;
        ExponentLines {
            theta,
            d_exp,
            sigma_i,
            sigma_ii,
            xi,
            gamma_cut,
            h_exp,
        }
    }

    /// `σ = max(σ_i, σ_ii)`.
    pub fn sigma(&self, alpha: Q) -> Q {
        self.sigma_i.at(alpha).max(self.sigma_ii.at(alpha))
    }

    pub fn sigma_f64(&self, alpha: f64) -> f64 {
        self.sigma_i.at_f64(alpha).max(self.sigma_ii.at_f64(alpha))
    }
}

/// All derived exponents at one value of `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveExponents {
    pub theta: ThetaExponent,
    pub alpha: Q,
    pub sigma_i: Q,
    pub sigma_ii: Q,
    pub sigma: Q,
    pub xi: Q,
    pub gamma_cut: Q,
    pub d_exp: Q,
    pub u_exp: Q,
    pub h_exp: Q,
}

/// Derives every exponent at `P = x^α`, exactly.
pub fn derive_exponents(alpha: Q, theta: ThetaExponent) -> Result<SieveExponents> {
    if alpha < Q::one() || alpha >= q(3, 2) {
        return Err(Error::domain(format!(
            "alpha = {} must lie in [1, 3/2)",
            fmt_q(&alpha)
        )));
    }
    let lines = ExponentLines::new(theta);
    let xi = lines.xi.at(alpha);
    Ok(SieveExponents {
        theta,
        alpha,
        sigma_i: lines.sigma_i.at(alpha),
        sigma_ii: lines.sigma_ii.at(alpha),
        sigma: lines.sigma(alpha),
        xi,
        gamma_cut: lines.gamma_cut.at(alpha),
        d_exp: lines.d_exp.at(alpha),
        u_exp: xi,
        h_exp: lines.h_exp.at(alpha),
    })
}

/// The `α`-values separating the cases of the sieve decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseBreakpoints {
    pub theta: ThetaExponent,
    /// `α − 2σ(α) = ξ(α)`: end of the range where `q ≥ x^{α−2σ}` can be recovered.
    pub a1: Q,
    /// `σ_i(α) = 2(α − 1)`: end of the first fundamental proposition.
    pub a2: Q,
    /// `2(α − 1) = ξ(α)`: end of the second fundamental proposition.
    pub a3: Q,
    /// `σ_i(α) = α − 1`: end of the Type II range.
    pub a4: Q,
    /// `σ_i(α) = σ_ii(α)`.
    pub crossover: Q,
}

impl CaseBreakpoints {
    /// `1 < a1 < a2 < a3 < a4`; holds for `θ < 1/5`.
    pub fn is_ordered(&self) -> bool {
        Q::one() < self.a1 && self.a1 < self.a2 && self.a2 < self.a3 && self.a3 < self.a4
    }

    pub fn as_array(&self) -> [Q; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.crossover]
    }
}

/// Solves the defining equations of the breakpoints exactly.
pub fn case_breakpoints(theta: ThetaExponent) -> CaseBreakpoints {
    let lines = ExponentLines::new(theta);
    let two = q(2, 1);
    let alpha = Affine::new(Q::zero(), Q::one());

    let crossover = (lines.sigma_i - lines.sigma_ii).root().unwrap();
    // α − 2σ − ξ is strictly increasing and piecewise affine with a kink at
    // the crossover, so exactly one of the two branch roots is consistent.
    let via_ii = (alpha - lines.sigma_ii * two - lines.xi).root().unwrap();
    let a1 = if via_ii <= crossover {
        via_ii
    } else {
        (alpha - lines.sigma_i * two - lines.xi).root().unwrap()
    };
    let a2 = (lines.sigma_i - lines.h_exp * two).root().unwrap();
    let a3 = (lines.h_exp * two - lines.xi).root().unwrap();
    let a4 = (lines.sigma_i - lines.h_exp).root().unwrap();
    CaseBreakpoints {
        theta,
        a1,
        a2,
        a3,
        a4,
        crossover,
    }
}
