//! Deficiency integrals of the discarded sieve terms and the resulting
//! exponent budget.
//!
//! For a spectral exponent `θ` the range `1 ≤ α < a4` (with `P = x^α`) is cut
//! at the [`CaseBreakpoints`] into four cases. Each case contributes either
//! the full width of its `α`-interval (asymptotic formula) plus the
//! deficiency of what was discarded, or a linear-sieve upper bound minus a
//! recovered Type II part. The six terms are
//!
//! | term | `α`-range   | integrand                                                   | `ω` |
//! |------|-------------|-------------------------------------------------------------|-----|
//! | 1    | `[1, a1]`   | `α ω(α/β − 1)/β²`, `β ∈ [σ, α−2σ] ∪ [ξ, α/2]`               | upper |
//! | 2    | `[a1, a2]`  | same, `β ∈ [σ, α/2]`                                        | upper |
//! | 3    | `[a2, a3]`  | same, `β ∈ [σ_i, α/2]`                                      | upper |
//! | 4    | `[a2, a3]`  | `α ω((α−β₁−β₂−β₃)/β₃)/(β₁β₂β₃²)` on the discarded region    | upper |
//! | 5    | `[a3, a4]`  | linear sieve factor `4(1−2θ)α/(1−2θα)`                      | n/a |
//! | 6    | `[a3, a4]`  | `α ω(α/β − 1)/β²`, `β ∈ [α−1, σ_i]` (subtracted)            | lower |
//!
//! Terms are labelled `G1..G6` for `θ = 7/64`, `F1..F6` for `θ = 0` and
//! `T1..T6` otherwise.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::buchstab::{omega_unchecked, OmegaMode, BREAKPOINTS};
use crate::error::{Error, Result};
use crate::linear_sieve::linear_sieve_factor_f64;
use crate::params::{case_breakpoints, fmt_q, to_f64, Affine, CaseBreakpoints, ExponentLines, ThetaExponent, Q};
use crate::quadrature::{integrate_1d, integrate_region, GridSpec, NestedIntegrand};

/// One of the six deficiency terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TermId(u8);

impl TermId {
    pub const ALL: [TermId; 6] = [TermId(1), TermId(2), TermId(3), TermId(4), TermId(5), TermId(6)];

    pub fn new(index: u8) -> Result<Self> {
        if (1..=6).contains(&index) {
            Ok(TermId(index))
        } else {
            Err(Error::domain(format!("term index {index} outside 1..=6")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Prefix used for a given `θ`.
    pub fn prefix(theta: ThetaExponent) -> char {
        if theta.is_kim_sarnak() {
            'G'
        } else if theta.is_selberg() {
            'F'
        } else {
            'T'
        }
    }

    pub fn label(self, theta: ThetaExponent) -> String {
        format!("{}{}", Self::prefix(theta), self.0)
    }

    /// Parses `G1..G6` (requires `θ = 7/64`), `F1..F6` (requires `θ = 0`)
    /// or `T1..T6` (any `θ`).
    pub fn parse(s: &str, theta: ThetaExponent) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let prefix = chars.next().map(|c| c.to_ascii_uppercase());
        let index: u8 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::domain(format!("unknown term {s:?}")))?;
        let id = TermId::new(index)?;
        match prefix {
            Some('T') => Ok(id),
            Some('G') if theta.is_kim_sarnak() => Ok(id),
            Some('F') if theta.is_selberg() => Ok(id),
            Some('G') | Some('F') => Err(Error::domain(format!(
                "term {s} does not belong to theta = {theta}; use T{index} for a generic theta"
            ))),
            _ => Err(Error::domain(format!("unknown term {s:?}"))),
        }
    }

    /// `+1` for terms added to the budget, `−1` for the recovered term 6.
    pub fn sign(self) -> f64 {
        if self.0 == 6 {
            -1.0
        } else {
            1.0
        }
    }

    /// Envelope mode that keeps the budget an upper bound.
    pub fn default_mode(self) -> OmegaMode {
        if self.0 == 6 {
            OmegaMode::Lower
        } else {
            OmegaMode::Upper
        }
    }

    pub fn dims(self) -> usize {
        match self.0 {
            4 => 4,
            5 => 1,
            _ => 2,
        }
    }

    /// The `α`-interval of the term.
    pub fn interval(self, b: &CaseBreakpoints) -> (Q, Q) {
        match self.0 {
            1 => (Q::one(), b.a1),
            2 => (b.a1, b.a2),
            3 | 4 => (b.a2, b.a3),
            _ => (b.a3, b.a4),
        }
    }
}

/// One evaluated deficiency integral.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeficiencyTerm {
    pub id: TermId,
    pub label: String,
    #[serde(serialize_with = "ser_theta")]
    pub theta: ThetaExponent,
    pub mode: OmegaMode,
    #[serde(serialize_with = "ser_interval")]
    pub interval: (Q, Q),
    pub value: f64,
    pub err_estimate: f64,
    pub cells_evaluated: u64,
    pub grid: GridSpec,
    pub warning: Option<String>,
}

fn ser_theta<S: serde::Serializer>(t: &ThetaExponent, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn ser_interval<S: serde::Serializer>(iv: &(Q, Q), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&fmt_q(&iv.0))?;
    t.serialize_element(&fmt_q(&iv.1))?;
    t.end()
}

/// Grids used for the two kinds of term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermGrids {
    /// One- and two-dimensional terms.
    pub adaptive: GridSpec,
    /// The four-dimensional term.
    pub product: GridSpec,
}

impl Default for TermGrids {
    fn default() -> Self {
        TermGrids {
            adaptive: GridSpec::adaptive(),
            product: GridSpec::product(),
        }
    }
}

impl TermGrids {
    pub fn for_term(&self, id: TermId) -> &GridSpec {
        if id.dims() > 2 {
            &self.product
        } else {
            &self.adaptive
        }
    }

    pub fn doubled(&self) -> Self {
        TermGrids {
            adaptive: self.adaptive.doubled(),
            product: self.product.doubled(),
        }
    }
}

/// `α · ω((α − Σβ)/β_k) / (β_1 ⋯ β_{k−1} β_k²)`.
pub fn deficiency_integrand(alpha: f64, betas: &[f64], mode: OmegaMode) -> Result<f64> {
    if betas.is_empty() || betas.len() > 3 {
        return Err(Error::domain(format!("expected 1 to 3 betas, got {}", betas.len())));
    }
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0)) {
        return Err(Error::domain(format!("beta must be positive, got {b}")));
    }
    let last = *betas.last().unwrap();
    let u = (alpha - betas.iter().sum::<f64>()) / last;
    if u < 1.0 {
        return Ok(0.0);
    }
    let w = crate::buchstab::omega(u, mode)?;
    let denom: f64 = betas.iter().product::<f64>() * last;
    Ok(alpha * w / denom)
}

/// Membership in the region discarded in the three-fold decomposition:
/// `γ < β₃ < β₂ < β₁ < α − 1` and no partial sum of two or three `β`s in the
/// Type II range `[α − 1, σ_i]`.
pub fn region_g4_indicator(alpha: f64, b1: f64, b2: f64, b3: f64, theta: ThetaExponent) -> bool {
    let lines = ExponentLines::new(theta);
    let gamma = lines.gamma_cut.at_f64(alpha);
    let sigma = lines.sigma_i.at_f64(alpha);
    let h = alpha - 1.0;
    let ordered = gamma < b3 && b3 < b2 && b2 < b1 && b1 < h;
    let outside = |v: f64| v < h || v > sigma;
    ordered && outside(b1 + b2) && outside(b1 + b3) && outside(b2 + b3) && outside(b1 + b2 + b3)
}

/// `base` with every interval in `excluded` removed.
fn subtract(base: (f64, f64), excluded: &[(f64, f64)], out: &mut Vec<(f64, f64)>) {
    let mut ex: Vec<(f64, f64)> = excluded.iter().copied().filter(|(a, b)| b > a).collect();
    ex.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut cursor = base.0;
    for (a, b) in ex {
        if b <= cursor {
            continue;
        }
        if a >= base.1 {
            break;
        }
        if a > cursor {
            out.push((cursor, a));
        }
        cursor = cursor.max(b);
    }
    if cursor < base.1 {
        out.push((cursor, base.1));
    }
}

/// Cuts `(lo, hi)` where `ω(num/β − c)` crosses an envelope breakpoint, i.e.
/// at `β = num/(c + u*)`.
fn split_at_envelope(lo: f64, hi: f64, num: f64, out: &mut Vec<(f64, f64)>) {
    let mut cuts: Vec<f64> = BREAKPOINTS
        .iter()
        .map(|u| num / (1.0 + u))
        .filter(|&b| b > lo && b < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut a = lo;
    for c in cuts {
        out.push((a, c));
        a = c;
    }
    out.push((a, hi));
}

/// `α` where `α / L(α) − 1` equals an envelope breakpoint.
fn envelope_crossings(limit: &Affine, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let c0 = to_f64(&limit.c0);
    let c1 = to_f64(&limit.c1);
    for u in BREAKPOINTS {
        let den = 1.0 - (1.0 + u) * c1;
        if den != 0.0 {
            let a = (1.0 + u) * c0 / den;
            if a > lo && a < hi {
                out.push(a);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SingleKind {
    /// `[σ, α−2σ] ∪ [ξ, α/2]`
    Small,
    /// `[σ, α/2]`
    Medium,
    /// `[σ_i, α/2]`
    Large,
    /// `[α−1, σ_i]`
    Recovered,
}

struct SingleBeta {
    alpha: (f64, f64),
    lines: ExponentLines,
    kind: SingleKind,
    mode: OmegaMode,
}

impl SingleBeta {
    fn ranges(&self, a: f64, out: &mut Vec<(f64, f64)>) {
        let l = &self.lines;
        match self.kind {
            SingleKind::Small => {
                let s = l.sigma_f64(a);
                out.push((s, a - 2.0 * s));
                out.push((l.xi.at_f64(a), a / 2.0));
            }
            SingleKind::Medium => out.push((l.sigma_f64(a), a / 2.0)),
            SingleKind::Large => out.push((l.sigma_i.at_f64(a), a / 2.0)),
            SingleKind::Recovered => out.push((a - 1.0, l.sigma_i.at_f64(a))),
        }
    }

    /// Outer split points: kinks of `σ` and envelope crossings of the limits.
    fn alpha_splits(&self) -> Vec<f64> {
        let (lo, hi) = self.alpha;
        let l = &self.lines;
        let mut out = Vec::new();
        let cross = to_f64(&(l.sigma_i - l.sigma_ii).root().unwrap());
        if cross > lo && cross < hi {
            out.push(cross);
        }
        let alpha = Affine::new(Q::zero(), Q::one());
        let two = Q::from_integer(2);
        let limits = [
            l.sigma_i,
            l.sigma_ii,
            l.xi,
            l.h_exp,
            alpha - l.sigma_i * two,
            alpha - l.sigma_ii * two,
        ];
        for lim in &limits {
            envelope_crossings(lim, lo, hi, &mut out);
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

impl NestedIntegrand for SingleBeta {
    fn dims(&self) -> usize {
        2
    }

    fn pieces(&self, axis: usize, outer: &[f64], out: &mut Vec<(f64, f64)>) {
        if axis == 0 {
            out.push(self.alpha);
            return;
        }
        let a = outer[0];
        let mut ranges = Vec::with_capacity(2);
        self.ranges(a, &mut ranges);
        for (lo, hi) in ranges {
            if hi > lo {
                split_at_envelope(lo, hi, a, out);
            }
        }
    }

    fn eval(&self, p: &[f64]) -> f64 {
        let (a, b) = (p[0], p[1]);
        a * omega_unchecked(a / b - 1.0, self.mode) / (b * b)
    }
}

struct TripleBeta {
    alpha: (f64, f64),
    lines: ExponentLines,
    mode: OmegaMode,
}

impl NestedIntegrand for TripleBeta {
    fn dims(&self) -> usize {
        4
    }

    fn pieces(&self, axis: usize, outer: &[f64], out: &mut Vec<(f64, f64)>) {
        if axis == 0 {
            out.push(self.alpha);
            return;
        }
        let a = outer[0];
        let h = a - 1.0;
        let gamma = self.lines.gamma_cut.at_f64(a);
        let sigma = self.lines.sigma_i.at_f64(a);
        match axis {
            1 => {
                if h > gamma {
                    out.push((gamma, h));
                }
            }
            2 => {
                let b1 = outer[1];
                subtract((gamma, b1), &[(h - b1, sigma - b1)], out);
            }
            _ => {
                let (b1, b2) = (outer[1], outer[2]);
                let mut allowed = Vec::with_capacity(4);
                subtract(
                    (gamma, b2),
                    &[(h - b1, sigma - b1), (h - b2, sigma - b2), (h - b1 - b2, sigma - b1 - b2)],
                    &mut allowed,
                );
                for (lo, hi) in allowed {
                    split_at_envelope(lo, hi, a - b1 - b2, out);
                }
            }
        }
    }

    fn eval(&self, p: &[f64]) -> f64 {
        let (a, b1, b2, b3) = (p[0], p[1], p[2], p[3]);
        let u = (a - b1 - b2 - b3) / b3;
        a * omega_unchecked(u, self.mode) / (b1 * b2 * b3 * b3)
    }
}

/// Evaluates term `id` over an explicit `α`-interval.
pub fn compute_term_on(
    id: TermId,
    theta: ThetaExponent,
    interval: (Q, Q),
    grid: &GridSpec,
    mode: OmegaMode,
) -> Result<DeficiencyTerm> {
    if mode == OmegaMode::Exact && id.index() != 5 {
        return Err(Error::domain(
            "deficiency terms need an envelope mode (upper or lower); exact omega stops at u = 3".to_string(),
        ));
    }
    if interval.1 < interval.0 {
        return Err(Error::domain(format!(
            "empty term interval [{}, {}]",
            fmt_q(&interval.0),
            fmt_q(&interval.1)
        )));
    }
    let lines = ExponentLines::new(theta);
    let alpha = (to_f64(&interval.0), to_f64(&interval.1));
    let result = if interval.0 == interval.1 {
        crate::quadrature::IntegralResult {
            value: 0.0,
            err_estimate: 0.0,
            cells_evaluated: 0,
            converged: true,
        }
    } else {
        match id.index() {
            5 => integrate_1d(
                |a| linear_sieve_factor_f64(a, theta).unwrap_or(f64::NAN),
                alpha.0,
                alpha.1,
                grid,
            )?,
            4 => integrate_region(&TripleBeta { alpha, lines, mode }, grid)?,
            i => {
                let kind = match i {
                    1 => SingleKind::Small,
                    2 => SingleKind::Medium,
                    3 => SingleKind::Large,
                    _ => SingleKind::Recovered,
                };
                let region = SingleBeta {
                    alpha,
                    lines,
                    kind,
                    mode,
                };
                let grid = grid.clone().with_split_points(0, region.alpha_splits());
                integrate_region(&region, &grid)?
            }
        }
    };
    let warning = (!result.converged).then(|| {
        format!(
            "quadrature stopped above tolerance (error estimate {:.3e})",
            result.err_estimate
        )
    });
    Ok(DeficiencyTerm {
        id,
        label: id.label(theta),
        theta,
        mode,
        interval,
        value: result.value,
        err_estimate: result.err_estimate,
        cells_evaluated: result.cells_evaluated,
        grid: grid.clone(),
        warning,
    })
}

fn ordered_breakpoints(theta: ThetaExponent) -> Result<CaseBreakpoints> {
    let b = case_breakpoints(theta);
    if !b.is_ordered() {
        return Err(Error::domain(format!(
            "case breakpoints are not ordered for theta = {theta} (needs theta < 1/5)"
        )));
    }
    Ok(b)
}

/// Evaluates term `id` with its default envelope mode.
pub fn compute_term(id: TermId, theta: ThetaExponent, grid: &GridSpec) -> Result<DeficiencyTerm> {
    compute_term_with_mode(id, theta, grid, id.default_mode())
}

pub fn compute_term_with_mode(
    id: TermId,
    theta: ThetaExponent,
    grid: &GridSpec,
    mode: OmegaMode,
) -> Result<DeficiencyTerm> {
    let b = ordered_breakpoints(theta)?;
    compute_term_on(id, theta, id.interval(&b), grid, mode)
}

/// `4(1 − 2θ) ∫_a^b α/(1 − 2θα) dα`.
pub fn tail_integral(a: Q, b: f64, theta: ThetaExponent) -> Result<f64> {
    let a = to_f64(&a);
    if !(b >= a) {
        return Err(Error::domain(format!("tail integral needs a <= b, got a = {a}, b = {b}")));
    }
    let c = 2.0 * theta.to_f64();
    if c > 0.0 && b >= 1.0 / c {
        return Err(Error::domain(format!(
            "tail integral upper limit {b} reaches the pole 1/(2 theta) = {}",
            1.0 / c
        )));
    }
    let w = b - a;
    let denom = 1.0 - c * a;
    let t = c * w / denom;
    // (−ln(1 − t) − t)/t², continued to t = 0.
    let g = if t.abs() < 1e-3 {
        0.5 + t / 3.0 + t * t / 4.0 + t * t * t / 5.0 + t.powi(4) / 6.0
    } else {
        (-(-t).ln_1p() - t) / (t * t)
    };
    let w_scaled = w / denom;
    Ok(4.0 * (1.0 - c) * (a * w_scaled + w_scaled * w_scaled * g))
}

/// Assembled budget for one `θ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetLedger {
    #[serde(serialize_with = "ser_theta")]
    pub theta: ThetaExponent,
    #[serde(skip)]
    pub breakpoints: CaseBreakpoints,
    /// `a3 − 1`: the cases with asymptotic formulas contribute their width.
    #[serde(serialize_with = "ser_q")]
    pub base: Q,
    pub terms: Vec<DeficiencyTerm>,
    pub varpi_solved: Option<f64>,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(v))
}

impl BudgetLedger {
    /// A ledger with prescribed term values (no quadrature).
    pub fn from_values(theta: ThetaExponent, values: [f64; 6]) -> Result<Self> {
        let b = ordered_breakpoints(theta)?;
        let terms = TermId::ALL
            .iter()
            .zip(values)
            .map(|(&id, value)| DeficiencyTerm {
                id,
                label: id.label(theta),
                theta,
                mode: id.default_mode(),
                interval: id.interval(&b),
                value,
                err_estimate: 0.0,
                cells_evaluated: 0,
                grid: GridSpec::for_dims(id.dims()),
                warning: None,
            })
            .collect();
        Ok(BudgetLedger {
            theta,
            breakpoints: b,
            base: b.a3 - Q::one(),
            terms,
            varpi_solved: None,
        })
    }

    pub fn term(&self, id: TermId) -> Option<&DeficiencyTerm> {
        self.terms.iter().find(|t| t.id == id)
    }

    /// `T1 + T2 + T3 + T4 + T5 − T6`.
    pub fn signed_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.id.sign() * t.value).sum()
    }

    /// Budget used by `x ≤ P ≤ x^{a4}`.
    pub fn base_plus_terms(&self) -> f64 {
        to_f64(&self.base) + self.signed_sum()
    }

    /// Linear sieve contribution of `x^{a4} ≤ P ≤ x^ϖ`.
    pub fn tail(&self, varpi: f64) -> Result<f64> {
        tail_integral(self.breakpoints.a4, varpi, self.theta)
    }

    pub fn total(&self, varpi: f64) -> Result<f64> {
        Ok(self.base_plus_terms() + self.tail(varpi)?)
    }
}

/// Evaluates all six terms (in parallel) and solves for `ϖ`.
pub fn total_budget(theta: ThetaExponent, grids: &TermGrids) -> Result<BudgetLedger> {
    let b = ordered_breakpoints(theta)?;
    let terms: Vec<DeficiencyTerm> = TermId::ALL
        .par_iter()
        .map(|&id| compute_term(id, theta, grids.for_term(id)))
        .collect::<Result<_>>()?;
    let mut ledger = BudgetLedger {
        theta,
        breakpoints: b,
        base: b.a3 - Q::one(),
        terms,
        varpi_solved: None,
    };
    ledger.varpi_solved = solve_varpi(&ledger).ok();
    Ok(ledger)
}

/// Largest `ϖ` with `total(ϖ) ≤ 1`, by bisection on `[a4, pole)`.
pub fn solve_varpi(ledger: &BudgetLedger) -> Result<f64> {
    let theta = ledger.theta;
    let mut lo = to_f64(&ledger.breakpoints.a4);
    let c = 2.0 * theta.to_f64();
    let mut hi = if c > 0.0 { (1.0 / c) * (1.0 - 1e-12) } else { 1.5 };
    let excess = |v: f64| ledger.total(v).map(|t| t - 1.0);
    let at_lo = excess(lo)?;
    if at_lo >= 0.0 {
        return Err(Error::Infeasible(format!(
            "budget already exhausted at alpha = {lo}: total = {}",
            at_lo + 1.0
        )));
    }
    if excess(hi)? <= 0.0 {
        return Err(Error::Infeasible(format!("total stays below 1 up to {hi}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let e = excess(mid)?;
        debug_assert!(excess(lo)? < 0.0 && excess(hi)? > 0.0);
        if e.abs() < 1e-13 {
            return Ok(mid);
        }
        if e < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let residual = excess(root)?.abs();
    if residual >= 1e-9 {
        return Err(Error::Consistency(format!(
            "bisection ended with |total - 1| = {residual}"
        )));
    }
    Ok(root)
}
