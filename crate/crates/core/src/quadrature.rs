//! Deterministic composite Gauss–Legendre quadrature in one to four
//! dimensions.
//!
//! One- and two-dimensional integrals are adaptive: every axis range is cut
//! into pieces (caller-supplied smooth pieces, further split at
//! [`GridSpec::split_points`]), each piece into initial cells, and a cell is
//! bisected while the ten-point rule on the cell disagrees with the rule on
//! its two halves by more than the tolerance.
//!
//! Three- and four-dimensional integrals use a fixed product grid with a
//! two-point rule per cell. The reported error is the difference to the same
//! computation on a grid with half as many cells per axis.
//!
//! Only the outermost axis is evaluated in parallel. Cell values are collected
//! by index and reduced by pairwise summation, so the result is bit-identical
//! for any thread count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Maximum number of nested dimensions.
pub const MAX_DIMS: usize = 4;

const ADAPTIVE_ORDER: usize = 10;
const PRODUCT_ORDER: usize = 2;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn apply<F>(&self, f: &F, lo: f64, hi: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64> + ?Sized,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

fn rule(order: usize) -> &'static GaussLegendre {
    static ADAPTIVE: OnceLock<GaussLegendre> = OnceLock::new();
    static PRODUCT: OnceLock<GaussLegendre> = OnceLock::new();
    match order {
        ADAPTIVE_ORDER => ADAPTIVE.get_or_init(|| GaussLegendre::new(ADAPTIVE_ORDER)),
        PRODUCT_ORDER => PRODUCT.get_or_init(|| GaussLegendre::new(PRODUCT_ORDER)),
        _ => unreachable!("unsupported rule order {order}"),
    }
}

/// Pairwise (cascade) summation; the reduction tree depends only on the
/// length of the slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Grid and tolerance settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    /// Initial cells on the outermost axis.
    pub outer_cells: usize,
    /// Initial cells on every inner axis.
    pub inner_cells: usize,
    /// Maximum bisection depth of an initial cell (adaptive mode only).
    pub refinement_depth: u32,
    pub rel_tol: f64,
    /// Mandatory cell boundaries, per axis.
    pub split_points: Vec<Vec<f64>>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::adaptive()
    }
}

impl GridSpec {
    /// Defaults for one and two dimensions.
    pub fn adaptive() -> Self {
        GridSpec {
            outer_cells: 64,
            inner_cells: 64,
            refinement_depth: 12,
            rel_tol: 1e-8,
            split_points: Vec::new(),
        }
    }

    /// Defaults for the fixed product grid used in three and four dimensions.
    pub fn product() -> Self {
        GridSpec {
            outer_cells: 32,
            inner_cells: 48,
            refinement_depth: 0,
            rel_tol: 1e-2,
            split_points: Vec::new(),
        }
    }

    pub fn for_dims(dims: usize) -> Self {
        if dims <= 2 {
            GridSpec::adaptive()
        } else {
            GridSpec::product()
        }
    }

    /// Every cell count doubled.
    pub fn doubled(&self) -> Self {
        GridSpec {
            outer_cells: self.outer_cells * 2,
            inner_cells: self.inner_cells * 2,
            ..self.clone()
        }
    }

    pub fn with_split_points(mut self, axis: usize, points: Vec<f64>) -> Self {
        if self.split_points.len() <= axis {
            self.split_points.resize(axis + 1, Vec::new());
        }
        self.split_points[axis] = points;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.outer_cells < 8 || self.inner_cells < 8 {
            return Err(Error::domain(format!(
                "grid needs at least 8 cells per axis (outer {}, inner {})",
                self.outer_cells, self.inner_cells
            )));
        }
        if !(1e-14..=1e-2).contains(&self.rel_tol) {
            return Err(Error::domain(format!(
                "rel_tol {} outside [1e-14, 1e-2]",
                self.rel_tol
            )));
        }
        if self.refinement_depth > 40 {
            return Err(Error::domain("refinement depth above 40".to_string()));
        }
        Ok(())
    }

    fn cells(&self, axis: usize) -> usize {
        if axis == 0 {
            self.outer_cells
        } else {
            self.inner_cells
        }
    }

    fn splits(&self, axis: usize) -> &[f64] {
        self.split_points.get(axis).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub err_estimate: f64,
    pub cells_evaluated: u64,
    /// False when some cell hit the depth limit above tolerance.
    pub converged: bool,
}

/// A region with one to four nested axes and an integrand on it.
///
/// Axis `k` may depend on the coordinates of axes `0..k`. Each axis is given
/// as a list of pieces on which the integrand is smooth; gaps between pieces
/// are outside the region.
pub trait NestedIntegrand: Sync {
    fn dims(&self) -> usize;

    /// Appends the pieces of axis `axis` given `outer = [x_0, .., x_{axis-1}]`.
    fn pieces(&self, axis: usize, outer: &[f64], out: &mut Vec<(f64, f64)>);

    fn eval(&self, point: &[f64]) -> f64;
}

#[derive(Default)]
struct Tally {
    cells: AtomicU64,
    unconverged: AtomicBool,
}

/// Splits `pieces` at `splits`, drops empty ones and distributes `cells`
/// among them in proportion to their length (at least one each).
fn cell_layout(pieces: &[(f64, f64)], splits: &[f64], cells: usize) -> Vec<(f64, f64)> {
    let mut parts = Vec::with_capacity(pieces.len() + splits.len());
    for &(lo, hi) in pieces {
        if !(hi > lo) {
            continue;
        }
        let mut cuts: Vec<f64> = splits.iter().copied().filter(|&s| s > lo && s < hi).collect();
        cuts.sort_by(f64::total_cmp);
        let mut a = lo;
        for c in cuts {
            parts.push((a, c));
            a = c;
        }
        parts.push((a, hi));
    }
    let total: f64 = parts.iter().map(|(a, b)| b - a).sum();
    if parts.is_empty() || !(total > 0.0) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(cells + parts.len());
    for (a, b) in parts {
        let n = ((cells as f64) * (b - a) / total).round().max(1.0) as usize;
        let h = (b - a) / n as f64;
        for i in 0..n {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
            out.push((lo, hi));
        }
    }
    out
}

struct CellOutcome {
    value: f64,
    err: f64,
}

struct Adaptive<'t> {
    rule: &'static GaussLegendre,
    rel_tol: f64,
    max_depth: u32,
    scale_density: f64,
    tally: &'t Tally,
}

impl Adaptive<'_> {
    fn refine<F>(&self, f: &F, lo: f64, hi: f64, whole: f64, depth: u32, out: &mut Vec<CellOutcome>) -> Result<()>
    where
        F: Fn(f64) -> Result<f64> + ?Sized,
    {
        let mid = 0.5 * (lo + hi);
        let left = self.rule.apply(f, lo, mid)?;
        let right = self.rule.apply(f, mid, hi)?;
        self.tally.cells.fetch_add(2, Ordering::Relaxed);
        let est = left + right;
        let err = (est - whole).abs();
        let tol = self.rel_tol * est.abs().max(self.scale_density * (hi - lo));
        if err <= tol || depth >= self.max_depth {
            if err > tol {
                self.tally.unconverged.store(true, Ordering::Relaxed);
            }
            out.push(CellOutcome { value: est, err });
            Ok(())
        } else {
            self.refine(f, lo, mid, left, depth + 1, out)?;
            self.refine(f, mid, hi, right, depth + 1, out)
        }
    }
}

fn adaptive_axis<F>(f: &F, cells: &[(f64, f64)], grid: &GridSpec, tally: &Tally, parallel: bool) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync + ?Sized,
{
    if cells.is_empty() {
        return Ok((0.0, 0.0));
    }
    let rule = rule(ADAPTIVE_ORDER);
    let first = |&(lo, hi): &(f64, f64)| rule.apply(f, lo, hi);
    let wholes: Vec<f64> = if parallel {
        cells.par_iter().map(first).collect::<Result<_>>()?
    } else {
        cells.iter().map(first).collect::<Result<_>>()?
    };
    tally.cells.fetch_add(cells.len() as u64, Ordering::Relaxed);
    let span = cells.last().unwrap().1 - cells[0].0;
    let ctx = Adaptive {
        rule,
        rel_tol: grid.rel_tol,
        max_depth: grid.refinement_depth,
        scale_density: pairwise_sum(&wholes).abs() / span,
        tally,
    };
    let run = |(cell, whole): (&(f64, f64), &f64)| -> Result<Vec<CellOutcome>> {
        let mut out = Vec::new();
        ctx.refine(f, cell.0, cell.1, *whole, 0, &mut out)?;
        Ok(out)
    };
    let per_cell: Vec<Vec<CellOutcome>> = if parallel {
        cells.par_iter().zip(wholes.par_iter()).map(run).collect::<Result<_>>()?
    } else {
        cells.iter().zip(wholes.iter()).map(run).collect::<Result<_>>()?
    };
    let flat: Vec<&CellOutcome> = per_cell.iter().flatten().collect();
    let values: Vec<f64> = flat.iter().map(|c| c.value).collect();
    let errs: Vec<f64> = flat.iter().map(|c| c.err).collect();
    Ok((pairwise_sum(&values), pairwise_sum(&errs)))
}

fn product_axis<F>(f: &F, cells: &[(f64, f64)], tally: &Tally, parallel: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync + ?Sized,
{
    let rule = rule(PRODUCT_ORDER);
    tally.cells.fetch_add(cells.len() as u64, Ordering::Relaxed);
    let eval = |&(lo, hi): &(f64, f64)| rule.apply(f, lo, hi);
    let values: Vec<f64> = if parallel {
        cells.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        cells.iter().map(eval).collect::<Result<_>>()?
    };
    Ok(pairwise_sum(&values))
}

fn check_sample(point: &[f64], value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation {
            point: point.to_vec(),
            value,
        })
    }
}

/// `∫_a^b f` with the adaptive composite rule.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, grid: &GridSpec) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    grid.validate()?;
    if !(a <= b) {
        return Err(Error::domain(format!("integration limits out of order: [{a}, {b}]")));
    }
    if a == b {
        return Ok(IntegralResult {
            value: 0.0,
            err_estimate: 0.0,
            cells_evaluated: 0,
            converged: true,
        });
    }
    let tally = Tally::default();
    let cells = cell_layout(&[(a, b)], grid.splits(0), grid.outer_cells);
    let g = |t: f64| check_sample(&[t], f(t));
    let (value, err) = adaptive_axis(&g, &cells, grid, &tally, false)?;
    Ok(IntegralResult {
        value,
        err_estimate: err,
        cells_evaluated: tally.cells.load(Ordering::Relaxed),
        converged: !tally.unconverged.load(Ordering::Relaxed),
    })
}

struct Nested<'r, R: NestedIntegrand + ?Sized> {
    region: &'r R,
    grid: GridSpec,
    tally: Tally,
    adaptive: bool,
}

impl<R: NestedIntegrand + ?Sized> Nested<'_, R> {
    /// Integral over axes `axis..dims` with the outer coordinates fixed.
    fn axis(&self, axis: usize, prefix: [f64; MAX_DIMS]) -> Result<(f64, f64)> {
        let dims = self.region.dims();
        let mut pieces = Vec::new();
        self.region.pieces(axis, &prefix[..axis], &mut pieces);
        let cells = cell_layout(&pieces, self.grid.splits(axis), self.grid.cells(axis));
        let last = axis + 1 == dims;
        let f = |t: f64| -> Result<f64> {
            let mut p = prefix;
            p[axis] = t;
            if last {
                check_sample(&p[..dims], self.region.eval(&p[..dims]))
            } else {
                Ok(self.axis(axis + 1, p)?.0)
            }
        };
        let parallel = axis == 0;
        if self.adaptive {
            adaptive_axis(&f, &cells, &self.grid, &self.tally, parallel)
        } else {
            Ok((product_axis(&f, &cells, &self.tally, parallel)?, 0.0))
        }
    }
}

/// Integrates a [`NestedIntegrand`]: adaptive for one or two axes, fixed
/// product grid for three or four.
pub fn integrate_region<R>(region: &R, grid: &GridSpec) -> Result<IntegralResult>
where
    R: NestedIntegrand + ?Sized,
{
    grid.validate()?;
    let dims = region.dims();
    if !(1..=MAX_DIMS).contains(&dims) {
        return Err(Error::domain(format!("dims must be 1..=4, got {dims}")));
    }
    let adaptive = dims <= 2;
    let run = |grid: GridSpec| -> Result<(f64, f64, u64, bool)> {
        let n = Nested {
            region,
            grid,
            tally: Tally::default(),
            adaptive,
        };
        let (v, e) = n.axis(0, [0.0; MAX_DIMS])?;
        Ok((
            v,
            e,
            n.tally.cells.load(Ordering::Relaxed),
            !n.tally.unconverged.load(Ordering::Relaxed),
        ))
    };
    if adaptive {
        let (value, err_estimate, cells_evaluated, converged) = run(grid.clone())?;
        Ok(IntegralResult {
            value,
            err_estimate,
            cells_evaluated,
            converged,
        })
    } else {
        let (value, _, cells, _) = run(grid.clone())?;
        let coarse = GridSpec {
            outer_cells: (grid.outer_cells / 2).max(1),
            inner_cells: (grid.inner_cells / 2).max(1),
            ..grid.clone()
        };
        let (coarse_value, _, coarse_cells, _) = run(coarse)?;
        let err_estimate = (value - coarse_value).abs();
        Ok(IntegralResult {
            value,
            err_estimate,
            cells_evaluated: cells + coarse_cells,
            converged: err_estimate <= grid.rel_tol * value.abs().max(f64::MIN_POSITIVE),
        })
    }
}

/// Limit function of one axis: `(lo, hi)` given the outer coordinates.
pub type LimitFn<'a> = dyn Fn(&[f64]) -> (f64, f64) + Sync + 'a;

struct FnRegion<'a> {
    limits: &'a [&'a LimitFn<'a>],
    integrand: &'a (dyn Fn(&[f64]) -> f64 + Sync + 'a),
}

impl NestedIntegrand for FnRegion<'_> {
    fn dims(&self) -> usize {
        self.limits.len()
    }

    fn pieces(&self, axis: usize, outer: &[f64], out: &mut Vec<(f64, f64)>) {
        let (lo, hi) = (self.limits[axis])(outer);
        if hi > lo {
            out.push((lo, hi));
        }
    }

    fn eval(&self, point: &[f64]) -> f64 {
        (self.integrand)(point)
    }
}

/// Iterated integral `∫ dx_0 ∫ dx_1 … f(x)` with `limits[k]` depending on
/// `x_0..x_{k-1}`; empty slices contribute zero.
pub fn integrate_nested(
    limits: &[&LimitFn<'_>],
    integrand: &(dyn Fn(&[f64]) -> f64 + Sync),
    grid: &GridSpec,
) -> Result<IntegralResult> {
    let region = FnRegion { limits, integrand };
    integrate_region(&region, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials_exactly() {
        for n in [1usize, 2, 5, 10, 16] {
            let r = GaussLegendre::new(n);
            assert!((r.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let q: f64 = r.nodes().iter().zip(r.weights()).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn one_dimensional_examples() {
        let g = GridSpec::default();
        let r = integrate_1d(|t| t, 0.0, 1.0, &g).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        let r = integrate_1d(|t| 1.0 / t, 1.0, 2.0, &g).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-14);
        assert!(r.converged);
        let r = integrate_1d(|_| f64::NAN, 3.0, 3.0, &g).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.cells_evaluated, 0);
    }

    #[test]
    fn non_finite_sample_reports_abscissa() {
        let g = GridSpec::default();
        let err = integrate_1d(|t| if t > 0.5 { f64::INFINITY } else { 1.0 }, 0.0, 1.0, &g).unwrap_err();
        match err {
            Error::Evaluation { point, .. } => assert!(point[0] > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let g = GridSpec {
            outer_cells: 4,
            ..GridSpec::default()
        };
        assert!(integrate_1d(|t| t, 0.0, 1.0, &g).is_err());
        let g = GridSpec {
            rel_tol: 0.5,
            ..GridSpec::default()
        };
        assert!(g.validate().is_err());
        assert!(integrate_1d(|t| t, 1.0, 0.0, &GridSpec::default()).is_err());
    }

    #[test]
    fn split_points_tame_a_jump() {
        let step = |t: f64| if t < 0.3 { 1.0 } else { 2.0 };
        let g = GridSpec::default().with_split_points(0, vec![0.3]);
        let r = integrate_1d(step, 0.0, 1.0, &g).unwrap();
        assert!((r.value - 1.7).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn nested_examples() {
        let g2 = GridSpec::for_dims(2);
        let r = integrate_nested(&[&|_: &[f64]| (0.0, 1.0), &|o: &[f64]| (0.0, o[0])], &|_| 1.0, &g2).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);

        let r = integrate_nested(
            &[&|_: &[f64]| (1.0, 2.0), &|_: &[f64]| (1.0, 2.0)],
            &|p| 1.0 / (p[0] * p[1]),
            &g2,
        )
        .unwrap();
        assert!((r.value - std::f64::consts::LN_2.powi(2)).abs() < 1e-13);

        let unit = |_: &[f64]| (0.0, 1.0);
        let r = integrate_nested(&[&unit, &unit, &unit, &unit], &|_| 1.0, &GridSpec::for_dims(4)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn empty_inner_slices_contribute_nothing() {
        let r = integrate_nested(
            &[&|_: &[f64]| (0.0, 2.0), &|o: &[f64]| (1.0, o[0])],
            &|_| 1.0,
            &GridSpec::for_dims(2).with_split_points(0, vec![1.0]),
        )
        .unwrap();
        assert!((r.value - 0.5).abs() < 1e-13);
    }

    #[test]
    fn three_dimensional_simplex_volume() {
        let r = integrate_nested(
            &[&|_: &[f64]| (0.0, 1.0), &|o: &[f64]| (0.0, o[0]), &|o: &[f64]| (0.0, o[1])],
            &|_| 1.0,
            &GridSpec::for_dims(3),
        )
        .unwrap();
        assert!((r.value - 1.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn doubling_is_stable_for_smooth_integrands() {
        let f = |t: f64| (3.0 * t).sin() * (-t).exp();
        let g = GridSpec::default();
        let a = integrate_1d(f, 0.0, 2.0, &g).unwrap().value;
        let b = integrate_1d(f, 0.0, 2.0, &g.doubled()).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let limits: [&LimitFn; 2] = [&|_: &[f64]| (0.0, 1.5), &|o: &[f64]| (0.1, 0.2 + o[0])];
        let f = |p: &[f64]| (p[0] * p[1]).cos() / (0.3 + p[1]);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| integrate_nested(&limits, &f, &GridSpec::default()).unwrap())
        };
        let a = run(1);
        let b = run(8);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.cells_evaluated, b.cells_evaluated);
    }

    proptest::proptest! {
        #[test]
        fn cubic_exact_on_single_product_cell(c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c3 in -3.0f64..3.0, a in -2.0f64..0.0, w in 0.1f64..3.0) {
            let r = rule(PRODUCT_ORDER);
            let f = |t: f64| -> Result<f64> { Ok(c0 + c1 * t + c3 * t * t * t) };
            let b = a + w;
            let exact = c0 * w + c1 * (b * b - a * a) / 2.0 + c3 * (b.powi(4) - a.powi(4)) / 4.0;
            let q = r.apply(&f, a, b).unwrap();
            proptest::prop_assert!((q - exact).abs() < 1e-12 * (1.0 + exact.abs()));
        }
    }
}
