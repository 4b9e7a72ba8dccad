//! One function per subcommand, each producing an [`Outcome`].

use lpfsieve_core::arithmetic::{self, chebyshev, gauss, kloosterman, lpf, modular, poisson, roots, CheckReport};
use lpfsieve_core::buchstab::{omega, OmegaMode};
use lpfsieve_core::deficiency::{compute_term, solve_varpi, total_budget, DeficiencyTerm, TermGrids, TermId};
use lpfsieve_core::linear_sieve::{linear_sieve_closed_form, linear_sieve_factor_f64, lower_f, upper_F};
use lpfsieve_core::params::{case_breakpoints, derive_exponents, fmt_q, parse_q, to_f64};
use lpfsieve_core::ThetaExponent;
use serde_json::json;

use crate::output::Outcome;
use crate::{Command, Failure, GridOpts};

type Res = Result<Outcome, Failure>;

pub(crate) fn dispatch(cmd: &Command, theta: ThetaExponent) -> Res {
    match cmd {
        Command::Omega { values, mode, range, points } => omega_cmd(values, mode, range.as_deref(), *points),
        Command::SieveFn { values, range, points } => sieve_fn(values, range.as_deref(), *points),
        Command::Exponents { alpha } => exponents(alpha, theta),
        Command::Breakpoints => breakpoints(theta),
        Command::Deficiency { term, grid } => deficiency(term.as_deref(), grid, theta),
        Command::Optimize { varpi, grid } => optimize(*varpi, grid, theta),
        Command::Verify { suite, max_ell, max_m, c_max, x, max_d, seed } => verify(
            suite,
            &VerifyOpts {
                max_ell: *max_ell,
                max_m: *max_m,
                c_max: *c_max,
                x: *x,
                max_d: *max_d,
                seed: *seed,
            },
            theta,
        ),
        Command::ScanLpf { range, records } => scan_lpf(range, *records),
        Command::PoissonCheck { x, max_d, epsilon } => poisson_cmd(*x, *max_d, *epsilon),
        Command::Type2Check { x, m, n, coeffs } => type2(*x, *m, *n, coeffs),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn split_range(s: &str) -> Result<(&str, &str), Failure> {
    s.split_once(':')
        .ok_or_else(|| usage(format!("range must look like a:b, got {s:?}")))
}

fn float_range(s: &str) -> Result<(f64, f64), Failure> {
    let (a, b) = split_range(s)?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| usage(format!("bad number {t:?} in range")));
    let (a, b) = (parse(a)?, parse(b)?);
    if !(a <= b) {
        return Err(usage(format!("empty range {s}")));
    }
    Ok((a, b))
}

fn int_range(s: &str) -> Result<(u64, u64), Failure> {
    let (a, b) = split_range(s)?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad integer {t:?} in range")));
    Ok((parse(a)?, parse(b)?))
}

/// Explicit values followed by `points` evenly spaced samples of `range`.
fn sample_points(values: &[f64], range: Option<&str>, points: usize) -> Result<Vec<f64>, Failure> {
    let mut out = values.to_vec();
    if let Some(r) = range {
        let (a, b) = float_range(r)?;
        if points < 2 {
            return Err(usage("--points must be at least 2"));
        }
        out.extend((0..points).map(|i| a + (b - a) * i as f64 / (points - 1) as f64));
    }
    if out.is_empty() {
        return Err(usage("no evaluation points: pass values or --range"));
    }
    Ok(out)
}

fn omega_cmd(values: &[f64], mode: &str, range: Option<&str>, points: usize) -> Res {
    let mode: OmegaMode = mode.parse()?;
    let us = sample_points(values, range, points)?;
    let mut out = Outcome::default();
    out.param("mode", mode);
    for u in us {
        out.push(json!({"u": u, "mode": mode, "value": omega(u, mode)?}));
    }
    Ok(out)
}

fn sieve_fn(values: &[f64], range: Option<&str>, points: usize) -> Res {
    let ss = sample_points(values, range, points)?;
    let mut out = Outcome::default();
    for s in ss {
        let upper = upper_F(s).ok();
        let lower = lower_f(s).ok();
        if upper.is_none() && lower.is_none() {
            return Err(usage(format!("s = {s} is outside both [1, 5] and (0, 4]")));
        }
        out.push(json!({"s": s, "F": upper, "f": lower}));
    }
    Ok(out)
}

fn exponents(alphas: &[String], theta: ThetaExponent) -> Res {
    let mut out = Outcome::default();
    out.param("alpha", alphas);
    for a in alphas {
        let e = derive_exponents(parse_q(a)?, theta)?;
        out.push(json!({
            "alpha": fmt_q(&e.alpha),
            "sigma_i": fmt_q(&e.sigma_i),
            "sigma_ii": fmt_q(&e.sigma_ii),
            "sigma": fmt_q(&e.sigma),
            "xi": fmt_q(&e.xi),
            "gamma_cut": fmt_q(&e.gamma_cut),
            "d_exp": fmt_q(&e.d_exp),
            "u_exp": fmt_q(&e.u_exp),
            "h_exp": fmt_q(&e.h_exp),
        }));
    }
    Ok(out)
}

fn breakpoints(theta: ThetaExponent) -> Res {
    let b = case_breakpoints(theta);
    let mut out = Outcome::default();
    for (name, v) in ["a1", "a2", "a3", "a4", "crossover"].iter().zip(b.as_array()) {
        out.push(json!({"name": name, "exact": fmt_q(&v), "value": to_f64(&v)}));
    }
    let mut ordered = CheckReport::new("ordered");
    ordered.record(b.is_ordered(), || "a1 < a2 < a3 < a4 fails (needs theta < 1/5)".to_string());
    out.checks.push(ordered);
    Ok(out)
}

fn grids(opts: &GridOpts) -> Result<TermGrids, Failure> {
    let mut g = TermGrids::default();
    if let Some(n) = opts.grid_outer {
        g.adaptive.outer_cells = n;
        g.product.outer_cells = n;
    }
    if let Some(d) = opts.grid_depth {
        g.adaptive.refinement_depth = d;
    }
    if let Some(t) = opts.rel_tol {
        g.adaptive.rel_tol = t;
        g.product.rel_tol = t;
    }
    g.adaptive.validate()?;
    g.product.validate()?;
    Ok(g)
}

fn grid_params(out: &mut Outcome, g: &TermGrids) {
    out.param("grid_adaptive", &g.adaptive);
    out.param("grid_product", &g.product);
}

fn term_row(t: &DeficiencyTerm) -> serde_json::Value {
    json!({
        "term": t.label,
        "mode": t.mode,
        "alpha_from": fmt_q(&t.interval.0),
        "alpha_to": fmt_q(&t.interval.1),
        "value": t.value,
        "err_estimate": t.err_estimate,
        "cells": t.cells_evaluated,
        "warning": t.warning,
    })
}

fn deficiency(term: Option<&str>, grid: &GridOpts, theta: ThetaExponent) -> Res {
    let g = grids(grid)?;
    let ids = match term {
        Some(t) => vec![TermId::parse(t, theta)?],
        None => TermId::ALL.to_vec(),
    };
    let mut out = Outcome::default();
    grid_params(&mut out, &g);
    for id in ids {
        out.push(term_row(&compute_term(id, theta, g.for_term(id))?));
    }
    Ok(out)
}

fn optimize(varpi: Option<f64>, grid: &GridOpts, theta: ThetaExponent) -> Res {
    let g = grids(grid)?;
    let ledger = total_budget(theta, &g)?;
    let mut out = Outcome::default();
    grid_params(&mut out, &g);
    if let Some(v) = varpi {
        out.param("varpi", v);
    }
    let row = |item: &str, exact: Option<String>, value: f64| json!({"item": item, "exact": exact, "value": value});
    out.push(row("base", Some(fmt_q(&ledger.base)), to_f64(&ledger.base)));
    for t in &ledger.terms {
        out.results.push(row(&t.label, None, t.value));
    }
    out.push(row("base+terms", None, ledger.base_plus_terms()));
    out.push(row("a4", Some(fmt_q(&ledger.breakpoints.a4)), to_f64(&ledger.breakpoints.a4)));
    let solved = solve_varpi(&ledger)?;
    out.push(row("varpi", None, solved));
    out.push(row("tail(varpi)", None, ledger.tail(solved)?));
    out.push(row("total(varpi)", None, ledger.total(solved)?));
    if let Some(v) = varpi {
        out.push(row(&format!("total({v})"), None, ledger.total(v)?));
    }
    let mut balance = CheckReport::new("budget-balance");
    let residual = (ledger.total(solved)? - 1.0).abs();
    balance.record(residual < 1e-9, || format!("|total(varpi) - 1| = {residual}"));
    let mut accuracy = CheckReport::new("quadrature-accuracy");
    for t in &ledger.terms {
        accuracy.record(t.warning.is_none(), || format!("{}: {}", t.label, t.warning.clone().unwrap_or_default()));
    }
    out.checks.extend([balance, accuracy]);
    Ok(out)
}

struct VerifyOpts {
    max_ell: u64,
    max_m: u64,
    c_max: u64,
    x: u64,
    max_d: u64,
    seed: u64,
}

const SUITES: [&str; 10] = [
    "breakpoints",
    "envelopes",
    "identity",
    "rho",
    "multiplicativity",
    "gauss",
    "weil",
    "gcd-sum",
    "chebyshev",
    "poisson",
];

fn run_suite(name: &str, o: &VerifyOpts, theta: ThetaExponent) -> Result<CheckReport, Failure> {
    Ok(match name {
        "breakpoints" => {
            let b = case_breakpoints(theta);
            let mut r = CheckReport::new("breakpoints");
            r.record(b.is_ordered(), || "breakpoints not ordered".into());
            r
        }
        "envelopes" => {
            let mut r = CheckReport::new("envelopes");
            for i in 0..=6000 {
                let u = i as f64 * 0.01;
                let (lo, hi) = (omega(u, OmegaMode::Lower)?, omega(u, OmegaMode::Upper)?);
                r.record(lo <= hi, || format!("u = {u}: lower {lo} > upper {hi}"));
            }
            r
        }
        "identity" => {
            let b = case_breakpoints(theta);
            let (lo, hi) = (to_f64(&b.a3), to_f64(&b.a4));
            let mut r = CheckReport::new("identity");
            for i in 1..100 {
                let a = lo + (hi - lo) * i as f64 / 100.0;
                if a >= 1.5 {
                    break;
                }
                let v = linear_sieve_factor_f64(a, theta)?;
                let c = linear_sieve_closed_form(a, theta);
                r.record((v / c - 1.0).abs() < 1e-10, || format!("alpha = {a}: {v} vs {c}"));
            }
            r
        }
        "rho" => roots::rho_oracle_check(o.max_m)?,
        "multiplicativity" => roots::rho_multiplicativity_check(10_000, 10_000, o.seed)?,
        "gauss" => gauss::gauss_check(o.max_ell)?,
        "weil" => {
            let mut r = kloosterman::weil_check(o.c_max, 50, o.seed)?;
            for (c, expected) in [(2u64, 1.0), (3, -1.0)] {
                let s = kloosterman::kloosterman(1, 1, c)?.value;
                r.record((s.re - expected).abs() < 1e-12 && s.im.abs() < 1e-12, || {
                    format!("S(1,1;{c}) = {s}, expected {expected}")
                });
            }
            r
        }
        "gcd-sum" => chebyshev::gcd_sum_fuzz(10_000, o.seed)?,
        "chebyshev" => {
            let c = chebyshev::chebyshev_sum(o.x)?;
            let mut r = CheckReport::new("chebyshev");
            r.record(c.relative_gap < 1e-6, || format!("Lambda decomposition gap {}", c.relative_gap));
            r
        }
        "poisson" => poisson::poisson_check(o.x, o.max_d, poisson::DEFAULT_EPSILON)?,
        other => return Err(usage(format!("unknown suite {other:?}; expected one of {SUITES:?} or all"))),
    })
}

fn verify(suites: &[String], o: &VerifyOpts, theta: ThetaExponent) -> Res {
    let names: Vec<&str> = if suites.iter().any(|s| s == "all") {
        SUITES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let mut out = Outcome::default();
    out.param("suites", &names)
        .param("max_ell", o.max_ell)
        .param("max_m", o.max_m)
        .param("c_max", o.c_max)
        .param("x", o.x)
        .param("max_d", o.max_d)
        .param("seed", o.seed);
    for name in names {
        let r = run_suite(name, o, theta)?;
        out.push(json!({"check": r.check, "instances": r.instances, "failures": r.failures}));
        out.checks.push(r);
    }
    Ok(out)
}

/// Cap on per-n output rows.
const MAX_RECORDS: u64 = 1_000_000;

fn scan_lpf(range: &str, records: bool) -> Res {
    let (lo, hi) = int_range(range)?;
    let mut out = Outcome::default();
    out.param("range", [lo, hi]).param("records", records);
    if records {
        if hi.saturating_sub(lo) >= MAX_RECORDS {
            return Err(usage("--records is limited to 10^6 values of n"));
        }
        for r in arithmetic::lpf_records(lo, hi)? {
            out.push(r);
        }
        return Ok(out);
    }
    let scan = arithmetic::lpf_scan(lo, hi)?;
    let mut witnesses = CheckReport::new("witness-per-block");
    for b in &scan.blocks {
        out.push(json!({
            "lo": b.lo,
            "hi": b.hi,
            "count": b.count,
            "max_n": b.max.n,
            "max_lpf": b.max.lpf,
            "max_exponent": b.max.exponent,
            "median_exponent": b.median_exponent,
            "above_target": b.above_target,
            "witness": b.witnesses.first().map(|w| w.n),
        }));
        witnesses.record(b.above_target > 0, || {
            format!("no n in [{}, {}] with exponent above {}", b.lo, b.hi, lpf::TARGET_EXPONENT)
        });
    }
    out.checks.push(witnesses);
    Ok(out)
}

fn poisson_cmd(x: u64, max_d: u64, epsilon: f64) -> Res {
    let w = poisson::SmoothWeight::new(x)?;
    let mut out = Outcome::default();
    out.param("x", x).param("max_d", max_d).param("epsilon", epsilon).param("mass", w.mass());
    let mut report = CheckReport::new("poisson");
    for d in 1..=max_d {
        if roots::rho(d)? == 0 {
            continue;
        }
        let c = poisson::count_a_d_with(&w, d, epsilon)?;
        let gap = (c.exact - c.poisson).abs();
        report.record(gap <= 1e-3 * c.exact.max(1.0), || format!("d = {d}: gap {gap}"));
        out.push(json!({
            "d": d,
            "rho": c.rho,
            "exact": c.exact,
            "main": c.main,
            "poisson": c.poisson,
            "frequencies": c.frequencies,
            "gap": gap,
        }));
    }
    out.checks.push(report);
    Ok(out)
}

fn type2(x: u64, m: u64, n: u64, coeffs: &str) -> Res {
    let w = poisson::SmoothWeight::new(x)?;
    let b: Box<dyn Fn(u64) -> f64 + Sync> = match coeffs {
        "ones" => {
            // Square-free support is required; restrict the constant sequence.
            Box::new(|k| if modular::is_squarefree(k).unwrap_or(false) { 1.0 } else { 0.0 })
        }
        "primes-1-mod-4" => Box::new(|k| if k % 4 == 1 && modular::is_prime(k) { 1.0 } else { 0.0 }),
        other => return Err(usage(format!("unknown coefficients {other:?}; expected ones or primes-1-mod-4"))),
    };
    let r = poisson::type2_empirical(&w, m, n, |_| 1.0, b)?;
    let mut out = Outcome::default();
    out.param("x", x).param("m", m).param("n", n).param("coeffs", coeffs);
    let rel = r.abs_diff / x as f64;
    out.push(json!({
        "alpha": r.alpha,
        "lhs": r.lhs,
        "main": r.main,
        "abs_diff": r.abs_diff,
        "diff_over_x": rel,
    }));
    let mut band = CheckReport::new("type2-band");
    band.record(rel < 0.05, || format!("|lhs - main|/x = {rel}"));
    out.checks.push(band);
    Ok(out)
}
