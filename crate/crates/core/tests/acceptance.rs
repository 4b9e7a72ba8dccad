//! Acceptance suite. Each test prints one `PASS`/`FAIL` line (written past
//! the test harness capture, so it shows up in plain `cargo test` output)
//! and then asserts the criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use lpfsieve_core::arithmetic::chebyshev::chebyshev_sum;
use lpfsieve_core::arithmetic::gauss::{gauss_correspondence, two_square_reps};
use lpfsieve_core::arithmetic::kloosterman::{kloosterman, KloostermanTable};
use lpfsieve_core::arithmetic::poisson::{poisson_check, SmoothWeight, DEFAULT_EPSILON};
use lpfsieve_core::arithmetic::roots::{rho, roots_neg1};
use lpfsieve_core::deficiency::{compute_term, solve_varpi, total_budget, BudgetLedger, TermGrids, TermId};
use lpfsieve_core::linear_sieve::{linear_sieve_closed_form, linear_sieve_factor_f64};
use lpfsieve_core::params::{case_breakpoints, fmt_q};
use lpfsieve_core::quadrature::{integrate_1d, integrate_region, GridSpec, NestedIntegrand};
use lpfsieve_core::{omega, OmegaMode, ThetaExponent, Q};
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and reference values.
const BAND_BELOW: f64 = 0.006;
const BAND_ABOVE: f64 = 0.0005;
const G_REFERENCE: [f64; 5] = [0.01745, 0.11478, 0.093754, 0.0057, 0.17877];
const G6_FLOOR: f64 = 0.0163;
const KS_TOTAL: (f64, f64) = (0.545, 0.553361 + 0.001);
const SELBERG_TOTAL: (f64, f64) = (0.672, 0.679914 + 0.001);
const F5_EXACT_TOL: f64 = 1e-12;
const KS_VARPI: f64 = 1.279;
const SELBERG_VARPI: f64 = 1.312;
const TOTAL_AT_VARPI: (f64, f64) = (0.99, 1.0);
const IDENTITY_REL_TOL: f64 = 1e-10;
const KLOOSTERMAN_EXACT_TOL: f64 = 1e-12;
const WEIL_SLACK: f64 = 1e-9;
const CHEBYSHEV_RATIO: (f64, f64) = (1.02, 1.05);
const LAMBDA_REL_TOL: f64 = 1e-6;
const POISSON_REL_TOL: f64 = 1e-3;
const DOUBLING_DRIFT: f64 = 5e-4;

fn report(id: &str, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "{id} {name}: {status} ({detail})");
}

fn show(qs: &[Q]) -> String {
    qs.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
}

fn within(v: f64, (lo, hi): (f64, f64)) -> bool {
    lo <= v && v <= hi
}

fn ks() -> ThetaExponent {
    ThetaExponent::kim_sarnak()
}

fn selberg() -> ThetaExponent {
    ThetaExponent::selberg()
}

static KS_LEDGER: Lazy<BudgetLedger> = Lazy::new(|| total_budget(ks(), &TermGrids::default()).unwrap());
static SELBERG_LEDGER: Lazy<BudgetLedger> =
    Lazy::new(|| total_budget(selberg(), &TermGrids::default()).unwrap());

#[test]
fn ac01_case_breakpoints() {
    let start = Instant::now();
    let b = case_breakpoints(ks());
    let s = case_breakpoints(selberg());
    let elapsed = start.elapsed();
    let ks_expected = [Q::new(758, 733), Q::new(249, 224), Q::new(182, 157), Q::new(153, 128), Q::new(2671, 2496)];
    let sel_expected = [Q::new(17, 16), Q::new(8, 7), Q::new(7, 6), Q::new(5, 4), Q::from_integer(1)];
    let pass = b.as_array() == ks_expected && s.as_array() == sel_expected && elapsed < Duration::from_millis(1);
    report("AC01", "case breakpoints", pass, format!("{} / {} in {elapsed:?}", show(&b.as_array()), show(&s.as_array())));
    assert!(pass);
}

#[test]
fn ac02_deficiency_terms_kim_sarnak() {
    let grids = TermGrids::default();
    let mut pass = true;
    let mut detail = Vec::new();
    for id in TermId::ALL {
        let start = Instant::now();
        let t = compute_term(id, ks(), grids.for_term(id)).unwrap();
        let elapsed = start.elapsed();
        let (ok_value, limit) = match id.index() {
            4 => (within(t.value, (0.0, G_REFERENCE[3] + BAND_ABOVE)), Duration::from_secs(60)),
            6 => (t.value >= G6_FLOOR, Duration::from_secs(1)),
            i => {
                let r = G_REFERENCE[i as usize - 1];
                (within(t.value, (r - BAND_BELOW, r + BAND_ABOVE)), Duration::from_secs(1))
            }
        };
        let ok = ok_value && elapsed <= limit && t.warning.is_none();
        pass &= ok;
        detail.push(format!("{}={:.6} {:.0?}{}", t.label, t.value, elapsed, if ok { "" } else { " !" }));
    }
    report("AC02", "deficiency terms, theta=7/64", pass, detail.join(", "));
    assert!(pass);
}

#[test]
fn ac03a_ledger_total_kim_sarnak() {
    let total = KS_LEDGER.base_plus_terms();
    let pass = within(total, KS_TOTAL);
    report("AC03a", "ledger total, theta=7/64", pass, format!("25/157 + G1..G5 - G6 = {total:.6}"));
    assert!(pass);
}

#[test]
fn ac03b_ledger_total_selberg() {
    let total = SELBERG_LEDGER.base_plus_terms();
    let f5 = SELBERG_LEDGER.term(TermId::new(5).unwrap()).unwrap().value;
    let f5_ok = (f5 - 29.0 / 72.0).abs() < F5_EXACT_TOL;
    let pass = within(total, SELBERG_TOTAL) && f5_ok;
    report(
        "AC03b",
        "ledger total, theta=0",
        pass,
        format!("1/6 + F1..F5 - F6 = {total:.6} (band {SELBERG_TOTAL:?}); F5 - 29/72 = {:.1e}", f5 - 29.0 / 72.0),
    );
    assert!(pass);
}

fn check_varpi(id: &str, ledger: &BudgetLedger, theta_label: &str, target: f64) {
    let start = Instant::now();
    let varpi = solve_varpi(ledger);
    let at_target = ledger.total(target).unwrap();
    let elapsed = start.elapsed();
    let pass = matches!(varpi, Ok(v) if v >= target)
        && at_target > TOTAL_AT_VARPI.0
        && at_target < TOTAL_AT_VARPI.1
        && elapsed < Duration::from_secs(5);
    report(
        id,
        &format!("exponent solution, theta={theta_label}"),
        pass,
        format!("varpi = {varpi:?}, total({target}) = {at_target:.6}, {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn ac04a_varpi_kim_sarnak() {
    check_varpi("AC04a", &KS_LEDGER, "7/64", KS_VARPI);
}

#[test]
fn ac04b_varpi_selberg() {
    check_varpi("AC04b", &SELBERG_LEDGER, "0", SELBERG_VARPI);
}

#[test]
fn ac05_linear_sieve_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (lo, hi) = (182.0 / 157.0, 153.0 / 128.0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let alpha = rng.gen_range(lo..hi);
        let v = linear_sieve_factor_f64(alpha, ks()).unwrap();
        worst = worst.max((v / linear_sieve_closed_form(alpha, ks()) - 1.0).abs());
    }
    let pass = worst < IDENTITY_REL_TOL;
    report("AC05", "linear sieve identity", pass, format!("max relative error {worst:.2e}"));
    assert!(pass);
}

fn brute_roots(m: u64) -> Vec<u64> {
    (0..m).filter(|&v| (v * v + 1) % m == 0).collect()
}

#[test]
fn ac06_rho_oracle() {
    let start = Instant::now();
    let mut failures = 0;
    let mut brute_rho = vec![0u64; 10_001];
    for m in 1..=10_000u64 {
        let oracle = brute_roots(m);
        brute_rho[m as usize] = oracle.len() as u64;
        if roots_neg1(m).unwrap().roots != oracle {
            failures += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pairs = 0;
    let mut mult_failures = 0;
    while pairs < 10_000 {
        let (a, b) = (rng.gen_range(1..=10_000u64), rng.gen_range(1..=10_000u64));
        if num_integer::gcd(a, b) != 1 {
            continue;
        }
        pairs += 1;
        if roots_neg1(a * b).unwrap().rho() != brute_rho[a as usize] * brute_rho[b as usize] {
            mult_failures += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && mult_failures == 0 && elapsed < Duration::from_secs(10);
    report(
        "AC06",
        "rho oracle equivalence",
        pass,
        format!("{failures} root-set mismatches, {mult_failures} multiplicativity failures, {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn ac07_gauss_bijection() {
    let start = Instant::now();
    let mut instances = 0;
    let mut failures = Vec::new();
    for ell in 2..=50_000u64 {
        if rho(ell).unwrap() == 0 {
            continue;
        }
        instances += 1;
        // Independent enumeration of primitive representations.
        let mut reps = 0;
        for r in 1..ell {
            if r * r >= ell {
                break;
            }
            let rest = ell - r * r;
            let s = (rest as f64).sqrt().round() as u64;
            if s * s == rest && num_integer::gcd(r, s) == 1 {
                reps += 1;
            }
        }
        let roots = roots_neg1(ell).unwrap();
        let ok = match gauss_correspondence(ell) {
            Ok(pairs) => {
                let mut image: Vec<u64> = pairs.iter().map(|p| p.1).collect();
                image.sort_unstable();
                image.dedup();
                reps == roots.rho()
                    && pairs.len() as u64 == reps
                    && image == roots.roots
                    && pairs.iter().all(|(_, nu)| (nu * nu + 1) % ell == 0)
            }
            Err(_) => false,
        };
        if !ok {
            failures.push(ell);
        }
    }
    // The single modulus outside the correspondence: ρ(1) = 1 with no r, s > 0.
    let one_excluded = two_square_reps(1).is_empty() && gauss_correspondence(1).is_err();
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && one_excluded && elapsed < Duration::from_secs(30);
    report(
        "AC07",
        "Gauss bijection",
        pass,
        format!("{instances} moduli 2..=50000 with rho > 0, failures {failures:?}, {elapsed:?}"),
    );
    assert!(pass);
}

fn divisor_count(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

#[test]
fn ac08_weil_bound() {
    let start = Instant::now();
    let s2 = kloosterman(1, 1, 2).unwrap().value;
    let s3 = kloosterman(1, 1, 3).unwrap().value;
    let exact_ok = (s2.re - 1.0).abs() < KLOOSTERMAN_EXACT_TOL
        && s2.im.abs() < KLOOSTERMAN_EXACT_TOL
        && (s3.re + 1.0).abs() < KLOOSTERMAN_EXACT_TOL
        && s3.im.abs() < KLOOSTERMAN_EXACT_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = 0;
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for c in 1..=3000u64 {
        let table = KloostermanTable::new(c).unwrap();
        let tau = divisor_count(c) as f64;
        for _ in 0..50 {
            let a = rng.gen_range(-10_000i64..=10_000);
            let b = rng.gen_range(-10_000i64..=10_000);
            let g = num_integer::gcd(num_integer::gcd(a.unsigned_abs(), b.unsigned_abs()), c);
            let bound = tau * (g as f64).sqrt() * (c as f64).sqrt();
            let s = table.sum(a, b);
            instances += 1;
            worst = worst.max(s.norm() / bound);
            if s.norm() > bound * (1.0 + WEIL_SLACK) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = exact_ok && failures == 0 && elapsed < Duration::from_secs(60);
    report(
        "AC08",
        "Weil bound",
        pass,
        format!("S(1,1;2) = {s2}, S(1,1;3) = {s3}; {instances} sums, {failures} violations, max ratio {worst:.4}, {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn ac09_chebyshev_hooley() {
    let start = Instant::now();
    let r = chebyshev_sum(100_000).unwrap();
    let elapsed = start.elapsed();
    let direct: f64 = (100_001u64..=200_000).map(|l| ((l * l + 1) as f64).ln()).sum();
    let pass = within(r.ratio, CHEBYSHEV_RATIO)
        && r.relative_gap < LAMBDA_REL_TOL
        && (direct - r.direct).abs() < LAMBDA_REL_TOL * direct
        && elapsed < Duration::from_secs(30);
    report(
        "AC09",
        "Chebyshev-Hooley",
        pass,
        format!("ratio {:.5}, Lambda gap {:.1e}, {elapsed:?}", r.ratio, r.relative_gap),
    );
    assert!(pass);
}

#[test]
fn ac10_poisson_evaluation() {
    let start = Instant::now();
    let suite = poisson_check(100_000, 1000, DEFAULT_EPSILON).unwrap();
    // Spot-check exact counts by brute force over n.
    let w = SmoothWeight::new(100_000).unwrap();
    let spot: Vec<(u64, f64)> = [1u64, 2, 5, 65, 997]
        .iter()
        .map(|&d| {
            let brute: f64 = (100_001u64..200_000)
                .filter(|n| (n * n + 1) % d == 0)
                .map(|n| w.at(n as f64))
                .sum();
            let c = lpfsieve_core::arithmetic::count_a_d(&w, d).unwrap();
            (d, (brute - c.exact).abs() / brute.max(1.0))
        })
        .collect();
    let elapsed = start.elapsed();
    let pass = suite.passed()
        && suite.instances > 0
        && spot.iter().all(|&(_, e)| e < 1e-9)
        && elapsed < Duration::from_secs(120);
    report(
        "AC10",
        "Poisson evaluation",
        pass,
        format!("{} moduli, {} failures (tol {POISSON_REL_TOL}), {elapsed:?}", suite.instances, suite.failures),
    );
    assert!(pass);
}

struct Cube;

impl NestedIntegrand for Cube {
    fn dims(&self) -> usize {
        3
    }
    fn pieces(&self, _: usize, _: &[f64], out: &mut Vec<(f64, f64)>) {
        out.push((0.0, 1.0));
    }
    fn eval(&self, p: &[f64]) -> f64 {
        p[0].powi(3) * p[1].powi(2) * p[2]
    }
}

#[test]
fn ac11_property_suite() {
    let mut notes = Vec::new();

    // Polynomial exactness: degree 19 in 1-D, a separable cubic in 3-D.
    let poly = integrate_1d(|x| x.powi(19), 0.0, 1.0, &GridSpec::default()).unwrap().value;
    let cube = integrate_region(&Cube, &GridSpec::product()).unwrap().value;
    let exact_ok = (poly - 0.05).abs() < 1e-14 && (cube - 1.0 / 24.0).abs() < 1e-14;
    notes.push(format!("exactness {exact_ok}"));

    // Grid doubling.
    let mut worst: f64 = 0.0;
    let doubled = TermGrids::default().doubled();
    for (theta, ledger) in [(ks(), &*KS_LEDGER), (selberg(), &*SELBERG_LEDGER)] {
        for t in &ledger.terms {
            let fine = compute_term(t.id, theta, doubled.for_term(t.id)).unwrap().value;
            worst = worst.max((fine - t.value).abs());
        }
    }
    let doubling_ok = worst < DOUBLING_DRIFT;
    notes.push(format!("doubling drift {worst:.2e}"));

    // Envelope ordering.
    let mut envelope_ok = true;
    let mut u = 0.0;
    while u < 60.0 {
        envelope_ok &= omega(u, OmegaMode::Lower).unwrap() <= omega(u, OmegaMode::Upper).unwrap();
        u += 0.01;
    }
    notes.push(format!("envelopes {envelope_ok}"));

    // Determinism across thread counts.
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| total_budget(ks(), &TermGrids::default()).unwrap())
    };
    let (one, eight) = (run(1), run(8));
    let deterministic = one
        .terms
        .iter()
        .zip(&eight.terms)
        .all(|(a, b)| a.value.to_bits() == b.value.to_bits())
        && one.varpi_solved.map(f64::to_bits) == eight.varpi_solved.map(f64::to_bits);
    notes.push(format!("jobs 1 vs 8 bit-identical {deterministic}"));

    let pass = exact_ok && doubling_ok && envelope_ok && deterministic;
    report("AC11", "property suite", pass, notes.join(", "));
    assert!(pass);
}
