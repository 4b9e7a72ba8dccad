use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lpfsieve_core::arithmetic::{kloosterman::KloostermanTable, lpf_scan, roots_neg1};
use lpfsieve_core::deficiency::{compute_term, TermGrids, TermId};
use lpfsieve_core::params::case_breakpoints;
use lpfsieve_core::{omega, OmegaMode, ThetaExponent};

fn exponents(c: &mut Criterion) {
    c.bench_function("case_breakpoints 7/64", |b| {
        b.iter(|| case_breakpoints(black_box(ThetaExponent::kim_sarnak())))
    });
    c.bench_function("omega upper", |b| b.iter(|| omega(black_box(3.7), OmegaMode::Upper)));
}

fn deficiency(c: &mut Criterion) {
    let theta = ThetaExponent::kim_sarnak();
    let grids = TermGrids::default();
    let mut group = c.benchmark_group("deficiency");
    group.sample_size(10);
    for i in [1u8, 2, 3, 6] {
        let id = TermId::new(i).unwrap();
        group.bench_function(id.label(theta), |b| {
            b.iter(|| compute_term(id, theta, grids.for_term(id)).unwrap())
        });
    }
    group.finish();
}

fn arithmetic(c: &mut Criterion) {
    c.bench_function("roots_neg1 10^12 range", |b| {
        b.iter(|| roots_neg1(black_box(999_999_000_001)).unwrap())
    });
    let table = KloostermanTable::new(2999).unwrap();
    c.bench_function("kloosterman c=2999", |b| b.iter(|| table.sum(black_box(17), black_box(-5))));
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("lpf_scan 10^5", |b| b.iter(|| lpf_scan(2, 100_000).unwrap()));
    group.finish();
}

criterion_group!(benches, exponents, deficiency, arithmetic);
criterion_main!(benches);
