use std::hint::black_box;

use bwdisc::cm::{build_curve, fixtures, hilbert_class_poly, verify_curve};
use bwdisc::families::delta;
use bwdisc::numtheory::class_number;
use bwdisc::search::{Instantiator, SearchConfig};
use bwdisc::{factorize, Family};
use bwdisc_bench::{degree_nine_family, toy_params};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

fn polynomials(c: &mut Criterion) {
    let toy = Family::toy();
    c.bench_function("factorize toy p (degree 22)", |b| b.iter(|| factorize(black_box(&toy.p)).unwrap()));
    c.bench_function("delta (11, 22, 2, 3)", |b| b.iter(|| delta(11, 22, 2, black_box(3)).unwrap()));
}

fn class_numbers(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_number");
    for disc in [-2312i64, -999_995, -3 * 153733 * 153733] {
        group.bench_with_input(BenchmarkId::from_parameter(disc), &disc, |b, &d| b.iter(|| class_number(d).unwrap()));
    }
    group.finish();
}

fn complex_multiplication(c: &mut Criterion) {
    let mut group = c.benchmark_group("cm");
    group.sample_size(10);
    for disc in [-23i64, -2312] {
        group.bench_with_input(BenchmarkId::new("hilbert_class_poly", disc), &disc, |b, &d| {
            b.iter(|| hilbert_class_poly(d).unwrap())
        });
    }
    let params = toy_params();
    group.bench_function("build_curve toy", |b| b.iter(|| build_curve(black_box(&params)).unwrap()));
    let bn = fixtures::barreto_naehrig();
    group.bench_function("verify_curve bn, 8 samples", |b| b.iter(|| verify_curve(black_box(&bn), 8).unwrap()));
    group.finish();
}

fn search(c: &mut Criterion) {
    let fam = degree_nine_family();
    let cfg = SearchConfig::default().without_size_bounds();
    let inst = Instantiator::new(&fam, &cfg).unwrap();
    let x = BigInt::from(134_499_652u64);
    c.bench_function("instantiate x = 134499652", |b| b.iter(|| inst.instantiate(black_box(&x))));
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    let (from, to) = (BigInt::from(1u64 << 27), BigInt::from((1u64 << 27) + (1 << 14)));
    group.bench_function("2^14 values near 2^27", |b| {
        b.iter(|| {
            let mut hits = 0;
            inst.scan_each(&from, &to, |_| hits += 1).unwrap();
            hits
        })
    });
    group.finish();
}

criterion_group!(benches, polynomials, class_numbers, complex_multiplication, search);
criterion_main!(benches);
