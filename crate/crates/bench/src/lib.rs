//! Criterion benchmarks for the counting kernels.

use criterion::{BenchmarkId, Criterion, Throughput};
use sumprod_core::setstats::{d4_exact, energy3, energy4, sumset};
use sumprod_core::{FpSet, PrimeField, QuadPoly2};

const MERSENNE_31: u64 = 2_147_483_647;

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

pub fn energy4_sparse(c: &mut Criterion) {
    let f = field(MERSENNE_31);
    let mut group = c.benchmark_group("energy4");
    group.sample_size(10);
    for n in [500u64, 2000, 5000] {
        let a = FpSet::random(f, n, 1).expect("fits");
        let b = FpSet::random(f, n, 2).expect("fits");
        group.throughput(Throughput::Elements(n * n));
        group.bench_with_input(BenchmarkId::new("p=2^31-1", n), &(a, b), |bench, (a, b)| {
            bench.iter(|| energy4(a, b).expect("same field"))
        });
    }
    let f = field(1_000_003);
    let a = FpSet::random(f, 2000, 3).expect("fits");
    group.bench_function("dense p=1000003 n=2000", |bench| bench.iter(|| energy4(&a, &a).expect("same field")));
    group.finish();
}

pub fn sumsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("sumset");
    for (p, n) in [(10_007u64, 1000u64), (1_000_003, 1000), (MERSENNE_31, 1000)] {
        let a = FpSet::random(field(p), n, 4).expect("fits");
        group.bench_with_input(BenchmarkId::new("random", p), &a, |bench, a| {
            bench.iter(|| sumset(a, a).expect("same field"))
        });
    }
    group.finish();
}

pub fn d4_exact_universe(c: &mut Criterion) {
    let mut group = c.benchmark_group("d4_exact");
    group.sample_size(10);
    for p in [13u64, 17, 19] {
        let f = field(p);
        let a = FpSet::interval(f, 0, 4).expect("fits");
        let universe = f.full_set();
        group.bench_with_input(BenchmarkId::new("interval4", p), &(a, universe), |bench, (a, u)| {
            bench.iter(|| d4_exact(a, u).expect("small universe"))
        });
    }
    group.finish();
}

pub fn energy3_lifted(c: &mut Criterion) {
    let f = field(10_007);
    let poly = QuadPoly2::parse(f, "quad2:1,0,0,0,1,0").expect("valid").lift_to_three();
    let mut group = c.benchmark_group("energy3");
    group.sample_size(10);
    for n in [20u64, 60, 100] {
        let a = FpSet::random(f, n, 5).expect("fits");
        group.throughput(Throughput::Elements(n * n * n));
        group.bench_with_input(BenchmarkId::new("x^2+y lift", n), &a, |bench, a| {
            bench.iter(|| energy3(&poly, a, a, a).expect("within budget"))
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    energy4_sparse(c);
    sumsets(c);
    d4_exact_universe(c);
    energy3_lifted(c);
}
