use std::hint::black_box;
use std::sync::Arc;

use autratio_core::{
    aut_order, aut_order_bruteforce, find_exact, parse_group, prime_ratio_terms, greedy_select,
    Approximator, Config, Interval, OracleCaps, PrimeStream, Ratio, SearchBounds,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;

fn bench_aut(c: &mut Criterion) {
    let mut g = c.benchmark_group("aut_order");
    for lit in ["C2^3", "C2 x C4^3 x C8^2 x C9 x C27", "C2^40 x C3^20 x C5^10"] {
        let group = parse_group(lit).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(lit), &group, |b, group| {
            b.iter(|| aut_order(black_box(group)))
        });
    }
    let caps = OracleCaps::default();
    let small = parse_group("C2 x C4 x C3").unwrap();
    g.bench_function("bruteforce C2 x C4 x C3", |b| {
        b.iter(|| aut_order_bruteforce(black_box(&small), &caps).unwrap())
    });
    g.finish();
}

fn bench_sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    g.sample_size(10);
    for n in [100_000u64, 1_000_000] {
        g.bench_with_input(BenchmarkId::new("nth_prime", n), &n, |b, &n| {
            b.iter(|| PrimeStream::new(100_000_000).nth_prime(n).unwrap())
        });
    }
    g.finish();
}

fn bench_greedy(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy");
    g.sample_size(10);
    let primes = Arc::new(PrimeStream::new(100_000_000));
    let terms = prime_ratio_terms(false, primes.clone());
    let bits = 160;
    let target = Interval::from_rational(&BigRational::new(BigInt::from(3), BigInt::from(2)), bits);
    let eps = Interval::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(100_000)), bits);
    g.bench_function("prime terms t=1.5 eps=1e-5", |b| {
        b.iter(|| greedy_select(&terms, &target, &eps, u64::MAX).unwrap())
    });

    let approx = Approximator::with_primes(Config::default(), primes);
    let eps = Ratio::new(1u32, 1000u32).unwrap();
    for a in ["0.3", "2", "4.7"] {
        let target: Ratio = a.parse().unwrap();
        g.bench_with_input(BenchmarkId::new("approx_ray eps=1e-3", a), &target, |b, target| {
            b.iter(|| approx.approx_ray(target, &eps).unwrap())
        });
    }
    g.finish();
}

fn bench_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_exact");
    for (a, max_order) in [("1", 500u64), ("21", 2000), ("3/2", 2000)] {
        let target: Ratio = a.parse().unwrap();
        let bounds = SearchBounds::new(max_order, max_order, 8).unwrap();
        g.bench_with_input(
            BenchmarkId::new(format!("max_order={max_order}"), a),
            &target,
            |b, target| b.iter(|| find_exact(target, &bounds)),
        );
    }
    g.finish();
}

criterion_group!(benches, bench_aut, bench_sieve, bench_greedy, bench_search);
criterion_main!(benches);
