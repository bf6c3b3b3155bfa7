use std::sync::Arc;

use autratio_core::{Approximator, Config, PrimeStream, Ratio, SelectionStatus};

fn approximator() -> Approximator {
    let config = Config {
        sieve_ceiling: 20_000_000,
        ..Config::default()
    };
    Approximator::with_primes(config, Arc::new(PrimeStream::new(config.sieve_ceiling)))
}

fn r(n: u64, d: u64) -> Ratio {
    Ratio::new(n, d).unwrap()
}

#[test]
fn larger_eps_never_needs_more_primes() {
    let approx = approximator();
    let targets = [r(1, 10), r(37, 100), r(9, 10), r(5, 4), r(2, 1), r(7, 2), r(49, 10)];
    let grid = [r(1, 10), r(1, 100), r(1, 1000), r(1, 10_000), r(1, 100_000)];
    for a in &targets {
        let mut previous = 0;
        for eps in &grid {
            let res = approx.approx_ray(a, eps).unwrap();
            assert_eq!(res.status, SelectionStatus::Converged, "a = {a}, eps = {eps}");
            assert!(
                res.trace.max_prime >= previous,
                "a = {a}: eps = {eps} used p <= {}, a larger eps used {previous}",
                res.trace.max_prime
            );
            previous = res.trace.max_prime;
        }
    }
}

#[test]
fn results_recertify_at_double_precision() {
    let approx = approximator();
    let bits = approx.config().precision_bits;
    for (a, eps) in [
        (r(2, 1), r(1, 1000)),
        (r(3, 10), r(1, 1000)),
        (r(1, 2), r(1, 1_000_000_000)),
        (r(314159, 100000), r(1, 10_000)),
        (r(1, 40), r(1, 10)),
        (r(0, 1), r(1, 10)),
    ] {
        let res = approx.approx_ray(&a, &eps).unwrap();
        assert!(res.certified, "a = {a}");
        assert!(approx.recertify(&res, 2 * bits).unwrap(), "a = {a}, eps = {eps}");
    }
}

#[test]
fn odd_only_excludes_two() {
    let approx = approximator();
    for k in 1..10 {
        let a = r(k, 10);
        let res = approx.approx_in_unit(&a, &r(1, 1000), true).unwrap();
        assert!(res.is_converged());
        assert_eq!(res.group.two_rank(), 0, "a = {a}");
    }
}
