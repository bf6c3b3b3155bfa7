//! The indexed prime sequence `p_1 = 2, p_2 = 3, ...`, backed by a segmented
//! sieve that grows on demand up to a hard ceiling.

use parking_lot::RwLock;

use crate::error::{Error, Result};

/// Meissel–Mertens constant.
pub const MERTENS: f64 = 0.261_497_212_847_642_8;

/// Headroom added to the requested log-sum when sizing the sieve.
pub const SIEVE_MARGIN: f64 = 0.5;

const SEGMENT: u64 = 1 << 18;
const MIN_LIMIT: u64 = 1_000;

#[derive(Debug)]
struct Sieved {
    limit: u64,
    primes: Vec<u64>,
}

/// Shared cache of all primes up to the current sieve limit.
///
/// Reads take a shared lock; growth is serialized behind the write lock.
#[derive(Debug)]
pub struct PrimeStream {
    ceiling: u64,
    inner: RwLock<Sieved>,
}

impl PrimeStream {
    pub fn new(ceiling: u64) -> Self {
        PrimeStream {
            ceiling: ceiling.max(2),
            inner: RwLock::new(Sieved {
                limit: 1,
                primes: Vec::new(),
            }),
        }
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    /// Largest integer examined so far.
    pub fn sieve_limit(&self) -> u64 {
        self.inner.read().limit
    }

    /// Number of primes currently cached.
    pub fn cached_len(&self) -> usize {
        self.inner.read().primes.len()
    }

    /// The `i`-th prime, 1-based.
    pub fn nth_prime(&self, i: u64) -> Result<u64> {
        if i == 0 {
            return Err(Error::InvalidArgument("prime indices start at 1".into()));
        }
        let idx = (i - 1) as usize;
        if let Some(&p) = self.inner.read().primes.get(idx) {
            return Ok(p);
        }
        loop {
            let limit = self.sieve_limit();
            if limit >= self.ceiling {
                return Err(Error::SieveCapacity {
                    needed: nth_prime_upper_bound(i),
                    ceiling: self.ceiling,
                });
            }
            let want = nth_prime_upper_bound(i).max(limit.saturating_mul(2));
            self.extend_to(want.min(self.ceiling));
            if let Some(&p) = self.inner.read().primes.get(idx) {
                return Ok(p);
            }
        }
    }

    /// Makes sure every prime `<= x` is cached.
    pub fn ensure(&self, x: u64) -> Result<()> {
        if x > self.ceiling {
            return Err(Error::SieveCapacity {
                needed: x,
                ceiling: self.ceiling,
            });
        }
        self.extend_to(x);
        Ok(())
    }

    /// Runs `f` over the cached primes `<= x`, sieving further if needed.
    pub fn with_primes_up_to<R>(&self, x: u64, f: impl FnOnce(&[u64]) -> R) -> Result<R> {
        self.ensure(x)?;
        let guard = self.inner.read();
        let end = guard.primes.partition_point(|&p| p <= x);
        Ok(f(&guard.primes[..end]))
    }

    fn extend_to(&self, target: u64) {
        let target = target.min(self.ceiling).max(MIN_LIMIT.min(self.ceiling));
        if self.inner.read().limit >= target {
            return;
        }
        let mut guard = self.inner.write();
        if guard.limit >= target {
            return;
        }
        let base = small_primes(isqrt(target));
        let mut low = guard.limit + 1;
        let mut marks = vec![false; SEGMENT as usize];
        while low <= target {
            let high = (low + SEGMENT - 1).min(target);
            let span = (high - low + 1) as usize;
            marks[..span].fill(true);
            for &p in &base {
                if p * p > high {
                    break;
                }
                let start = (p * p).max(low.div_ceil(p) * p);
                let mut m = start;
                while m <= high {
                    marks[(m - low) as usize] = false;
                    m += p;
                }
            }
            for (off, &is_p) in marks[..span].iter().enumerate() {
                let n = low + off as u64;
                if is_p && n >= 2 {
                    guard.primes.push(n);
                }
            }
            low = high + 1;
        }
        guard.limit = target;
    }
}

/// Plain sieve of Eratosthenes for the base primes.
fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is_p = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if is_p[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Rosser-style bound `p_n < n (ln n + ln ln n)` for `n >= 6`.
fn nth_prime_upper_bound(i: u64) -> u64 {
    if i < 6 {
        return 13;
    }
    let n = i as f64;
    (n * (n.ln() + n.ln().ln())).ceil() as u64 + 1
}

/// Sieve size `x` such that `ln ln x + M − ln 2 >= target + margin`.
///
/// Only a sizing hint; callers still verify their own progress.
pub fn estimate_sieve_limit(target_log_sum: f64, ceiling: u64) -> Result<u64> {
    if target_log_sum.is_nan() || target_log_sum < 0.0 || target_log_sum.is_infinite() {
        return Err(Error::InvalidArgument(format!(
            "target log-sum must be a finite nonnegative real, got {target_log_sum}"
        )));
    }
    if target_log_sum == 0.0 {
        return Ok(MIN_LIMIT.min(ceiling));
    }
    let loglog = target_log_sum + SIEVE_MARGIN + std::f64::consts::LN_2 - MERTENS;
    let x = loglog.exp().exp();
    if !x.is_finite() || x > ceiling as f64 {
        return Err(Error::SieveCapacity {
            needed: if x.is_finite() && x < u64::MAX as f64 { x.ceil() as u64 } else { u64::MAX },
            ceiling,
        });
    }
    Ok((x.ceil() as u64).max(16))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs; `1` gives `[]`.
///
/// Panics on `0`.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut raw = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d <= 1 << 16 && d * d <= m {
        while m.is_multiple_of(d) {
            raw.push(d);
            m /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            raw.push(x);
        } else {
            let f = pollard_rho(x);
            stack.push(f);
            stack.push(x / f);
        }
    }
    raw.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in raw {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_prime_examples() {
        let ps = PrimeStream::new(100_000_000);
        assert_eq!(ps.nth_prime(1).unwrap(), 2);
        assert_eq!(ps.nth_prime(2).unwrap(), 3);
        assert_eq!(ps.nth_prime(25).unwrap(), 97);
        assert_eq!(ps.nth_prime(10_000).unwrap(), 104_729);
        assert!(ps.nth_prime(0).is_err());
    }

    #[test]
    fn ceiling_is_enforced() {
        let ps = PrimeStream::new(100);
        assert_eq!(ps.nth_prime(25).unwrap(), 97);
        assert!(matches!(ps.nth_prime(26), Err(Error::SieveCapacity { .. })));
        assert!(ps.ensure(101).is_err());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let ps = PrimeStream::new(1 << 40);
        let sieved = ps.with_primes_up_to(100_000, |s| s.to_vec()).unwrap();
        let trial: Vec<u64> = (2..=100_000u64)
            .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(sieved, trial);
    }

    #[test]
    fn incremental_growth_is_consistent() {
        let ps = PrimeStream::new(1 << 30);
        ps.ensure(5_000).unwrap();
        ps.ensure(700_001).unwrap();
        let a = ps.with_primes_up_to(700_001, |s| s.to_vec()).unwrap();
        let fresh = PrimeStream::new(1 << 30);
        let b = fresh.with_primes_up_to(700_001, |s| s.to_vec()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn factorize_cases() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(1_000_000_007 * 998_244_353), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(factorize(1 << 63), vec![(2, 63)]);
    }

    #[test]
    fn miller_rabin() {
        assert!(is_prime(2) && is_prime(3) && is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(561) && !is_prime(3_215_031_751));
    }

    #[test]
    fn estimate_examples() {
        let ceiling = 100_000_000;
        assert_eq!(estimate_sieve_limit(0.0, ceiling).unwrap(), 1_000);
        let x = estimate_sieve_limit(0.75, ceiling).unwrap() as f64;
        assert!(x.ln().ln() >= 1.68 && (200.0..230.0).contains(&x), "{x}");
        // the fixed formula puts 2.5 far beyond the default ceiling
        assert!(matches!(
            estimate_sieve_limit(2.5, ceiling),
            Err(Error::SieveCapacity { .. })
        ));
        let big = estimate_sieve_limit(2.5, u64::MAX).unwrap() as f64;
        assert!(big.ln().ln() >= 2.5 + SIEVE_MARGIN + std::f64::consts::LN_2 - MERTENS - 1e-12);
        assert!(estimate_sieve_limit(-1.0, ceiling).is_err());
    }
}
