//! `|Aut(G)|`, `f(G) = |Aut(G)|/|G|` and `f'(G) = |Aut(G)|/φ(|G|)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, SymbolicGroup};
use crate::logspace::{ln_over_predecessor, Interval, LogValue};
use crate::primes::PrimeStream;
use crate::ratio::Ratio;

/// Order of the automorphism group of `⊕_i C_{p^{e_i}}` for an ascending
/// exponent list, via the closed form for abelian p-groups:
///
/// `∏_k (p^{d_k} − p^{k−1}) · ∏_j p^{e_j (n − d_j)} · ∏_i p^{(e_i − 1)(n − c_i + 1)}`
///
/// with `d_k = max{l : e_l = e_k}` and `c_k = min{l : e_l = e_k}` (1-based).
pub fn aut_order_local(p: u64, partition: &[u32]) -> Result<BigUint> {
    if partition.is_empty() {
        return Err(Error::InvalidPartition("empty partition".into()));
    }
    if partition.contains(&0) {
        return Err(Error::InvalidPartition("exponents must be positive".into()));
    }
    if partition.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidPartition(format!(
            "partition {partition:?} is not sorted ascending"
        )));
    }
    if p < 2 {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let n = partition.len() as u64;
    let bp = BigUint::from(p);
    let mut product = BigUint::one();
    let mut exponent: u64 = 0;
    let mut start = 0usize;
    // walk blocks of equal exponents; inside a block c and d are constant
    while start < partition.len() {
        let e = partition[start];
        let mut end = start;
        while end + 1 < partition.len() && partition[end + 1] == e {
            end += 1;
        }
        let c = start as u64 + 1;
        let d = end as u64 + 1;
        let p_d = Pow::pow(&bp, d);
        for k in c..=d {
            product *= &p_d - Pow::pow(&bp, k - 1);
        }
        let block = d - c + 1;
        exponent += block * (e as u64) * (n - d);
        exponent += block * (e as u64 - 1) * (n - c + 1);
        start = end + 1;
    }
    Ok(product * Pow::pow(bp, exponent))
}

/// `|Aut(G)|` as the product of the local orders over the primes dividing `|G|`.
pub fn aut_order(g: &AbelianGroup) -> BigUint {
    g.factors()
        .iter()
        .map(|(&p, part)| aut_order_local(p, part).expect("canonical partitions are valid"))
        .product()
}

/// `f(G)` in lowest terms.
pub fn f_exact(g: &AbelianGroup) -> Ratio {
    Ratio::new(aut_order(g), g.order()).expect("group order is positive")
}

/// Euler's totient of `|G|`, read off the decomposition.
pub fn totient_of_order(g: &AbelianGroup) -> BigUint {
    g.factors()
        .iter()
        .map(|(&p, part)| {
            let k: u64 = part.iter().map(|&e| e as u64).sum();
            Pow::pow(BigUint::from(p), k - 1) * BigUint::from(p - 1)
        })
        .product()
}

/// `f'(G) = |Aut(G)| / φ(|G|)`.
pub fn f_prime_exact(g: &AbelianGroup) -> Ratio {
    Ratio::new(aut_order(g), totient_of_order(g)).expect("totient is positive")
}

/// `f(C_2^n) = |GL_n(2)| / 2^n` exactly.
pub fn f_elementary_two(n: u32) -> Ratio {
    let two_n = BigUint::one() << n as usize;
    let gl: BigUint = (0..n)
        .map(|k| &two_n - (BigUint::one() << k as usize))
        .product();
    Ratio::new(gl, two_n).expect("nonzero")
}

/// `ln f(C_2^n) = n(n−1) ln 2 − Σ_{m=1..n} ln(2^m / (2^m − 1))`.
pub fn ln_f_elementary_two(n: u32, bits: u32) -> Interval {
    let ln2 = ln_over_predecessor(&BigInt::from(2), bits);
    let nn = BigInt::from(n) * BigInt::from(n.saturating_sub(1));
    let mut acc = ln2.scale(&nn);
    let direct = n.min(bits + 2);
    for m in 1..=direct {
        acc = acc.sub(&ln_over_predecessor(&(BigInt::one() << m as usize), bits));
    }
    if n > direct {
        // Σ_{m > bits+2} ln(1/(1 − 2^-m)) < 4·2^-(bits+3) < 1 ulp
        let tail = Interval::from_scaled(BigInt::from(0), BigInt::one(), bits);
        acc = acc.sub(&tail);
    }
    acc
}

/// Certified `ln f(G)` for a symbolic group, evaluated term by term.
pub fn f_log(s: &SymbolicGroup, primes: &PrimeStream, bits: u32) -> Result<LogValue> {
    use rayon::prelude::*;

    let indices: Vec<u64> = s.odd_prime_indices().iter().collect();
    let odd = indices
        .par_chunks(4096)
        .map(|chunk| -> Result<Interval> {
            let mut acc = Interval::zero(bits);
            for &i in chunk {
                let p = primes.nth_prime(i)?;
                acc.add_assign(&ln_over_predecessor(&BigInt::from(p), bits));
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Interval::zero(bits), |a, b| a.add(&b));
    Ok(LogValue::from(ln_f_elementary_two(s.two_rank(), bits).sub(&odd)))
}
