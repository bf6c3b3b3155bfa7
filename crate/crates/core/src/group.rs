//! Finite abelian groups in primary decomposition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::primes::{factorize, PrimeStream};

/// A finite abelian group `⊕_p ⊕_i C_{p^{e_i}}`, stored as a map from prime to
/// the ascending list of exponents of its cyclic p-power summands.
///
/// The representation is canonical: two values are equal iff the groups are
/// isomorphic. The empty map is the trivial group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: BTreeMap<u64, Vec<u32>>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup::default()
    }

    /// Builds a group from `(prime, partition)` pairs. Partitions for the same
    /// prime are merged; each must hold positive exponents and the keys must be
    /// prime.
    pub fn from_parts<I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Vec<u32>)>,
    {
        let mut factors: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (p, exps) in parts {
            if !crate::primes::is_prime(p) {
                return Err(Error::InvalidPartition(format!("{p} is not prime")));
            }
            if exps.contains(&0) {
                return Err(Error::InvalidPartition(format!("zero exponent at prime {p}")));
            }
            if exps.is_empty() {
                continue;
            }
            factors.entry(p).or_default().extend(exps);
        }
        for exps in factors.values_mut() {
            exps.sort_unstable();
        }
        Ok(AbelianGroup { factors })
    }

    /// The cyclic group `C_n`, split into its primary components.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("C0 is not a finite group".into()));
        }
        Self::from_parts(factorize(n).into_iter().map(|(p, k)| (p, vec![k])))
    }

    /// `C_p^{rank}`.
    pub fn elementary(p: u64, rank: u32) -> Result<Self> {
        Self::from_parts([(p, vec![1; rank as usize])])
    }

    pub fn factors(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.factors
    }

    pub fn partition(&self, p: u64) -> Option<&[u32]> {
        self.factors.get(&p).map(Vec::as_slice)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total number of cyclic summands in the primary decomposition.
    pub fn rank(&self) -> usize {
        self.factors.values().map(Vec::len).sum()
    }

    pub fn order(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(&p, exps)| Pow::pow(BigUint::from(p), exps.iter().map(|&e| e as u64).sum::<u64>()))
            .product()
    }

    /// The order as a `u64`, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&p, exps) in &self.factors {
            for &e in exps {
                acc = acc.checked_mul(p.checked_pow(e)?)?;
            }
        }
        Some(acc)
    }

    pub fn direct_product(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut factors = self.factors.clone();
        for (&p, exps) in &other.factors {
            let slot = factors.entry(p).or_default();
            slot.extend_from_slice(exps);
            slot.sort_unstable();
        }
        AbelianGroup { factors }
    }

    /// Invariant factors `d_1 | d_2 | ... | d_k` with `G ≅ ⊕ C_{d_i}`.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        let k = self.factors.values().map(Vec::len).max().unwrap_or(0);
        // level 0 is the largest factor
        let mut out: Vec<BigUint> = (0..k)
            .map(|level| {
                self.factors
                    .iter()
                    .filter_map(|(&p, exps)| {
                        let n = exps.len();
                        (level < n).then(|| Pow::pow(BigUint::from(p), exps[n - 1 - level]))
                    })
                    .fold(BigUint::one(), |a, b| a * b)
            })
            .collect();
        out.reverse();
        out
    }

    /// Cyclic summand orders `p^e` of the primary decomposition, in canonical order.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        self.factors
            .iter()
            .flat_map(|(&p, exps)| exps.iter().map(move |&e| p.pow(e)))
            .collect()
    }
}

impl fmt::Display for AbelianGroup {
    /// Canonical literal: ascending primes, each exponent spelled out, e.g.
    /// `C2 x C4 x C9`. The trivial group is `C1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("C1");
        }
        let mut first = true;
        for (&p, exps) in &self.factors {
            for &e in exps {
                if !first {
                    f.write_str(" x ")?;
                }
                first = false;
                write!(f, "C{}", Pow::pow(BigUint::from(p), e))?;
            }
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group(s)
    }
}

/// Parses `Factor ("x" Factor)*` where `Factor := "C" uint ["^" uint]`.
/// Whitespace is ignored; the empty string and `C1` are the trivial group.
pub fn parse_group(text: &str) -> Result<AbelianGroup> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(AbelianGroup::trivial());
    }
    let mut group = AbelianGroup::trivial();
    for factor in compact.split('x') {
        let body = factor
            .strip_prefix('C')
            .ok_or_else(|| Error::Parse(format!("factor {factor:?} must start with 'C'")))?;
        let (base, exp) = match body.split_once('^') {
            Some((b, e)) => (b, parse_u64(e, factor)?),
            None => (body, 1),
        };
        let base = parse_u64(base, factor)?;
        if base == 0 {
            return Err(Error::Parse(format!("factor base 0 in {factor:?}")));
        }
        if exp == 0 {
            return Err(Error::Parse(format!("exponent 0 in {factor:?}")));
        }
        let exp = u32::try_from(exp).map_err(|_| Error::Parse(format!("exponent too large in {factor:?}")))?;
        let parts = factorize(base)
            .into_iter()
            .map(|(p, k)| (p, vec![k; exp as usize]));
        group = group.direct_product(&AbelianGroup::from_parts(parts)?);
    }
    Ok(group)
}

fn parse_u64(s: &str, factor: &str) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("expected an unsigned integer in {factor:?}")));
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("integer out of range in {factor:?}")))
}

/// Sorted set of positive integers stored as maximal inclusive runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSet {
    runs: Vec<(u64, u64)>,
    len: u64,
}

impl IndexSet {
    pub fn new() -> Self {
        IndexSet::default()
    }

    /// Appends `i`, which must exceed every index already present.
    pub fn push(&mut self, i: u64) {
        match self.runs.last_mut() {
            Some((_, end)) if *end + 1 == i => *end = i,
            Some((_, end)) => {
                assert!(i > *end, "indices must be pushed in increasing order");
                self.runs.push((i, i));
            }
            None => self.runs.push((i, i)),
        }
        self.len += 1;
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn first(&self) -> Option<u64> {
        self.runs.first().map(|r| r.0)
    }

    pub fn last(&self) -> Option<u64> {
        self.runs.last().map(|r| r.1)
    }

    pub fn contains(&self, i: u64) -> bool {
        let pos = self.runs.partition_point(|&(_, end)| end < i);
        self.runs.get(pos).is_some_and(|&(start, _)| start <= i)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs.iter().flat_map(|&(a, b)| a..=b)
    }

    /// Every index shifted by `delta`.
    pub fn shifted(&self, delta: u64) -> IndexSet {
        IndexSet {
            runs: self.runs.iter().map(|&(a, b)| (a + delta, b + delta)).collect(),
            len: self.len,
        }
    }
}

impl FromIterator<u64> for IndexSet {
    /// Panics if the items are not strictly increasing.
    fn from_iter<T: IntoIterator<Item = u64>>(iter: T) -> Self {
        let mut s = IndexSet::new();
        for i in iter {
            s.push(i);
        }
        s
    }
}

impl fmt::Display for IndexSet {
    /// Renders runs as `#a..#b`, joined by commas; `∅` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("∅");
        }
        for (k, &(a, b)) in self.runs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if a == b {
                write!(f, "#{a}")?;
            } else {
                write!(f, "#{a}..#{b}")?;
            }
        }
        Ok(())
    }
}

/// `C_2^{two_rank} × ∏_{i ∈ indices} C_{p_i}` where `p_i` is the i-th prime,
/// held without expanding the (possibly enormous) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymbolicGroup {
    two_rank: u32,
    odd_prime_indices: IndexSet,
}

impl SymbolicGroup {
    /// Fails if any index is below 2 (index 1 is the prime 2).
    pub fn new(two_rank: u32, odd_prime_indices: IndexSet) -> Result<Self> {
        if odd_prime_indices.first().is_some_and(|i| i < 2) {
            return Err(Error::InvalidArgument(
                "odd prime indices must be at least 2".into(),
            ));
        }
        Ok(SymbolicGroup {
            two_rank,
            odd_prime_indices,
        })
    }

    pub fn trivial() -> Self {
        SymbolicGroup::default()
    }

    pub fn two_rank(&self) -> u32 {
        self.two_rank
    }

    pub fn odd_prime_indices(&self) -> &IndexSet {
        &self.odd_prime_indices
    }

    pub fn is_trivial(&self) -> bool {
        self.two_rank == 0 && self.odd_prime_indices.is_empty()
    }

    /// Expands to an explicit decomposition when the index count is at most `cap`.
    pub fn materialize(&self, primes: &PrimeStream, cap: u64) -> Result<AbelianGroup> {
        let count = self.odd_prime_indices.len();
        if count > cap {
            return Err(Error::MaterializeCap { count, cap });
        }
        let mut parts = Vec::with_capacity(count as usize + 1);
        if self.two_rank > 0 {
            parts.push((2, vec![1; self.two_rank as usize]));
        }
        for i in self.odd_prime_indices.iter() {
            parts.push((primes.nth_prime(i)?, vec![1]));
        }
        AbelianGroup::from_parts(parts)
    }
}

impl fmt::Display for SymbolicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("C1");
        }
        let mut wrote = false;
        if self.two_rank == 1 {
            f.write_str("C2")?;
            wrote = true;
        } else if self.two_rank > 1 {
            write!(f, "C2^{}", self.two_rank)?;
            wrote = true;
        }
        if !self.odd_prime_indices.is_empty() {
            if wrote {
                f.write_str(" x ")?;
            }
            write!(
                f,
                "prod C_p over odd primes [{}] ({} primes)",
                self.odd_prime_indices,
                self.odd_prime_indices.len()
            )?;
        }
        Ok(())
    }
}
