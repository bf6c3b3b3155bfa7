//! Greedy finite-subsum selection: given positive terms `x_i → 0` with a
//! divergent series, pick indices whose sum approaches a target from below.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::IndexSet;
use crate::logspace::{ln_over_predecessor, Interval};
use crate::primes::PrimeStream;

/// An indexed sequence of positive terms `i ↦ x_i`, `i >= 1`.
pub trait TermSource {
    /// Enclosure of `x_i` at `bits` fractional bits, or `None` when the source
    /// cannot supply term `i`.
    fn term(&self, i: u64, bits: u32) -> Result<Option<Interval>>;

    /// Declared, not verified.
    fn terms_tend_to_zero(&self) -> bool;

    /// Declared, not verified.
    fn series_diverges(&self) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStatus {
    Converged,
    BudgetExhausted,
    CapacityExhausted,
}

impl SelectionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelectionStatus::Converged => "converged",
            SelectionStatus::BudgetExhausted => "budget_exhausted",
            SelectionStatus::CapacityExhausted => "capacity_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub indices: IndexSet,
    /// Enclosure of the sum of the selected terms.
    pub achieved: Interval,
    pub target: Interval,
    pub eps: Interval,
    pub status: SelectionStatus,
    /// Highest term index examined.
    pub examined: u64,
}

/// One decision of the greedy scan, reported to an observer.
#[derive(Debug)]
pub enum Step<'a> {
    Include {
        index: u64,
        term: &'a Interval,
        sum_before: &'a Interval,
    },
    Skip {
        index: u64,
        term: &'a Interval,
        sum_before: &'a Interval,
    },
}

/// Greedy selection: scan `i = 1, 2, ...` and take `x_i` iff `sum + x_i <= target`.
///
/// The fit test is decided on enclosures and resolves overlaps in favour of
/// inclusion, so exact ties are taken and the sum can exceed the target by
/// at most the enclosure width. A skip therefore always means the term
/// certainly did not fit. Before each term the scan stops as converged once
/// `target − sum < eps` holds for every point of the enclosures.
pub fn greedy_select(
    src: &dyn TermSource,
    target: &Interval,
    eps: &Interval,
    budget: u64,
) -> Result<Selection> {
    greedy_select_observed(src, target, eps, budget, |_| {})
}

pub fn greedy_select_observed(
    src: &dyn TermSource,
    target: &Interval,
    eps: &Interval,
    budget: u64,
    mut observe: impl FnMut(Step<'_>),
) -> Result<Selection> {
    let bits = target.bits();
    if eps.bits() != bits {
        return Err(Error::InvalidArgument("target and eps precision differ".into()));
    }
    if !eps.lo_scaled().is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if target.hi_scaled().is_negative() {
        return Err(Error::InvalidArgument("target must be nonnegative".into()));
    }
    let mut sum = Interval::zero(bits);
    let mut indices = IndexSet::new();
    let mut examined = 0;
    let mut i = 1u64;
    let status = loop {
        if target.hi_scaled() - sum.lo_scaled() < *eps.lo_scaled() {
            break SelectionStatus::Converged;
        }
        if i > budget {
            break SelectionStatus::BudgetExhausted;
        }
        let Some(x) = src.term(i, bits)? else {
            break SelectionStatus::CapacityExhausted;
        };
        debug_assert!(x.hi_scaled() > &BigInt::zero(), "terms must be positive");
        examined = i;
        let candidate = sum.add(&x);
        if candidate.lo_scaled() <= target.hi_scaled() {
            observe(Step::Include {
                index: i,
                term: &x,
                sum_before: &sum,
            });
            indices.push(i);
            sum = candidate;
        } else {
            observe(Step::Skip {
                index: i,
                term: &x,
                sum_before: &sum,
            });
        }
        i += 1;
    };
    Ok(Selection {
        indices,
        achieved: sum,
        target: target.clone(),
        eps: eps.clone(),
        status,
        examined,
    })
}

/// Shared cache of `ln(p_i / (p_i − 1))` enclosures, keyed by precision.
#[derive(Debug)]
pub struct PrimeLogCache {
    primes: Arc<PrimeStream>,
    tables: RwLock<HashMap<u32, Vec<Interval>>>,
}

const CACHE_CHUNK: usize = 1 << 14;

impl PrimeLogCache {
    pub fn new(primes: Arc<PrimeStream>) -> Self {
        PrimeLogCache {
            primes,
            tables: RwLock::new(HashMap::new()),
        }
    }

    pub fn primes(&self) -> &Arc<PrimeStream> {
        &self.primes
    }

    /// `ln(p_i / (p_i − 1))` for the 1-based prime index `i`, or `None` when
    /// `p_i` lies beyond the sieve ceiling.
    pub fn get(&self, i: u64, bits: u32) -> Result<Option<Interval>> {
        let idx = (i - 1) as usize;
        if let Some(v) = self.tables.read().get(&bits).and_then(|t| t.get(idx)) {
            return Ok(Some(v.clone()));
        }
        let have = self.tables.read().get(&bits).map_or(0, Vec::len);
        let want = (idx + 1).max(have * 2).max(CACHE_CHUNK);
        let mut primes = Vec::with_capacity(want - have);
        for k in have..want {
            match self.primes.nth_prime(k as u64 + 1) {
                Ok(p) => primes.push(p),
                Err(Error::SieveCapacity { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        let fresh: Vec<Interval> = primes
            .par_iter()
            .map(|&p| ln_over_predecessor(&BigInt::from(p), bits))
            .collect();
        let mut tables = self.tables.write();
        let table = tables.entry(bits).or_default();
        // another thread may have filled part of the range meanwhile
        if table.len() == have {
            table.extend(fresh);
        }
        Ok(table.get(idx).cloned())
    }
}

/// `x_i = ln(p_i / (p_i − 1))` over all primes, or over odd primes only
/// (term `j` then corresponds to `p_{j+1}`).
#[derive(Debug, Clone)]
pub struct PrimeRatioTerms {
    odd_only: bool,
    cache: Arc<PrimeLogCache>,
}

impl PrimeRatioTerms {
    pub fn with_cache(odd_only: bool, cache: Arc<PrimeLogCache>) -> Self {
        PrimeRatioTerms { odd_only, cache }
    }

    pub fn odd_only(&self) -> bool {
        self.odd_only
    }

    /// Prime index (into `p_1 = 2, p_2 = 3, ...`) of term `j`.
    pub fn prime_index(&self, j: u64) -> u64 {
        if self.odd_only {
            j + 1
        } else {
            j
        }
    }
}

pub fn prime_ratio_terms(odd_only: bool, primes: Arc<PrimeStream>) -> PrimeRatioTerms {
    PrimeRatioTerms::with_cache(odd_only, Arc::new(PrimeLogCache::new(primes)))
}

impl TermSource for PrimeRatioTerms {
    fn term(&self, j: u64, bits: u32) -> Result<Option<Interval>> {
        if j == 0 {
            return Err(Error::InvalidArgument("term indices start at 1".into()));
        }
        self.cache.get(self.prime_index(j), bits)
    }

    // p_i → ∞
    fn terms_tend_to_zero(&self) -> bool {
        true
    }

    // x_i / (1/p_i) → 1 and Σ 1/p_i diverges
    fn series_diverges(&self) -> bool {
        true
    }
}
