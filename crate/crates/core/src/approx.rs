//! Constructive density of `f`: for a target `a >= 0` and tolerance `eps > 0`,
//! build an explicit group `C_2^n × ∏ C_{p_i}` with certified `|f(G) − a| < eps`.
//!
//! Products of `(p − 1)/p` over distinct primes are found by running the
//! greedy subsum on `ln(p/(p − 1))` in log space. Targets above 1 are first
//! divided by `b = f(C_2^n) > a` and the quotient is approximated with odd
//! primes only, which keeps the two parts of coprime order.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::aut::{f_elementary_two, f_exact, f_log, ln_f_elementary_two};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, IndexSet, SymbolicGroup};
use crate::logspace::{ln_rational, Interval, LogValue};
use crate::primes::{estimate_sieve_limit, PrimeStream};
use crate::ratio::Ratio;
use crate::subsum::{greedy_select, PrimeLogCache, PrimeRatioTerms, Selection, SelectionStatus};

/// Which construction produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The target is hit exactly without a search (`a = 1` or `a = f(C_2^n)`).
    Exact,
    /// Greedy search for a product landing in `[a, a + eps)`.
    Greedy,
    /// `a <= eps`: any product below `a + eps` will do.
    BelowTolerance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub branch: Branch,
    pub two_rank: u32,
    /// `f(C_2^n)` when a 2-part was used to lift the target.
    pub b: Option<Ratio>,
    /// Tolerance passed to the odd part, `eps / b`.
    pub eps1: Option<Ratio>,
    pub selection: Option<Selection>,
    /// Largest prime index examined by the greedy scan.
    pub max_prime_index: u64,
    /// Largest prime examined.
    pub max_prime: u64,
    /// Sieve size predicted by the Mertens-type estimate, when it fits the ceiling.
    pub sieve_estimate: Option<u64>,
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxResult {
    pub group: SymbolicGroup,
    /// Certified enclosure of `ln f(G)`.
    pub achieved: LogValue,
    /// `f(G)` exactly, when the group was small enough to materialize.
    pub exact: Option<Ratio>,
    pub target: Ratio,
    pub eps: Ratio,
    pub status: SelectionStatus,
    /// Whether `f(G) ∈ (target − eps, target + eps)` was proved.
    pub certified: bool,
    pub trace: Trace,
}

impl ApproxResult {
    pub fn is_converged(&self) -> bool {
        self.status == SelectionStatus::Converged
    }
}

/// Minimal `n` with `f(C_2^n) > a`, returned with `b = f(C_2^n)`.
pub fn choose_two_rank(a: &Ratio) -> Result<(u32, Ratio)> {
    if *a <= Ratio::one() {
        return Err(Error::InvalidArgument(format!("choose_two_rank needs a > 1, got {a}")));
    }
    // f(C_2^n) is increasing and unbounded
    let mut n = 1;
    loop {
        let b = f_elementary_two(n);
        if b > *a {
            return Ok((n, b));
        }
        n += 1;
    }
}

/// Checks `exp(log) ⊂ (a − eps, a + eps)` with outward-rounded logs.
pub fn certify_log(log: &Interval, a: &Ratio, eps: &Ratio) -> Result<bool> {
    let bits = log.bits();
    let upper = ln_rational(a.add(eps).as_big_rational(), bits)?;
    if !log.certainly_lt(&upper) {
        return Ok(false);
    }
    match a.checked_sub(eps) {
        Some(low) if !low.is_zero() => {
            let lower = ln_rational(low.as_big_rational(), bits)?;
            Ok(lower.certainly_lt(log))
        }
        _ => Ok(true),
    }
}

/// Runs the constructions against a shared prime sieve and log-term cache.
#[derive(Debug, Clone)]
pub struct Approximator {
    config: Config,
    cache: Arc<PrimeLogCache>,
}

impl Approximator {
    pub fn new(config: Config) -> Self {
        let primes = Arc::new(PrimeStream::new(config.sieve_ceiling));
        Self::with_primes(config, primes)
    }

    pub fn with_primes(config: Config, primes: Arc<PrimeStream>) -> Self {
        Approximator {
            config,
            cache: Arc::new(PrimeLogCache::new(primes)),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn primes(&self) -> &Arc<PrimeStream> {
        self.cache.primes()
    }

    /// Approximates `a ∈ [0, 1]` by `∏_{i∈I} (p_i − 1)/p_i`, with the
    /// product landing in `[a, a + eps)` when `a > eps`.
    pub fn approx_in_unit(&self, a: &Ratio, eps: &Ratio, odd_only: bool) -> Result<ApproxResult> {
        if *a > Ratio::one() {
            return Err(Error::InvalidArgument(format!("target {a} lies outside [0, 1]")));
        }
        check_eps(eps)?;
        let bits = self.config.precision_bits;
        let upper = ln_rational(a.add(eps).as_big_rational(), bits)?;
        self.unit_search(a, eps, odd_only, &Interval::zero(bits), &upper, a, eps)
    }

    /// Approximates any `a >= 0`.
    pub fn approx_ray(&self, a: &Ratio, eps: &Ratio) -> Result<ApproxResult> {
        check_eps(eps)?;
        if *a <= Ratio::one() {
            return self.approx_in_unit(a, eps, false);
        }
        let (mut n, mut b) = choose_two_rank(a)?;
        let below = f_elementary_two(n - 1);
        if below == *a {
            // a = f(C_2^{n-1}) exactly; the quotient is 1
            n -= 1;
            b = below;
        }
        let quotient = a / &b;
        let eps1 = eps / &b;
        let bits = self.config.precision_bits;
        let shift = ln_f_elementary_two(n, bits);
        let upper = ln_rational(a.add(eps).as_big_rational(), bits)?;
        let mut res = self.unit_search(&quotient, &eps1, true, &shift, &upper, a, eps)?;
        res.group = SymbolicGroup::new(n, res.group.odd_prime_indices().clone())?;
        res.trace.two_rank = n;
        res.trace.b = Some(b.clone());
        res.trace.eps1 = Some(eps1);
        res.exact = res.exact.map(|inner| &inner * &b);
        Ok(res)
    }

    /// Re-derives `ln f(G)` from scratch at `bits` and checks containment.
    pub fn recertify(&self, res: &ApproxResult, bits: u32) -> Result<bool> {
        let lv = f_log(&res.group, self.primes(), bits)?;
        certify_log(lv.interval(), &res.target, &res.eps)
    }

    /// Greedy search for the odd (or squarefree) factor.
    ///
    /// `shift` encloses `ln f` of the 2-part already fixed (zero in the unit
    /// case) and `upper` encloses `ln(a + eps)` for the overall target. The
    /// scan stops once `shift + ln ∏ (p−1)/p` is certainly below `upper`.
    #[allow(clippy::too_many_arguments)]
    fn unit_search(
        &self,
        q: &Ratio,
        q_eps: &Ratio,
        odd_only: bool,
        shift: &Interval,
        upper: &Interval,
        a: &Ratio,
        eps: &Ratio,
    ) -> Result<ApproxResult> {
        let bits = self.config.precision_bits;
        let terms = PrimeRatioTerms::with_cache(odd_only, self.cache.clone());
        let mut trace = Trace {
            branch: Branch::Exact,
            two_rank: 0,
            b: None,
            eps1: None,
            selection: None,
            max_prime_index: 0,
            max_prime: 0,
            sieve_estimate: None,
            precision_bits: bits,
        };
        if q.is_one() {
            let achieved = shift.clone();
            let certified = certify_log(&achieved, a, eps)?;
            return Ok(ApproxResult {
                group: SymbolicGroup::trivial(),
                achieved: achieved.into(),
                exact: Some(Ratio::one()),
                target: a.clone(),
                eps: eps.clone(),
                status: SelectionStatus::Converged,
                certified,
                trace,
            });
        }

        // the selected log-sum must certainly exceed this to land below `upper`
        let need = shift.hi_scaled() - upper.lo_scaled();
        let one = BigInt::one() << bits;
        let (target, tol, branch) = if q <= q_eps {
            // any product below q + q_eps works: overshoot `need` by a full unit
            let t = (&need + &one).max(BigInt::zero());
            let t = Interval::from_scaled(t.clone(), t, bits);
            let tol = Interval::from_scaled(one.clone(), one, bits);
            (t, tol, Branch::BelowTolerance)
        } else {
            let inv = BigRational::new(q.denom().into(), q.numer().into());
            let t = ln_rational(&inv, bits)?;
            let v = t.hi_scaled() - &need;
            (t, Interval::from_scaled(v.clone(), v, bits), Branch::Greedy)
        };
        // the tolerance must dwarf accumulated rounding
        if *tol.lo_scaled() < BigInt::one() << 64u32 {
            return Err(Error::PrecisionRefused { bits });
        }
        trace.branch = branch;
        trace.sieve_estimate = target
            .mid_f64()
            .is_finite()
            .then(|| estimate_sieve_limit(target.mid_f64().max(0.0), self.config.sieve_ceiling).ok())
            .flatten();

        let sel = greedy_select(&terms, &target, &tol, u64::MAX)?;
        let mut two_rank = 0;
        let mut odd = IndexSet::new();
        for j in sel.indices.iter() {
            match terms.prime_index(j) {
                1 => two_rank = 1,
                i => odd.push(i),
            }
        }
        let group = SymbolicGroup::new(two_rank, odd)?;
        if sel.examined > 0 {
            trace.max_prime_index = terms.prime_index(sel.examined);
            trace.max_prime = self.primes().nth_prime(trace.max_prime_index)?;
        }
        let achieved = shift.sub(&sel.achieved);
        let status = sel.status;
        let certified = status == SelectionStatus::Converged && certify_log(&achieved, a, eps)?;
        if status == SelectionStatus::Converged && !certified {
            return Err(Error::Certification(format!(
                "greedy converged but containment of f in ({a} ± {eps}) could not be proved"
            )));
        }
        let exact = if group.odd_prime_indices().len() <= self.config.materialize_cap {
            let g: AbelianGroup = group.materialize(self.primes(), self.config.materialize_cap)?;
            Some(f_exact(&g))
        } else {
            None
        };
        trace.selection = Some(sel);
        Ok(ApproxResult {
            group,
            achieved: achieved.into(),
            exact,
            target: a.clone(),
            eps: eps.clone(),
            status,
            certified,
            trace,
        })
    }
}

fn check_eps(eps: &Ratio) -> Result<()> {
    if eps.is_zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    Ok(())
}

/// Rough `f64` view of the achieved value, for display.
pub fn achieved_f64(res: &ApproxResult) -> f64 {
    match &res.exact {
        Some(r) => r.to_f64(),
        None => res.achieved.log_value().exp(),
    }
}
