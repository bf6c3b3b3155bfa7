//! Certified fixed-point arithmetic for natural logarithms.
//!
//! An [`Interval`] holds integers `lo <= hi` at a binary scale of `bits`
//! fractional bits and stands for the real interval `[lo, hi] / 2^bits`.
//! Every routine here rounds outward, so the true value always lies inside.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

impl Interval {
    pub fn zero(bits: u32) -> Self {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            bits,
        }
    }

    /// Builds from raw scaled endpoints. Panics if `lo > hi`.
    pub fn from_scaled(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, bits }
    }

    /// Tightest enclosure of an exact rational.
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r * BigRational::from_integer(BigInt::one() << bits);
        Interval {
            lo: scaled.floor().to_integer(),
            hi: scaled.ceil().to_integer(),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.bits)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.bits)
    }

    /// Width in units of `2^-bits`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lo() <= r && r <= &self.hi()
    }

    fn check_bits(&self, other: &Interval) {
        assert_eq!(self.bits, other.bits, "interval precision mismatch");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check_bits(other);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: self.bits,
        }
    }

    pub fn add_assign(&mut self, other: &Interval) {
        self.check_bits(other);
        self.lo += &other.lo;
        self.hi += &other.hi;
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.check_bits(other);
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Interval { lo: b, hi: a, bits: self.bits }
        } else {
            Interval { lo: a, hi: b, bits: self.bits }
        }
    }

    /// True when every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.check_bits(other);
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.check_bits(other);
        self.hi < other.lo
    }

    pub fn mid_f64(&self) -> f64 {
        let two = BigInt::from(2);
        BigRational::new(&self.lo + &self.hi, two << self.bits)
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lv = LogValue::from(self.clone());
        write!(f, "{:.12e} ± {:.3e}", lv.log_value(), lv.abs_error())
    }
}

/// Natural log of a positive rational, enclosed at `bits` fractional bits.
pub fn ln_rational(x: &BigRational, bits: u32) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::InvalidArgument(format!("log of non-positive {x}")));
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    // x = 2^k * y with y in [1, 2)
    let mut k = n.bits() as i64 - d.bits() as i64;
    let y = loop {
        let y = if k >= 0 {
            BigRational::new(x.numer().clone(), x.denom() << (k as usize))
        } else {
            BigRational::new(x.numer() << ((-k) as usize), x.denom().clone())
        };
        let two = BigRational::from_integer(BigInt::from(2));
        if y < BigRational::one() {
            k -= 1;
        } else if y >= two {
            k += 1;
        } else {
            break y;
        }
    };
    let mut out = if y.is_one() {
        Interval::zero(bits)
    } else {
        let (r, s) = (y.numer() - y.denom(), y.numer() + y.denom());
        atanh_ratio(&r, &s, bits).scale(&BigInt::from(2))
    };
    if k != 0 {
        let ln2 = atanh_ratio(&BigInt::one(), &BigInt::from(3), bits).scale(&BigInt::from(2));
        out.add_assign(&ln2.scale(&BigInt::from(k)));
    }
    Ok(out)
}

/// `ln(q / (q - 1))` for an integer `q >= 2`, via `atanh(1 / (2q - 1))`.
pub fn ln_over_predecessor(q: &BigInt, bits: u32) -> Interval {
    assert!(*q >= BigInt::from(2), "q must be at least 2");
    let s = q * BigInt::from(2) - BigInt::one();
    atanh_ratio(&BigInt::one(), &s, bits).scale(&BigInt::from(2))
}

/// Enclosure of `atanh(r/s)` for `0 <= r/s <= 1/3`.
fn atanh_ratio(r: &BigInt, s: &BigInt, bits: u32) -> Interval {
    debug_assert!(!r.is_negative() && s.is_positive());
    debug_assert!(BigInt::from(3) * r <= *s);
    if r.is_zero() {
        return Interval::zero(bits);
    }
    let r2 = r * r;
    let s2 = s * s;
    let mut num = r << bits;
    let mut den = s.clone();
    let mut lo = BigInt::zero();
    let mut terms = 0u64;
    let mut j = 0u64;
    loop {
        let (q, _) = num.div_rem(&(&den * BigInt::from(2 * j + 1)));
        lo += q;
        terms += 1;
        // stop once the undivided term is below one ulp
        if num < den {
            break;
        }
        num *= &r2;
        den *= &s2;
        j += 1;
    }
    // one ulp per truncated term, plus the geometric tail (< 1 ulp)
    let hi = &lo + BigInt::from(terms + 1);
    Interval { lo, hi, bits }
}

/// A value in natural-log space with a certified absolute error bound.
///
/// The true quantity lies in `[exp(log_value - abs_error), exp(log_value + abs_error)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogValue {
    interval: Interval,
}

impl From<Interval> for LogValue {
    fn from(interval: Interval) -> Self {
        LogValue { interval }
    }
}

impl LogValue {
    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    /// Nearest `f64` to the interval midpoint.
    pub fn log_value(&self) -> f64 {
        self.interval.mid_f64()
    }

    /// Smallest convenient `f64` bounding `|true - log_value()|`.
    pub fn abs_error(&self) -> f64 {
        let center = self.log_value();
        if self.interval.lo == self.interval.hi
            && BigRational::from_float(center).as_ref() == Some(&self.interval.lo())
        {
            return 0.0;
        }
        let c = BigRational::from_float(center).unwrap_or_else(BigRational::zero);
        let a = (&c - self.interval.lo()).abs();
        let b = (self.interval.hi() - &c).abs();
        let err = if a > b { a } else { b };
        round_up_f64(&err)
    }
}

/// Smallest representable `f64` not below `r` (for `r >= 0`).
pub(crate) fn round_up_f64(r: &BigRational) -> f64 {
    let mut v = r.to_f64().unwrap_or(f64::INFINITY);
    while v.is_finite() {
        match BigRational::from_float(v).map(|fv| fv.cmp(r)) {
            Some(Ordering::Less) => v = v.next_up(),
            _ => break,
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact `2^exp`.
    fn pow2(exp: i64) -> BigRational {
        if exp >= 0 {
            BigRational::from_integer(BigInt::one() << exp as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-exp) as usize)
        }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ln2_encloses_f64() {
        let iv = ln_rational(&q(2, 1), 128).unwrap();
        let f = BigRational::from_float(std::f64::consts::LN_2).unwrap();
        // f64 constant is within 2^-53 of the truth
        let slack = pow2(-52);
        assert!(iv.lo() - &slack <= f && f <= iv.hi() + &slack);
        assert!(iv.width_ulps() < BigInt::from(1000));
    }

    #[test]
    fn ln_one_is_exact_zero() {
        let iv = ln_rational(&q(1, 1), 64).unwrap();
        assert_eq!(iv, Interval::zero(64));
        let lv = LogValue::from(iv);
        assert_eq!(lv.log_value(), 0.0);
        assert_eq!(lv.abs_error(), 0.0);
    }

    #[test]
    fn ln_is_additive_within_bounds() {
        // ln(6) = ln(2) + ln(3)
        let bits = 150;
        let a = ln_rational(&q(6, 1), bits).unwrap();
        let b = ln_rational(&q(2, 1), bits).unwrap().add(&ln_rational(&q(3, 1), bits).unwrap());
        assert!(a.lo_scaled() <= b.hi_scaled() && b.lo_scaled() <= a.hi_scaled());
    }

    #[test]
    fn prime_ratio_matches_general_route() {
        for p in [2u64, 3, 5, 97, 7919, 1_000_003] {
            let a = ln_over_predecessor(&BigInt::from(p), 140);
            let b = ln_rational(&q(p as i64, p as i64 - 1), 140).unwrap();
            assert!(a.lo_scaled() <= b.hi_scaled() && b.lo_scaled() <= a.hi_scaled(), "p={p}");
        }
    }

    #[test]
    fn small_and_large_arguments() {
        for (n, d, want) in [(1, 1000, -6.907755278982137), (12345, 7, 7.475096252723967),
                             (3, 4, -0.2876820724517809)] {
            let lv = LogValue::from(ln_rational(&q(n, d), 128).unwrap());
            assert!((lv.log_value() - want).abs() < 1e-11, "{n}/{d}");
            assert!(lv.abs_error() < 1e-15);
        }
        assert!(ln_rational(&q(0, 1), 64).is_err());
    }

    #[test]
    fn from_rational_brackets() {
        let r = q(1, 3);
        let iv = Interval::from_rational(&r, 64);
        assert!(iv.contains(&r));
        assert_eq!(iv.width_ulps(), BigInt::one());
    }
}
