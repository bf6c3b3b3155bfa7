//! Exact nonnegative rationals.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational number kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(BigRational);

impl Ratio {
    pub fn new(numer: impl Into<BigUint>, denom: impl Into<BigUint>) -> Result<Self> {
        let denom: BigUint = denom.into();
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Ratio(BigRational::new(
            BigInt::from_biguint(Sign::Plus, numer.into()),
            BigInt::from_biguint(Sign::Plus, denom),
        )))
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        Ratio(BigRational::from_integer(BigInt::from_biguint(
            Sign::Plus,
            n.into(),
        )))
    }

    pub fn zero() -> Self {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
    }

    /// Wraps a `BigRational`, rejecting negative values.
    pub fn from_big_rational(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidArgument(format!("negative rational {r}")));
        }
        Ok(Ratio(r))
    }

    /// The exact value of a finite, nonnegative `f64`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidArgument(format!("not a finite nonnegative real: {x}")));
        }
        let r = BigRational::from_float(x)
            .ok_or_else(|| Error::InvalidArgument(format!("cannot convert {x}")))?;
        Ok(Ratio(r))
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Ratio) -> Option<Ratio> {
        let d = &self.0 - &other.0;
        (!d.is_negative()).then_some(Ratio(d))
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        Ratio(&self.0 + &other.0)
    }

    /// Renders as `num/den` even when the denominator is 1.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Mul for &Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &Ratio) -> Ratio {
        Ratio(&self.0 * &rhs.0)
    }
}

impl Mul for Ratio {
    type Output = Ratio;
    fn mul(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 * rhs.0)
    }
}

impl Div for &Ratio {
    type Output = Ratio;
    /// Panics on division by zero.
    fn div(self, rhs: &Ratio) -> Ratio {
        assert!(!rhs.is_zero(), "division by zero ratio");
        Ratio(&self.0 / &rhs.0)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `p/q`, plain integers, decimals (`0.25`) and scientific
    /// notation (`1e-3`, `2.5E2`). Decimal input is converted exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = parse_uint(n.trim())?;
            let d = parse_uint(d.trim())?;
            return Ratio::new(n, d);
        }
        parse_decimal(s)
    }
}

fn parse_uint(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("expected unsigned integer, found {s:?}")));
    }
    BigUint::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_decimal(s: &str) -> Result<Ratio> {
    let bad = || Error::Parse(format!("not a nonnegative decimal or p/q rational: {s:?}"));
    let s = s.strip_prefix('+').unwrap_or(s);
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exp.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigUint::from_str(&digits).map_err(|_| bad())?;
    let shift = exp - frac_part.len() as i64;
    let mut denom = BigUint::one();
    let ten = BigUint::from(10u32);
    if shift >= 0 {
        numer *= num_traits::pow(ten, shift as usize);
    } else {
        denom = num_traits::pow(ten, (-shift) as usize);
    }
    Ratio::new(numer, denom)
}
