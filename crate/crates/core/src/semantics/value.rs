use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.35`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().ok()? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        let frac = BigRational::new(frac, scale);
        let whole = BigRational::from_integer(int.abs());
        let v = whole + frac;
        return Some(if negative { -v } else { v });
    }
    BigRational::from_str(s).ok()
}

/// An exact rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitValue(Rational);

impl UnitValue {
    pub fn new(q: Rational) -> Option<Self> {
        (!q.is_negative() && q <= Rational::one()).then_some(UnitValue(q))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        UnitValue::new(rat(n, d)).expect("ratio outside [0,1]")
    }

    pub fn zero() -> Self {
        UnitValue(Rational::zero())
    }

    pub fn one() -> Self {
        UnitValue(Rational::one())
    }

    pub fn rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `1 - q`.
    pub fn complement(&self) -> Self {
        UnitValue(Rational::one() - &self.0)
    }

    /// `min{1, 1 - a + b}`.
    pub fn residuum(&self, b: &UnitValue) -> Self {
        let v = Rational::one() - &self.0 + &b.0;
        UnitValue(v.min(Rational::one()))
    }

    pub fn parse(s: &str) -> Option<Self> {
        parse_rational(s).and_then(UnitValue::new)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for UnitValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for UnitValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        UnitValue::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a rational in [0,1]")))
    }
}

/// A value of a series of nonnegative terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedSum {
    Finite(Rational),
    Infinite,
}

impl ExtendedSum {
    pub fn zero() -> Self {
        ExtendedSum::Finite(Rational::zero())
    }

    /// Sum of `k` copies of `q`; `k = None` stands for omega copies.
    pub fn copies(q: &Rational, k: Option<u64>) -> Self {
        debug_assert!(!q.is_negative());
        if q.is_zero() {
            return ExtendedSum::zero();
        }
        match k {
            Some(n) => ExtendedSum::Finite(q * Rational::from_integer(BigInt::from(n))),
            None => ExtendedSum::Infinite,
        }
    }

    /// Explicit terms followed by omega copies of `tail`.
    pub fn series<'a>(explicit: impl IntoIterator<Item = &'a Rational>, tail: &Rational) -> Self {
        explicit
            .into_iter()
            .fold(ExtendedSum::copies(tail, None), |acc, q| acc + ExtendedSum::Finite(q.clone()))
    }

    /// `min{1, s}`.
    pub fn clamp(&self) -> UnitValue {
        match self {
            ExtendedSum::Finite(q) if *q < Rational::one() => UnitValue(q.clone()),
            _ => UnitValue::one(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedSum::Infinite)
    }
}

impl Add for ExtendedSum {
    type Output = ExtendedSum;

    fn add(self, rhs: ExtendedSum) -> ExtendedSum {
        match (self, rhs) {
            (ExtendedSum::Finite(a), ExtendedSum::Finite(b)) => ExtendedSum::Finite(a + b),
            _ => ExtendedSum::Infinite,
        }
    }
}

impl PartialOrd for ExtendedSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self, other) {
            (ExtendedSum::Finite(a), ExtendedSum::Finite(b)) => a.cmp(b),
            (ExtendedSum::Finite(_), ExtendedSum::Infinite) => Ordering::Less,
            (ExtendedSum::Infinite, ExtendedSum::Finite(_)) => Ordering::Greater,
            (ExtendedSum::Infinite, ExtendedSum::Infinite) => Ordering::Equal,
        })
    }
}

impl fmt::Display for ExtendedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedSum::Finite(q) => write!(f, "{q}"),
            ExtendedSum::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_bounds() {
        assert!(UnitValue::new(rat(3, 2)).is_none());
        assert!(UnitValue::new(rat(-1, 2)).is_none());
        assert_eq!(UnitValue::ratio(3, 10).complement(), UnitValue::ratio(7, 10));
        assert_eq!(UnitValue::one().residuum(&UnitValue::zero()), UnitValue::zero());
    }

    #[test]
    fn parsing() {
        assert_eq!(UnitValue::parse("3/10"), Some(UnitValue::ratio(3, 10)));
        assert_eq!(UnitValue::parse("0.6"), Some(UnitValue::ratio(3, 5)));
        assert_eq!(UnitValue::parse("1"), Some(UnitValue::one()));
        assert_eq!(UnitValue::parse("1.5"), None);
        assert_eq!(UnitValue::parse("x"), None);
    }

    #[test]
    fn extended_sum_algebra() {
        let f = |n, d| ExtendedSum::Finite(rat(n, d));
        assert_eq!(f(1, 2) + f(1, 3), f(5, 6));
        assert_eq!(f(1, 2) + ExtendedSum::Infinite, ExtendedSum::Infinite);
        assert_eq!(ExtendedSum::Infinite.clamp(), UnitValue::one());
        assert_eq!(f(3, 2).clamp(), UnitValue::one());
        assert_eq!(f(2, 5).clamp(), UnitValue::ratio(2, 5));
        assert_eq!(ExtendedSum::copies(&rat(0, 1), None), ExtendedSum::zero());
        assert!(ExtendedSum::copies(&rat(1, 100), None).is_infinite());
        assert!(f(1, 2) < ExtendedSum::Infinite);
    }
}
