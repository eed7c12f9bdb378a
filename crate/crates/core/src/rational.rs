//! Arbitrary-precision rationals kept in lowest terms.
//!
//! Reduction goes through a remainder-based Euclid gcd. Most values in a long
//! run are huge numerators over tiny denominators, where a single remainder
//! step collapses the problem to machine words.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Failure to parse a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// gcd of two magnitudes via Euclid with remainders.
pub(crate) fn gcd_biguint(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = if a >= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while !b.is_zero() {
        if let Some(small) = b.to_u64() {
            let r = (&a % small).to_u64().unwrap_or(0);
            return BigUint::from(small.gcd(&r));
        }
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

pub(crate) fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from_biguint(Sign::Plus, gcd_biguint(a.magnitude(), b.magnitude()))
}

/// An exact rational number `num/den` with `den > 0` and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds `num/den` in lowest terms.
    ///
    /// # Panics
    ///
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "rational with zero denominator");
        Self::reduce(num, den)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Rational {
                num,
                den: BigInt::one(),
            };
        }
        if !den.is_one() {
            let g = gcd_bigint(&num, &den);
            if !g.is_one() {
                num /= &g;
                den /= &g;
            }
        }
        Rational { num, den }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn into_parts(self) -> (BigInt, BigInt) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics on zero.
    pub fn recip(&self) -> Self {
        Rational::new(self.den.clone(), self.num.clone())
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    /// `self^exp` for any integer exponent (negative needs a nonzero base).
    pub fn pow(&self, exp: i32) -> Self {
        let base = if exp < 0 { self.recip() } else { self.clone() };
        let e = exp.unsigned_abs();
        Rational {
            num: num_traits::pow(base.num, e as usize),
            den: num_traits::pow(base.den, e as usize),
        }
    }

    /// Nearest-ish `f64`; exact for small values, correct to a few ulps otherwise.
    pub fn to_f64(&self) -> f64 {
        if let (Some(n), Some(d)) = (self.num.to_f64(), self.den.to_f64()) {
            if n.is_finite() && d.is_finite() {
                return n / d;
            }
        }
        // Both sides are huge: shift them into range first.
        let nb = self.num.bits() as i64;
        let db = self.den.bits() as i64;
        let shift = nb.max(db) - 1000;
        let (n, d) = if shift > 0 {
            (&self.num >> shift as usize, &self.den >> shift as usize)
        } else {
            (self.num.clone(), self.den.clone())
        };
        match (n.to_f64(), d.to_f64()) {
            (Some(n), Some(d)) if d != 0.0 => n / d,
            _ => {
                // Magnitudes differ by more than f64 range.
                let e = (nb - db) as f64;
                if self.num.is_negative() {
                    -(2f64.powf(e))
                } else {
                    2f64.powf(e)
                }
            }
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_parts(a: &Rational, b: &Rational, negate_b: bool) -> Rational {
    let bn = if negate_b { -&b.num } else { b.num.clone() };
    if a.den == b.den {
        return Rational::reduce(&a.num + bn, a.den.clone());
    }
    if a.den.is_one() {
        return Rational::reduce(&a.num * &b.den + bn, b.den.clone());
    }
    if b.den.is_one() {
        return Rational::reduce(&a.num + bn * &a.den, a.den.clone());
    }
    Rational::reduce(&a.num * &b.den + bn * &a.den, &a.den * &b.den)
}

impl Add<&Rational> for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        add_parts(self, rhs, false)
    }
}

impl Sub<&Rational> for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        add_parts(self, rhs, true)
    }
}

impl Mul<&Rational> for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -(self.clone())
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseRationalError::Invalid(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::new(n, d))
            }
            None => Ok(Rational::from_integer(
                t.parse::<BigInt>().map_err(|_| bad())?,
            )),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"num/den\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(Rational::new(0, -7), Rational::zero());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q("3/2") + q("-1/2"), q("1"));
        assert_eq!(q("1/4") - q("3/8"), q("-1/8"));
        assert_eq!(q("2/3") * q("9/4"), q("3/2"));
        assert_eq!(q("2/3") / q("4/9"), q("3/2"));
        assert_eq!(q("1/2").pow(-3), q("8"));
    }

    #[test]
    fn ordering_and_rounding() {
        assert!(q("3/2") > q("7/5"));
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(q("6").ceil(), BigInt::from(6));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(
            "x/2".parse::<Rational>(),
            Err(ParseRationalError::Invalid(_))
        ));
    }

    #[test]
    fn serde_as_string() {
        let r = q("-3/2");
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-3/2\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let from_int: Rational = serde_json::from_str("4").unwrap();
        assert_eq!(from_int, q("4"));
    }

    #[test]
    fn euclid_gcd_matches_stein() {
        let a = BigUint::from(3u32).pow(400) * 10u32;
        let b = BigUint::from(3u32).pow(250) * 4u32;
        assert_eq!(gcd_biguint(&a, &b), a.gcd(&b));
        assert_eq!(gcd_biguint(&a, &BigUint::from(14u32)), BigUint::from(2u32));
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = BigInt::from(2).pow(5000);
        let r = Rational::new(&big * 3, &big * 2);
        assert_eq!(r.to_f64(), 1.5);
        let tiny = Rational::new(1, BigInt::from(2).pow(1100) + 1);
        assert!(tiny.to_f64() >= 0.0 && tiny.to_f64() < 1e-300);
    }
}
