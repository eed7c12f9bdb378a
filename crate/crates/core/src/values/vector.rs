use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{Generator, RealBasis, ValueError};
use crate::rational::{gcd_bigint, Rational};

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RationalInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }
}

/// The real number `Σ cᵢ·gᵢ` over a [`RealBasis`], with exact rational `cᵢ`.
///
/// Stored as integer numerators over one positive common denominator, sparse
/// and sorted by generator index, always in lowest terms. Two vectors are
/// equal exactly when their coefficients agree, which for an independent
/// basis is equality of the reals.
#[derive(Clone)]
pub struct ValueVector {
    basis: Arc<RealBasis>,
    den: BigInt,
    terms: Vec<(usize, BigInt)>,
}

fn same_basis(a: &Arc<RealBasis>, b: &Arc<RealBasis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ValueVector {
    fn normalized(basis: Arc<RealBasis>, mut den: BigInt, mut terms: Vec<(usize, BigInt)>) -> Self {
        terms.retain(|(_, n)| !n.is_zero());
        if terms.is_empty() {
            return ValueVector {
                basis,
                den: BigInt::one(),
                terms,
            };
        }
        if !den.is_one() {
            let mut g = den.clone();
            for (_, n) in &terms {
                g = gcd_bigint(&g, n);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                den /= &g;
                for (_, n) in &mut terms {
                    *n /= &g;
                }
            }
        }
        ValueVector { basis, den, terms }
    }

    pub fn zero(basis: &Arc<RealBasis>) -> Self {
        ValueVector {
            basis: basis.clone(),
            den: BigInt::one(),
            terms: Vec::new(),
        }
    }

    /// Builds `Σ q·g_i` from `(index, q)` pairs; repeated indices are summed.
    pub fn from_coeffs<I>(basis: &Arc<RealBasis>, coeffs: I) -> Result<Self, ValueError>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut den = BigInt::one();
        let mut pairs: Vec<(usize, Rational)> = Vec::new();
        for (i, q) in coeffs {
            if i >= basis.len() {
                return Err(ValueError::IndexOutOfRange {
                    index: i,
                    len: basis.len(),
                });
            }
            den = den.lcm(q.denom());
            pairs.push((i, q));
        }
        pairs.sort_by_key(|(i, _)| *i);
        let mut terms: Vec<(usize, BigInt)> = Vec::with_capacity(pairs.len());
        for (i, q) in pairs {
            let n = q.numer() * (&den / q.denom());
            match terms.last_mut() {
                Some((j, acc)) if *j == i => *acc += n,
                _ => terms.push((i, n)),
            }
        }
        Ok(Self::normalized(basis.clone(), den, terms))
    }

    /// Builds a value from one coefficient per generator.
    pub fn from_dense(basis: &Arc<RealBasis>, coeffs: &[Rational]) -> Result<Self, ValueError> {
        if coeffs.len() != basis.len() {
            return Err(ValueError::LengthMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        Self::from_coeffs(basis, coeffs.iter().cloned().enumerate())
    }

    /// The generator `g_i` itself.
    pub fn generator(basis: &Arc<RealBasis>, i: usize) -> Result<Self, ValueError> {
        Self::from_coeffs(basis, [(i, Rational::one())])
    }

    /// The rational `q`, carried on the basis's unit generator.
    pub fn rational(basis: &Arc<RealBasis>, q: Rational) -> Result<Self, ValueError> {
        let i = basis.unit_index().ok_or(ValueError::NoUnitGenerator)?;
        Self::from_coeffs(basis, [(i, q)])
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        &self.basis
    }

    pub fn coeff(&self, i: usize) -> Rational {
        match self.terms.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => Rational::new(self.terms[k].1.clone(), self.den.clone()),
            Err(_) => Rational::zero(),
        }
    }

    /// Nonzero coefficients in generator order.
    pub fn coeffs(&self) -> Vec<(usize, Rational)> {
        self.terms
            .iter()
            .map(|(i, n)| (*i, Rational::new(n.clone(), self.den.clone())))
            .collect()
    }

    pub fn dense(&self) -> Vec<Rational> {
        (0..self.basis.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bit length of the largest integer in the representation.
    pub fn height_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, n)| n.bits())
            .chain(std::iter::once(self.den.bits()))
            .max()
            .unwrap_or(0)
    }

    /// The value as an exact rational when every used generator is an integer.
    pub fn as_rational(&self) -> Option<Rational> {
        let mut num = BigInt::zero();
        for (i, n) in &self.terms {
            num += n * self.basis.exact_value(*i)?;
        }
        Some(Rational::new(num, self.den.clone()))
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, ValueError> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(ValueError::BasisMismatch);
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let (den, fa, fb) = if self.den == other.den {
            (self.den.clone(), None, None)
        } else {
            let g = gcd_bigint(&self.den, &other.den);
            let fa = &other.den / &g;
            let fb = &self.den / &g;
            (&self.den * &fa, Some(fa), Some(fb))
        };
        let scale = |n: &BigInt, f: &Option<BigInt>| match f {
            Some(f) => n * f,
            None => n.clone(),
        };
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => 0,
                (None, Some(_)) => 1,
                (Some((i, _)), Some((j, _))) => match i.cmp(j) {
                    Ordering::Less => 0,
                    Ordering::Greater => 1,
                    Ordering::Equal => 2,
                },
            };
            match next {
                0 => {
                    let (i, n) = a.next().unwrap();
                    terms.push((*i, scale(n, &fa)));
                }
                1 => {
                    let (j, n) = b.next().unwrap();
                    let v = scale(n, &fb);
                    terms.push((*j, if negate { -v } else { v }));
                }
                _ => {
                    let (i, n) = a.next().unwrap();
                    let (_, m) = b.next().unwrap();
                    let (x, y) = (scale(n, &fa), scale(m, &fb));
                    terms.push((*i, if negate { x - y } else { x + y }));
                }
            }
        }
        Ok(Self::normalized(self.basis.clone(), den, terms))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ValueError> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ValueError> {
        self.combine(other, true)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(i, n)| (*i, n * q.numer()))
            .collect();
        Self::normalized(self.basis.clone(), &self.den * q.denom(), terms)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let terms = self.terms.iter().map(|(i, n)| (*i, n * k)).collect();
        Self::normalized(self.basis.clone(), self.den.clone(), terms)
    }

    /// Bounds `lo <= den · value · 2^bits <= hi`.
    fn scaled_numerator_bounds(&self, bits: u64) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (i, n) in &self.terms {
            let f = self.basis.floor_scaled(*i, bits);
            let base = n * &f;
            if self.basis.exact_value(*i).is_some() {
                lo += &base;
                hi += base;
            } else if n.is_positive() {
                hi += &base + n;
                lo += base;
            } else {
                lo += &base + n;
                hi += base;
            }
        }
        (lo, hi)
    }

    /// Integers with `lo <= value · 2^bits <= hi`.
    pub fn dyadic_bounds(&self, bits: u64) -> (BigInt, BigInt) {
        let (lo, hi) = self.scaled_numerator_bounds(bits);
        (lo.div_floor(&self.den), hi.div_ceil(&self.den))
    }

    fn precision_cap(&self) -> u64 {
        2 * self.height_bits() + self.basis.extra_precision()
    }

    /// Sign of the represented real, by refining generator enclosures.
    pub fn signum(&self) -> Result<Ordering, ValueError> {
        if self.terms.is_empty() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.numer().sign_cmp());
        }
        let cap = self.precision_cap();
        let mut bits = (self.height_bits() + 64).min(cap);
        loop {
            let (lo, hi) = self.scaled_numerator_bounds(bits);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if bits >= cap {
                return Err(ValueError::IndeterminateComparison { bits });
            }
            bits = (bits * 2).min(cap);
        }
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, ValueError> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(ValueError::BasisMismatch);
        }
        if self == other {
            return Ok(Ordering::Equal);
        }
        self.try_sub(other)?.signum()
    }

    pub fn is_positive(&self) -> Result<bool, ValueError> {
        Ok(self.signum()? == Ordering::Greater)
    }

    /// An interval of width at most `width` containing the value.
    ///
    /// Endpoints are dyadic rationals on a grid just fine enough for the
    /// requested width; values over integer generators come back as `[q, q]`.
    pub fn enclose(&self, width: &Rational) -> Result<RationalInterval, ValueError> {
        if !width.is_positive() {
            return Err(ValueError::NonPositiveWidth);
        }
        if let Some(q) = self.as_rational() {
            return Ok(RationalInterval {
                lo: q.clone(),
                hi: q,
            });
        }
        // Grid spacing 2^-g <= width/4.
        let quarter = width / &Rational::from(4);
        let mut g: u64 = 0;
        let mut step = Rational::one();
        while step > quarter {
            step = &step / &Rational::from(2);
            g += 1;
        }
        // Internal error sum|n_i| / (den 2^b) <= 2^-g.
        let spread: BigInt = self.terms.iter().map(|(_, n)| n.abs()).sum();
        let extra = spread.bits().saturating_sub(self.den.bits()) + 1;
        let b = g + extra;
        let (lo, hi) = self.scaled_numerator_bounds(b);
        let unit = &self.den << (b - g);
        let lo_g = lo.div_floor(&unit);
        let hi_g = hi.div_ceil(&unit);
        let scale = BigInt::one() << g;
        Ok(RationalInterval {
            lo: Rational::new(lo_g, scale.clone()),
            hi: Rational::new(hi_g, scale),
        })
    }

    /// An interval at `bits` of working precision; width about `terms · 2^-bits`.
    pub fn enclosure_at(&self, bits: u64) -> RationalInterval {
        let (lo, hi) = self.scaled_numerator_bounds(bits);
        let den = &self.den << bits;
        RationalInterval {
            lo: Rational::new(lo, den.clone()),
            hi: Rational::new(hi, den),
        }
    }

    /// `floor(self / divisor)` for a positive divisor.
    pub fn floor_div(&self, divisor: &Self) -> Result<BigInt, ValueError> {
        if divisor.signum()? != Ordering::Greater {
            return Err(ValueError::NonPositiveDivisor);
        }
        if !same_basis(&self.basis, &divisor.basis) {
            return Err(ValueError::BasisMismatch);
        }
        let cap = self.precision_cap().max(divisor.precision_cap());
        let mut bits = self.height_bits().max(divisor.height_bits()) + 64;
        let mut guess = loop {
            let a = self.enclosure_at(bits);
            let b = divisor.enclosure_at(bits);
            if b.lo.is_positive() {
                let qlo = if a.lo.is_negative() {
                    &a.lo / &b.lo
                } else {
                    &a.lo / &b.hi
                };
                let qhi = if a.hi.is_negative() {
                    &a.hi / &b.hi
                } else {
                    &a.hi / &b.lo
                };
                let (flo, fhi) = (qlo.floor(), qhi.floor());
                if &fhi - &flo <= BigInt::one() {
                    break flo;
                }
            }
            if bits >= cap {
                return Err(ValueError::IndeterminateComparison { bits });
            }
            bits = (bits * 2).min(cap);
        };
        loop {
            let next = &guess + 1;
            if self.try_sub(&divisor.mul_int(&next))?.signum()? == Ordering::Less {
                break;
            }
            guess = next;
        }
        while self.try_sub(&divisor.mul_int(&guess))?.signum()? == Ordering::Less {
            guess -= 1;
        }
        Ok(guess)
    }

    /// `ceil(self / divisor)` for a positive divisor.
    pub fn ceil_div(&self, divisor: &Self) -> Result<BigInt, ValueError> {
        let f = self.floor_div(divisor)?;
        if divisor.mul_int(&f) == *self {
            Ok(f)
        } else {
            Ok(f + 1)
        }
    }

    /// A double near the value, for plotting and logs only.
    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return q.to_f64();
        }
        let iv = self.enclosure_at(2 * self.height_bits() + 64);
        ((&iv.lo + &iv.hi) / Rational::from(2)).to_f64()
    }
}

/// Dimension of the ℚ-span of `values`, read off their coordinates.
///
/// This is the rational rank of the values whenever the basis generators are
/// themselves linearly independent over ℚ.
pub fn rational_rank(values: &[ValueVector]) -> usize {
    let Some(first) = values.first() else {
        return 0;
    };
    let width = first.basis.len();
    let mut rows: Vec<Vec<Rational>> = values.iter().map(ValueVector::dense).collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot;
                let lead = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&lead).skip(col) {
                    *x = &*x - &(y * &f);
                }
            }
        }
        rank += 1;
    }
    rank
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl PartialEq for ValueVector {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.terms == other.terms && same_basis(&self.basis, &other.basis)
    }
}

impl Eq for ValueVector {}

impl Hash for ValueVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.den.hash(state);
        self.terms.hash(state);
    }
}

/// Panics on a basis mismatch; use [`ValueVector::try_add`] to handle it.
impl Add<&ValueVector> for &ValueVector {
    type Output = ValueVector;
    fn add(self, rhs: &ValueVector) -> ValueVector {
        self.try_add(rhs).expect("values over different bases")
    }
}

/// Panics on a basis mismatch; use [`ValueVector::try_sub`] to handle it.
impl Sub<&ValueVector> for &ValueVector {
    type Output = ValueVector;
    fn sub(self, rhs: &ValueVector) -> ValueVector {
        self.try_sub(rhs).expect("values over different bases")
    }
}

impl Add for ValueVector {
    type Output = ValueVector;
    fn add(self, rhs: ValueVector) -> ValueVector {
        &self + &rhs
    }
}

impl Sub for ValueVector {
    type Output = ValueVector;
    fn sub(self, rhs: ValueVector) -> ValueVector {
        &self - &rhs
    }
}

impl Neg for &ValueVector {
    type Output = ValueVector;
    fn neg(self) -> ValueVector {
        ValueVector {
            basis: self.basis.clone(),
            den: self.den.clone(),
            terms: self.terms.iter().map(|(i, n)| (*i, -n)).collect(),
        }
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, q)) in self.coeffs().into_iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match self.basis.generator(i) {
                Some(Generator::One) => write!(f, "{mag}")?,
                Some(g) if mag == Rational::one() => write!(f, "{g}")?,
                Some(g) => write!(f, "{mag}·{g}")?,
                None => write!(f, "{mag}·g{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValueVector({self})")
    }
}

/// Serialized densely as `["3/2", "0", "1"]`, one entry per generator.
impl Serialize for ValueVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dense = self.dense();
        let mut seq = serializer.serialize_seq(Some(dense.len()))?;
        for q in &dense {
            seq.serialize_element(q)?;
        }
        seq.end()
    }
}
