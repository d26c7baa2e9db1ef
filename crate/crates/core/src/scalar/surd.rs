//! Exactly represented irrational points `a + b*sqrt(d)`.
//!
//! Support sets of Thomae-type functions may contain irrationals. These never
//! coincide with a rational argument, which is what lets rational-only
//! evaluation see the rational restriction of such a function.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactScalar;
use crate::error::{Error, Result};

/// `rational + coeff * sqrt(radicand)` with a square-free radicand `>= 2` and
/// a nonzero coefficient, so the value is always irrational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    rational: ExactScalar,
    coeff: ExactScalar,
    radicand: u64,
}

impl QuadraticSurd {
    pub fn new(rational: ExactScalar, coeff: ExactScalar, radicand: u64) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::Construction("surd coefficient must be nonzero".into()));
        }
        let (square, free) = split_square(radicand);
        if free < 2 {
            return Err(Error::Construction(format!("sqrt({radicand}) is rational")));
        }
        Ok(QuadraticSurd {
            rational,
            coeff: coeff * ExactScalar::from_integer(square),
            radicand: free,
        })
    }

    pub fn rational(&self) -> &ExactScalar {
        &self.rational
    }

    pub fn coeff(&self) -> &ExactScalar {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Rational bounds `lo < value < hi` of width `|coeff| / 2^bits`.
    pub fn enclose(&self, bits: u32) -> (ExactScalar, ExactScalar) {
        let scaled = BigUint::from(self.radicand) << (2 * bits as usize);
        let s = BigInt::from(scaled.sqrt());
        let den = BigInt::one() << bits as usize;
        let lo = ExactScalar::new(s.clone(), den.clone());
        let hi = ExactScalar::new(s + 1, den);
        let (a, b) = (&self.coeff * &lo, &self.coeff * &hi);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        (&self.rational + a, &self.rational + b)
    }

    pub fn cmp_rational(&self, r: &ExactScalar) -> Ordering {
        let mut bits = 16;
        loop {
            let (lo, hi) = self.enclose(bits);
            if &hi <= r {
                return Ordering::Less;
            }
            if &lo >= r {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    fn cmp_surd(&self, other: &QuadraticSurd) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let mut bits = 16;
        loop {
            let (alo, ahi) = self.enclose(bits);
            let (blo, bhi) = other.enclose(bits);
            if ahi <= blo {
                return Ordering::Less;
            }
            if bhi <= alo {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.coeff.to_f64() * (self.radicand as f64).sqrt()
    }
}

/// `d = square^2 * free` with `free` square-free.
fn split_square(mut d: u64) -> (u64, u64) {
    let mut square = 1;
    let mut p = 2;
    while p * p <= d {
        while d.is_multiple_of(p * p) {
            d /= p * p;
            square *= p;
        }
        p += 1;
    }
    (square, d)
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt({})", self.rational, self.coeff, self.radicand)
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point of `[0,1]`: rational, or a quadratic irrational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Rational(ExactScalar),
    Surd(QuadraticSurd),
}

impl Point {
    pub fn as_rational(&self) -> Option<&ExactScalar> {
        match self {
            Point::Rational(r) => Some(r),
            Point::Surd(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Point::Rational(_))
    }

    pub fn cmp_rational(&self, r: &ExactScalar) -> Ordering {
        match self {
            Point::Rational(x) => x.cmp(r),
            Point::Surd(s) => s.cmp_rational(r),
        }
    }

    /// `lo <= self <= hi`.
    pub fn in_closed(&self, lo: &ExactScalar, hi: &ExactScalar) -> bool {
        self.cmp_rational(lo) != Ordering::Less && self.cmp_rational(hi) != Ordering::Greater
    }

    /// `lo < self < hi`.
    pub fn in_open(&self, lo: &ExactScalar, hi: &ExactScalar) -> bool {
        self.cmp_rational(lo) == Ordering::Greater && self.cmp_rational(hi) == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::Rational(r) => r.to_f64(),
            Point::Surd(s) => s.to_f64(),
        }
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Rational(a), Point::Rational(b)) => a.cmp(b),
            (Point::Rational(a), Point::Surd(s)) => s.cmp_rational(a).reverse(),
            (Point::Surd(s), Point::Rational(b)) => s.cmp_rational(b),
            (Point::Surd(a), Point::Surd(b)) => a.cmp_surd(b),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<ExactScalar> for Point {
    fn from(r: ExactScalar) -> Self {
        Point::Rational(r)
    }
}

impl From<QuadraticSurd> for Point {
    fn from(s: QuadraticSurd) -> Self {
        Point::Surd(s)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(r) => r.fmt(f),
            Point::Surd(s) => s.fmt(f),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Point {
    type Err = Error;

    /// `p/q`, or `a+b*sqrt(d)` as produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix(')') else {
            return Ok(Point::Rational(s.parse()?));
        };
        let (head, radicand) = body
            .split_once("*sqrt(")
            .ok_or_else(|| Error::Parse(format!("malformed point {s:?}")))?;
        let (a, b) = head
            .rsplit_once('+')
            .ok_or_else(|| Error::Parse(format!("malformed point {s:?}")))?;
        let d: u64 = radicand
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
        let surd = QuadraticSurd::new(a.parse()?, b.parse()?, d)
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(Point::Surd(surd))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn sqrt2_over(den: i64) -> Point {
        Point::Surd(QuadraticSurd::new(q(0, 1), q(1, den), 2).unwrap())
    }

    #[test]
    fn normalizes_radicand() {
        let s = QuadraticSurd::new(q(0, 1), q(1, 1), 8).unwrap();
        assert_eq!(s.radicand(), 2);
        assert_eq!(s.coeff(), &q(2, 1));
        assert!(QuadraticSurd::new(q(0, 1), q(1, 1), 9).is_err());
        assert!(QuadraticSurd::new(q(0, 1), q(0, 1), 2).is_err());
    }

    #[test]
    fn compares_against_rationals() {
        let p = sqrt2_over(2); // 0.7071...
        assert!(p.cmp_rational(&q(7, 10)) == Ordering::Greater);
        assert!(p.cmp_rational(&q(71, 100)) == Ordering::Less);
        assert!(p.in_open(&q(1, 2), &q(3, 4)));
        let neg = Point::Surd(QuadraticSurd::new(q(1, 1), q(-1, 2), 2).unwrap()); // 0.2928...
        assert!(neg < Point::Rational(q(3, 10)));
        assert!(neg > Point::Rational(q(29, 100)));
    }

    #[test]
    fn compares_surds() {
        let a = sqrt2_over(2);
        let b = Point::Surd(QuadraticSurd::new(q(0, 1), q(1, 3), 5).unwrap()); // 0.7453...
        assert!(a < b);
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
    }

    #[test]
    fn text_round_trip() {
        for p in [sqrt2_over(3), Point::Rational(q(2, 7)),
                  Point::Surd(QuadraticSurd::new(q(1, 2), q(-1, 5), 3).unwrap())] {
            let back: Point = p.to_string().parse().unwrap();
            assert_eq!(back, p);
        }
    }
}
