//! Polynomials with exact rational coefficients and root isolation on
//! rational intervals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::ExactScalar;

/// Bisection steps used to isolate an irrational root.
pub const BISECTION_DEPTH: u32 = 40;

/// Coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<ExactScalar>", into = "Vec<ExactScalar>")]
pub struct Polynomial {
    coeffs: Vec<ExactScalar>,
}

/// A root located exactly, or bracketed by `lo < r < hi` after bisection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Located {
    Exact(ExactScalar),
    Approx { lo: ExactScalar, hi: ExactScalar },
}

impl Located {
    /// The exact root, or the simplest rational inside the bracket.
    pub fn representative(&self) -> ExactScalar {
        match self {
            Located::Exact(x) => x.clone(),
            Located::Approx { lo, hi } => simplest_between(lo, hi),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Located::Exact(_))
    }
}

/// A candidate extremum of a piece; `exact` is false when it sits at an
/// irrational turning point and `value` is taken at a nearby rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremum {
    pub value: ExactScalar,
    pub exact: bool,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(ExactScalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// `x -> x`.
    pub fn identity() -> Self {
        Polynomial::new(vec![ExactScalar::zero(), ExactScalar::one()])
    }

    /// `x -> x^m`.
    pub fn monomial(m: usize) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); m + 1];
        coeffs[m] = ExactScalar::one();
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * ExactScalar::from_integer(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = ExactScalar::zero();
        Polynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-ExactScalar::one()))
    }

    pub fn scale(&self, c: &ExactScalar) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Roots in the open interval `(a, b)`, in increasing order.
    ///
    /// Roots of even multiplicity are found only when they coincide with an
    /// exactly located turning point.
    pub fn roots_in(&self, a: &ExactScalar, b: &ExactScalar) -> Vec<Located> {
        match self.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => {
                let r = -(&self.coeffs[0] / &self.coeffs[1]);
                if a < &r && &r < b {
                    vec![Located::Exact(r)]
                } else {
                    Vec::new()
                }
            }
            Some(_) => {
                let turning = self.derivative().roots_in(a, b);
                let mut nodes = vec![(a.clone(), false)];
                nodes.extend(turning.iter().map(|t| (t.representative(), t.is_exact())));
                nodes.push((b.clone(), false));
                let mut roots = Vec::new();
                for (i, pair) in nodes.windows(2).enumerate() {
                    let (u, v) = (&pair[0].0, &pair[1].0);
                    if i > 0 && pair[0].1 && self.eval(u).is_zero() {
                        roots.push(Located::Exact(u.clone()));
                    }
                    if let Some(r) = self.bisect(u, v) {
                        roots.push(r);
                    }
                }
                roots
            }
        }
    }

    /// Locates the root strictly inside `(u, v)` when the endpoint signs differ.
    fn bisect(&self, u: &ExactScalar, v: &ExactScalar) -> Option<Located> {
        let (fu, fv) = (self.eval(u), self.eval(v));
        if fu.is_zero() || fv.is_zero() || fu.is_positive() == fv.is_positive() {
            return None;
        }
        let rising = fv.is_positive();
        let (mut lo, mut hi) = (u.clone(), v.clone());
        for _ in 0..BISECTION_DEPTH {
            let mid = lo.midpoint(&hi);
            let fm = self.eval(&mid);
            if fm.is_zero() {
                return Some(Located::Exact(mid));
            }
            if fm.is_positive() == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let guess = simplest_between(&lo, &hi);
        if self.eval(&guess).is_zero() {
            Some(Located::Exact(guess))
        } else {
            Some(Located::Approx { lo, hi })
        }
    }

    /// Turning points of `self` strictly inside `(a, b)`.
    pub fn critical_points(&self, a: &ExactScalar, b: &ExactScalar) -> Vec<Located> {
        self.derivative().roots_in(a, b)
    }

    /// Minimum and maximum over `[a, b]`.
    pub fn extrema(&self, a: &ExactScalar, b: &ExactScalar) -> (Extremum, Extremum) {
        let mut cands = vec![
            Extremum { value: self.eval(a), exact: true },
            Extremum { value: self.eval(b), exact: true },
        ];
        for c in self.critical_points(a, b) {
            cands.push(Extremum { value: self.eval(&c.representative()), exact: c.is_exact() });
        }
        let min = cands.iter().min_by(|x, y| x.value.cmp(&y.value)).cloned().unwrap();
        let max = cands.iter().max_by(|x, y| x.value.cmp(&y.value)).cloned().unwrap();
        (min, max)
    }

    /// Total variation over `[a, b]`, exact iff every turning point is rational.
    pub fn variation(&self, a: &ExactScalar, b: &ExactScalar) -> (ExactScalar, bool) {
        let crit = self.critical_points(a, b);
        let exact = crit.iter().all(Located::is_exact);
        let mut nodes = vec![a.clone()];
        nodes.extend(crit.iter().map(Located::representative));
        nodes.push(b.clone());
        let total = nodes.windows(2).map(|w| (self.eval(&w[1]) - self.eval(&w[0])).abs()).sum();
        (total, exact)
    }

    /// Sign of the first nonvanishing derivative at `x` from the right
    /// (`right = true`) or from the left; 0 for the zero polynomial.
    pub fn local_sign(&self, x: &ExactScalar, right: bool) -> i32 {
        let mut p = self.clone();
        let mut order = 0u32;
        loop {
            if p.degree().is_none() {
                return 0;
            }
            let v = p.eval(x);
            if !v.is_zero() {
                let s = if v.is_positive() { 1 } else { -1 };
                return if right || order.is_multiple_of(2) { s } else { -s };
            }
            p = p.derivative();
            order += 1;
        }
    }
}

/// The rational with least denominator in `[lo, hi]`.
pub fn simplest_between(lo: &ExactScalar, hi: &ExactScalar) -> ExactScalar {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return ExactScalar::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    // Continued-fraction descent on 0 < lo <= hi.
    let mut terms: Vec<BigInt> = Vec::new();
    let (mut l, mut h) = (lo.clone(), hi.clone());
    loop {
        let fl = l.floor();
        if ExactScalar::from_integer(fl.clone()) == l {
            terms.push(fl);
            break;
        }
        let cl: BigInt = &fl + 1;
        if ExactScalar::from_integer(cl.clone()) <= h {
            terms.push(cl);
            break;
        }
        let base = ExactScalar::from_integer(fl.clone());
        terms.push(fl);
        let nl = (&h - &base).recip().expect("positive gap");
        let nh = (&l - &base).recip().expect("positive gap");
        l = nl;
        h = nh;
    }
    let mut acc = ExactScalar::from_integer(terms.pop().unwrap());
    while let Some(t) = terms.pop() {
        acc = ExactScalar::from_integer(t) + acc.recip().expect("nonzero partial quotient");
    }
    acc
}

impl From<Vec<ExactScalar>> for Polynomial {
    fn from(coeffs: Vec<ExactScalar>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<ExactScalar> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// True when `x` is a nonnegative integer power of two.
pub(crate) fn is_power_of_two(x: &BigInt) -> bool {
    x.is_positive() && (x & (x - BigInt::one())).is_zero()
}
