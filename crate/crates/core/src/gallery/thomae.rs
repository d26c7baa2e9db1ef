//! Height-enumerated point sets and the Thomae-type functions built on them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Point};

/// Finite distinct points of `[0, 1]` with heights `H`; `A_n = {x : H(x) < n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HeightedDoc", into = "HeightedDoc")]
pub struct HeightedSet {
    points: Vec<Point>,
    heights: Vec<u64>,
    truncation_depth: u64,
    #[serde(skip)]
    rational_index: HashMap<ExactScalar, usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HeightedDoc {
    support: Vec<Point>,
    heights: Vec<u64>,
    #[serde(default)]
    truncation_depth: Option<u64>,
}

impl HeightedSet {
    /// `truncation_depth` defaults to one past the largest height.
    pub fn new(points: Vec<Point>, heights: Vec<u64>, truncation_depth: Option<u64>) -> Result<Self> {
        if points.len() != heights.len() {
            return Err(Error::Construction(format!(
                "{} points but {} heights",
                points.len(),
                heights.len()
            )));
        }
        let (zero, one) = (ExactScalar::zero(), ExactScalar::one());
        if let Some(bad) = points.iter().find(|p| !p.in_closed(&zero, &one)) {
            return Err(Error::Construction(format!("support point {bad} outside [0,1]")));
        }
        let mut sorted: Vec<&Point> = points.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Construction(format!("support point {} repeated", w[0])));
        }
        let depth = truncation_depth.unwrap_or_else(|| heights.iter().max().map_or(0, |h| h + 1));
        let rational_index = points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_rational().map(|r| (r.clone(), i)))
            .collect();
        Ok(HeightedSet { points, heights, truncation_depth: depth, rational_index })
    }

    pub fn empty() -> Self {
        HeightedSet::new(Vec::new(), Vec::new(), Some(0)).expect("empty set is well formed")
    }

    /// Nested finite sets `X_0 ⊆ X_1 ⊆ ...` with `H(x)` the least `n` such that `x ∈ X_n`.
    pub fn from_nested(sets: &[Vec<Point>]) -> Result<Self> {
        let mut points: Vec<Point> = Vec::new();
        let mut heights = Vec::new();
        for (n, set) in sets.iter().enumerate() {
            if n > 0 {
                if let Some(lost) = sets[n - 1].iter().find(|p| !set.contains(p)) {
                    return Err(Error::Construction(format!("sets must be nested; {lost} dropped at level {n}")));
                }
            }
            for p in set {
                if !points.contains(p) {
                    points.push(p.clone());
                    heights.push(n as u64);
                }
            }
        }
        HeightedSet::new(points, heights, Some(sets.len() as u64))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    pub fn truncation_depth(&self) -> u64 {
        self.truncation_depth
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, u64)> {
        self.points.iter().zip(self.heights.iter().copied())
    }

    /// `A_n`, in storage order.
    pub fn level_set(&self, n: u64) -> Vec<&Point> {
        self.iter().filter(|(_, h)| *h < n).map(|(p, _)| p).collect()
    }

    pub fn height_of_rational(&self, x: &ExactScalar) -> Option<u64> {
        self.rational_index.get(x).map(|&i| self.heights[i])
    }

    pub fn height_of(&self, x: &Point) -> Option<u64> {
        match x {
            Point::Rational(r) => self.height_of_rational(r),
            Point::Surd(_) => self.points.iter().position(|p| p == x).map(|i| self.heights[i]),
        }
    }

    /// The rational members only, heights kept.
    pub fn rational_part(&self) -> HeightedSet {
        let (points, heights) = self.iter().filter(|(p, _)| p.is_rational()).map(|(p, h)| (p.clone(), h)).unzip();
        HeightedSet::new(points, heights, Some(self.truncation_depth)).expect("subset of a valid set")
    }
}

impl TryFrom<HeightedDoc> for HeightedSet {
    type Error = Error;

    fn try_from(doc: HeightedDoc) -> Result<Self> {
        HeightedSet::new(doc.support, doc.heights, doc.truncation_depth)
    }
}

impl From<HeightedSet> for HeightedDoc {
    fn from(s: HeightedSet) -> Self {
        HeightedDoc { support: s.points, heights: s.heights, truncation_depth: Some(s.truncation_depth) }
    }
}

/// Weight assigned at level `n`, the least `n` with `H(x) < n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightRule {
    /// `1 / 2^(n+1)`.
    Dyadic,
    /// `1 / 2^n`.
    Power,
    /// `1 / (2^n (g0(n) + 2))`; `g0` is indexed by level.
    Rescaled(Vec<u64>),
}

impl WeightRule {
    pub fn weight(&self, level: u64) -> Result<ExactScalar> {
        let e = level as i64;
        match self {
            WeightRule::Dyadic => Ok(ExactScalar::pow2(-e - 1)),
            WeightRule::Power => Ok(ExactScalar::pow2(-e)),
            WeightRule::Rescaled(g0) => {
                let g = g0.get(level as usize).ok_or_else(|| {
                    Error::Domain(format!("rescaled rule has no g0 value at level {level}"))
                })?;
                Ok(ExactScalar::pow2(-e) / ExactScalar::from_integer(*g as i64 + 2))
            }
        }
    }

    /// Checks the rule is nonincreasing on levels `1..=max_level`.
    fn check_nonincreasing(&self, max_level: u64) -> Result<()> {
        let mut prev: Option<ExactScalar> = None;
        for level in 1..=max_level {
            let w = self.weight(level).map_err(|e| Error::Construction(e.to_string()))?;
            if prev.as_ref().is_some_and(|p| &w > p) {
                return Err(Error::Construction(format!("weight rule increases at level {level}")));
            }
            prev = Some(w);
        }
        Ok(())
    }
}

/// Zero off the support; `rule(H(x) + 1)` at a support point `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ThomaeDoc", into = "ThomaeDoc")]
pub struct ThomaeFn {
    support: HeightedSet,
    rule: WeightRule,
    values: Vec<ExactScalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ThomaeDoc {
    #[serde(flatten)]
    support: HeightedSet,
    weight_rule: WeightRule,
}

impl ThomaeFn {
    pub fn new(support: HeightedSet, rule: WeightRule) -> Result<Self> {
        let top = support.heights().iter().max().map_or(0, |h| h + 1);
        rule.check_nonincreasing(top)?;
        let values = support
            .heights()
            .iter()
            .map(|&h| rule.weight(h + 1))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Construction(e.to_string()))?;
        Ok(ThomaeFn { support, rule, values })
    }

    pub fn support(&self) -> &HeightedSet {
        &self.support
    }

    pub fn rule(&self) -> &WeightRule {
        &self.rule
    }

    /// Support points with their (positive) values.
    pub fn support_values(&self) -> impl Iterator<Item = (&Point, &ExactScalar)> {
        self.support.points().iter().zip(&self.values)
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        match self.support.rational_index.get(x) {
            Some(&i) => self.values[i].clone(),
            None => ExactScalar::zero(),
        }
    }

    pub fn eval_point(&self, x: &Point) -> ExactScalar {
        match x {
            Point::Rational(r) => self.eval(r),
            Point::Surd(_) => self
                .support
                .points()
                .iter()
                .position(|p| p == x)
                .map_or_else(ExactScalar::zero, |i| self.values[i].clone()),
        }
    }

    /// Largest value over support points in `[a, b]`; zero if none.
    pub fn max_on(&self, a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
        self.support_values()
            .filter(|(p, _)| p.in_closed(a, b))
            .map(|(_, v)| v.clone())
            .max()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Restriction to the rationals: same heights and rule, irrational points dropped.
    pub fn rational_restriction(&self) -> ThomaeFn {
        ThomaeFn::new(self.support.rational_part(), self.rule.clone()).expect("subset keeps the rule valid")
    }
}

impl TryFrom<ThomaeDoc> for ThomaeFn {
    type Error = Error;

    fn try_from(doc: ThomaeDoc) -> Result<Self> {
        ThomaeFn::new(doc.support, doc.weight_rule)
    }
}

impl From<ThomaeFn> for ThomaeDoc {
    fn from(f: ThomaeFn) -> Self {
        ThomaeDoc { support: f.support, weight_rule: f.rule }
    }
}

/// Dense countable sets used by the Dirichlet-type indicator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenseSet {
    /// Reduced fractions `p/q` with `q` prime.
    PrimeDenominator,
    /// Reduced fractions whose denominator is a power of two.
    Dyadic,
}

impl DenseSet {
    pub fn contains(&self, x: &ExactScalar) -> bool {
        let d = x.denom();
        match self {
            DenseSet::Dyadic => super::poly::is_power_of_two(d),
            DenseSet::PrimeDenominator => is_prime(d),
        }
    }

    /// The first `count` members of `(0, 1)` by denominator, then numerator.
    pub fn enumerate(&self, count: usize) -> Vec<ExactScalar> {
        super::rationals_by_denominator()
            .filter(|x| self.contains(x))
            .take(count)
            .collect()
    }
}

fn is_prime(n: &num_bigint::BigInt) -> bool {
    use num_traits::ToPrimitive;
    match n.to_u64() {
        Some(n) if n >= 2 => (2..).take_while(|d| d * d <= n).all(|d| n % d != 0),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, QuadraticSurd};

    fn r(n: i64, d: i64) -> Point {
        Point::Rational(q(n, d))
    }

    #[test]
    fn nested_sets_give_least_level() {
        let s = HeightedSet::from_nested(&[vec![r(1, 3)], vec![r(1, 3), r(2, 3)]]).unwrap();
        assert_eq!(s.height_of_rational(&q(1, 3)), Some(0));
        assert_eq!(s.height_of_rational(&q(2, 3)), Some(1));
        assert_eq!(s.level_set(1).len(), 1);
        assert_eq!(s.level_set(2).len(), 2);
        assert!(HeightedSet::from_nested(&[vec![r(1, 3)], vec![r(2, 3)]]).is_err());
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(HeightedSet::new(vec![r(1, 2), r(2, 4)], vec![0, 1], None).is_err());
        assert!(HeightedSet::new(vec![r(3, 2)], vec![0], None).is_err());
        assert!(HeightedSet::new(vec![r(1, 2)], vec![0, 1], None).is_err());
    }

    #[test]
    fn weights_and_values() {
        assert_eq!(WeightRule::Dyadic.weight(2).unwrap(), q(1, 8));
        assert_eq!(WeightRule::Power.weight(2).unwrap(), q(1, 4));
        assert_eq!(WeightRule::Rescaled(vec![0, 1, 2]).weight(2).unwrap(), q(1, 16));
        let set = HeightedSet::new(vec![r(1, 2), r(1, 3)], vec![0, 1], None).unwrap();
        let f = ThomaeFn::new(set, WeightRule::Dyadic).unwrap();
        assert_eq!(f.eval(&q(1, 2)), q(1, 4));
        assert_eq!(f.eval(&q(1, 3)), q(1, 8));
        assert_eq!(f.eval(&q(1, 5)), q(0, 1));
    }

    #[test]
    fn increasing_rule_rejected() {
        let set = HeightedSet::new(vec![r(1, 2), r(1, 3)], vec![0, 1], None).unwrap();
        assert!(ThomaeFn::new(set, WeightRule::Rescaled(vec![0, 0, 0])).is_ok());
        let set = HeightedSet::new(vec![r(1, 2), r(1, 3), r(1, 4)], vec![0, 1, 2], None).unwrap();
        // 1/(2*12), 1/(4*2): increases from level 1 to 2.
        assert!(ThomaeFn::new(set, WeightRule::Rescaled(vec![0, 10, 0, 0])).is_err());
    }

    #[test]
    fn surd_support_invisible_to_rationals() {
        let s = Point::Surd(QuadraticSurd::new(q(0, 1), q(1, 2), 2).unwrap());
        let set = HeightedSet::new(vec![s.clone(), r(1, 3)], vec![0, 1], None).unwrap();
        let f = ThomaeFn::new(set, WeightRule::Power).unwrap();
        assert_eq!(f.eval_point(&s), q(1, 2));
        assert_eq!(f.max_on(&q(7, 10), &q(3, 4)), q(1, 2));
        let tilde = f.rational_restriction();
        assert_eq!(tilde.support().len(), 1);
        assert_eq!(tilde.eval(&q(1, 3)), q(1, 4));
    }

    #[test]
    fn json_round_trip() {
        let s = Point::Surd(QuadraticSurd::new(q(0, 1), q(1, 2), 2).unwrap());
        let set = HeightedSet::new(vec![s, r(1, 3)], vec![0, 1], None).unwrap();
        let f = ThomaeFn::new(set, WeightRule::Rescaled(vec![0, 1, 1])).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: ThomaeFn = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn dense_sets() {
        assert!(DenseSet::PrimeDenominator.contains(&q(1, 2)));
        assert!(DenseSet::PrimeDenominator.contains(&q(4, 7)));
        assert!(!DenseSet::PrimeDenominator.contains(&q(1, 4)));
        assert!(!DenseSet::PrimeDenominator.contains(&q(1, 1)));
        assert!(DenseSet::Dyadic.contains(&q(3, 8)));
        assert!(!DenseSet::Dyadic.contains(&q(1, 3)));
        assert_eq!(DenseSet::Dyadic.enumerate(3), vec![q(1, 2), q(1, 4), q(3, 4)]);
    }
}
