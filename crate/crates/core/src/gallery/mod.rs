//! The function gallery: piecewise polynomials, Thomae-type functions,
//! Dirichlet-type indicators and their linear combinations.

mod piecewise;
mod poly;
mod thomae;

pub use piecewise::{Location, PiecewiseFn, PointData};
pub use poly::{simplest_between, Extremum, Located, Polynomial, BISECTION_DEPTH};
pub use thomae::{DenseSet, HeightedSet, ThomaeFn, WeightRule};

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Point, QuadraticSurd};

/// Indicator of a dense countable set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletFn {
    pub dense_set: DenseSet,
}

impl DirichletFn {
    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        if self.dense_set.contains(x) {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    }
}

/// Uniform handle over every gallery function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GalleryFn {
    Piecewise(PiecewiseFn),
    Thomae(ThomaeFn),
    Dirichlet(DirichletFn),
    Sum { left: Box<GalleryFn>, right: Box<GalleryFn> },
    Difference { left: Box<GalleryFn>, right: Box<GalleryFn> },
    Scaled { factor: ExactScalar, inner: Box<GalleryFn> },
}

/// A one-sided limit; `construction_derived` marks values known from how the
/// function was built rather than read off stored breakpoint data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limit {
    pub value: ExactScalar,
    pub construction_derived: bool,
}

impl GalleryFn {
    /// `left + right`, collapsed to a single piecewise function when possible.
    pub fn sum(left: GalleryFn, right: GalleryFn) -> GalleryFn {
        match (left, right) {
            (GalleryFn::Piecewise(a), GalleryFn::Piecewise(b)) => GalleryFn::Piecewise(a.add(&b)),
            (l, r) => GalleryFn::Sum { left: Box::new(l), right: Box::new(r) },
        }
    }

    pub fn difference(left: GalleryFn, right: GalleryFn) -> GalleryFn {
        match (left, right) {
            (GalleryFn::Piecewise(a), GalleryFn::Piecewise(b)) => GalleryFn::Piecewise(a.sub(&b)),
            (l, r) => GalleryFn::Difference { left: Box::new(l), right: Box::new(r) },
        }
    }

    pub fn scaled(factor: ExactScalar, inner: GalleryFn) -> GalleryFn {
        match inner {
            GalleryFn::Piecewise(p) => GalleryFn::Piecewise(p.scale(&factor)),
            other => GalleryFn::Scaled { factor, inner: Box::new(other) },
        }
    }

    pub fn as_piecewise(&self) -> Option<&PiecewiseFn> {
        match self {
            GalleryFn::Piecewise(p) => Some(p),
            _ => None,
        }
    }

    /// The polynomial `p` when `f = p` on all of `[0, 1]`.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        let p = self.as_piecewise()?;
        if p.pieces().len() != 1 {
            return None;
        }
        let d = p.point_data();
        let continuous = Some(&d[0].value) == d[0].right_limit.as_ref()
            && Some(&d[1].value) == d[1].left_limit.as_ref();
        continuous.then(|| &p.pieces()[0])
    }

    /// True when every component has one-sided limits everywhere.
    pub fn is_regulated(&self) -> bool {
        match self {
            GalleryFn::Piecewise(_) | GalleryFn::Thomae(_) => true,
            GalleryFn::Dirichlet(_) => false,
            GalleryFn::Sum { left, right } | GalleryFn::Difference { left, right } => {
                left.is_regulated() && right.is_regulated()
            }
            GalleryFn::Scaled { inner, .. } => inner.is_regulated(),
        }
    }

    pub fn eval(&self, x: &ExactScalar) -> Result<ExactScalar> {
        x.require_unit("evaluation point")?;
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the domain check; `x` must lie in `[0, 1]`.
    pub fn eval_unchecked(&self, x: &ExactScalar) -> ExactScalar {
        match self {
            GalleryFn::Piecewise(p) => p.eval(x),
            GalleryFn::Thomae(t) => t.eval(x),
            GalleryFn::Dirichlet(d) => d.eval(x),
            GalleryFn::Sum { left, right } => left.eval_unchecked(x) + right.eval_unchecked(x),
            GalleryFn::Difference { left, right } => left.eval_unchecked(x) - right.eval_unchecked(x),
            GalleryFn::Scaled { factor, inner } => factor * inner.eval_unchecked(x),
        }
    }

    /// Value at a support-style point; irrational points are meaningful only
    /// for Thomae-type components and are zero elsewhere on the gallery's
    /// indicator sets. Piecewise functions need a rational argument.
    pub fn eval_point(&self, x: &Point) -> Result<ExactScalar> {
        match (self, x) {
            (_, Point::Rational(r)) => self.eval(r),
            (GalleryFn::Thomae(t), p) => Ok(t.eval_point(p)),
            (GalleryFn::Dirichlet(_), _) => Ok(ExactScalar::zero()),
            (GalleryFn::Sum { left, right }, p) => Ok(left.eval_point(p)? + right.eval_point(p)?),
            (GalleryFn::Difference { left, right }, p) => Ok(left.eval_point(p)? - right.eval_point(p)?),
            (GalleryFn::Scaled { factor, inner }, p) => Ok(factor * inner.eval_point(p)?),
            (GalleryFn::Piecewise(_), p) => {
                Err(Error::Unsupported(format!("piecewise evaluation needs a rational argument, got {p}")))
            }
        }
    }

    /// `f(k/n)` for `k = 0..=n`.
    pub fn samples(&self, n: u64) -> Vec<ExactScalar> {
        match self {
            GalleryFn::Thomae(t) => {
                let mut out = vec![ExactScalar::zero(); n as usize + 1];
                let nn = num_bigint::BigInt::from(n);
                for (p, v) in t.support_values() {
                    if let Some(r) = p.as_rational() {
                        let (k, rem) = (r.numer() * &nn).div_rem(r.denom());
                        if rem == num_bigint::BigInt::from(0) {
                            out[k.to_usize().expect("k <= n")] = v.clone();
                        }
                    }
                }
                out
            }
            GalleryFn::Sum { left, right } => {
                left.samples(n).into_iter().zip(right.samples(n)).map(|(a, b)| a + b).collect()
            }
            GalleryFn::Difference { left, right } => {
                left.samples(n).into_iter().zip(right.samples(n)).map(|(a, b)| a - b).collect()
            }
            GalleryFn::Scaled { factor, inner } => inner.samples(n).into_iter().map(|v| factor * v).collect(),
            _ => (0..=n).map(|k| self.eval_unchecked(&ExactScalar::new(k, n))).collect(),
        }
    }

    pub fn left_limit(&self, x: &ExactScalar) -> Result<Limit> {
        if !(x.is_positive() && x <= &ExactScalar::one()) {
            return Err(Error::Domain(format!("left limit needs x in (0,1], got {x}")));
        }
        self.limit(x, true)
    }

    pub fn right_limit(&self, x: &ExactScalar) -> Result<Limit> {
        if !(!x.is_negative() && x < &ExactScalar::one()) {
            return Err(Error::Domain(format!("right limit needs x in [0,1), got {x}")));
        }
        self.limit(x, false)
    }

    fn limit(&self, x: &ExactScalar, left: bool) -> Result<Limit> {
        match self {
            GalleryFn::Piecewise(p) => {
                let value = if left { p.left_limit(x)? } else { p.right_limit(x)? };
                Ok(Limit { value, construction_derived: false })
            }
            // Only finitely many support points lie above any positive level,
            // so a small enough punctured neighbourhood sees values below it.
            GalleryFn::Thomae(_) => Ok(Limit { value: ExactScalar::zero(), construction_derived: true }),
            GalleryFn::Dirichlet(_) => Err(Error::NotRegulated(
                "indicator of a dense set has no one-sided limits".into(),
            )),
            GalleryFn::Sum { left: a, right: b } | GalleryFn::Difference { left: a, right: b } => {
                let (la, lb) = (a.limit(x, left)?, b.limit(x, left)?);
                let value = if matches!(self, GalleryFn::Sum { .. }) { la.value + lb.value } else { la.value - lb.value };
                Ok(Limit { value, construction_derived: la.construction_derived || lb.construction_derived })
            }
            GalleryFn::Scaled { factor, inner } => {
                let l = inner.limit(x, left)?;
                Ok(Limit { value: factor * l.value, construction_derived: l.construction_derived })
            }
        }
    }

    /// Points where the function may fail to be continuous: breakpoints of
    /// piecewise parts and support points of Thomae parts.
    pub fn discontinuity_candidates(&self) -> Vec<Point> {
        let mut out = match self {
            GalleryFn::Piecewise(p) => p.breakpoints().iter().cloned().map(Point::Rational).collect(),
            GalleryFn::Thomae(t) => t.support().points().to_vec(),
            GalleryFn::Dirichlet(_) => Vec::new(),
            GalleryFn::Sum { left, right } | GalleryFn::Difference { left, right } => {
                let mut v = left.discontinuity_candidates();
                v.extend(right.discontinuity_candidates());
                v
            }
            GalleryFn::Scaled { inner, .. } => inner.discontinuity_candidates(),
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn classify(&self) -> ClassReport {
        match self {
            GalleryFn::Piecewise(p) => classify_piecewise(p),
            GalleryFn::Thomae(t) => classify_thomae(t),
            // Both the dense set and its complement are dense, so the
            // oscillation is 1 everywhere.
            GalleryFn::Dirichlet(_) => ClassReport {
                regulated: Flag::No,
                cadlag: Flag::No,
                u0: Flag::No,
                monotone: Flag::No,
                bv: Flag::No,
                variation: None,
                variation_exact: false,
                lsco: Flag::No,
                usco: Flag::No,
                cliquish: Flag::No,
                locally_bounded: Flag::Yes,
            },
            _ => ClassReport {
                regulated: if self.is_regulated() { Flag::Yes } else { Flag::NotApplicable },
                ..ClassReport::not_applicable()
            },
        }
    }
}

/// Outcome of one class-membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    Yes,
    No,
    NotApplicable,
    UnknownAtTruncation,
}

impl Flag {
    fn from_bool(b: bool) -> Flag {
        if b {
            Flag::Yes
        } else {
            Flag::No
        }
    }
}

/// Class memberships decided from breakpoint or support data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub regulated: Flag,
    pub cadlag: Flag,
    pub u0: Flag,
    pub monotone: Flag,
    pub bv: Flag,
    /// Total variation when `bv` is `Yes`.
    pub variation: Option<ExactScalar>,
    /// False when a turning point is irrational and `variation` is approximate.
    pub variation_exact: bool,
    pub lsco: Flag,
    pub usco: Flag,
    pub cliquish: Flag,
    pub locally_bounded: Flag,
}

impl ClassReport {
    fn not_applicable() -> Self {
        ClassReport {
            regulated: Flag::NotApplicable,
            cadlag: Flag::NotApplicable,
            u0: Flag::NotApplicable,
            monotone: Flag::NotApplicable,
            bv: Flag::NotApplicable,
            variation: None,
            variation_exact: false,
            lsco: Flag::NotApplicable,
            usco: Flag::NotApplicable,
            cliquish: Flag::NotApplicable,
            locally_bounded: Flag::NotApplicable,
        }
    }
}

fn classify_piecewise(p: &PiecewiseFn) -> ClassReport {
    let data = p.point_data();
    let last = data.len() - 1;
    let limits = |d: &PointData| d.left_limit.iter().chain(&d.right_limit).cloned().collect::<Vec<_>>();

    let cadlag = data[..last].iter().all(|d| d.right_limit.as_ref() == Some(&d.value));
    let u0 = data[1..last].iter().all(|d| {
        let (l, r) = (d.left_limit.as_ref().unwrap(), d.right_limit.as_ref().unwrap());
        l.min(r) <= &d.value && &d.value <= l.max(r)
    });
    let lsco = data.iter().all(|d| limits(d).iter().all(|l| &d.value <= l));
    let usco = data.iter().all(|d| limits(d).iter().all(|l| &d.value >= l));

    let directions: Vec<Option<i32>> = (0..p.pieces().len()).map(|i| p.piece_direction(i)).collect();
    let ordered = |up: bool| {
        directions.iter().all(|d| matches!(d, Some(0)) || *d == Some(if up { 1 } else { -1 }))
            && data.iter().all(|d| {
                let le = |a: &ExactScalar, b: &ExactScalar| if up { a <= b } else { a >= b };
                d.left_limit.as_ref().is_none_or(|l| le(l, &d.value))
                    && d.right_limit.as_ref().is_none_or(|r| le(&d.value, r))
            })
    };
    let (variation, exact) = p.total_variation();
    ClassReport {
        regulated: Flag::Yes,
        cadlag: Flag::from_bool(cadlag),
        u0: Flag::from_bool(u0),
        monotone: Flag::from_bool(ordered(true) || ordered(false)),
        bv: Flag::Yes,
        variation: Some(variation),
        variation_exact: exact,
        lsco: Flag::from_bool(lsco),
        usco: Flag::from_bool(usco),
        cliquish: Flag::Yes,
        locally_bounded: Flag::Yes,
    }
}

fn classify_thomae(t: &ThomaeFn) -> ClassReport {
    let (zero, one) = (ExactScalar::zero(), ExactScalar::one());
    let pts = t.support().points();
    let only = |x: &ExactScalar| pts.iter().all(|p| p.as_rational() == Some(x));
    let interior = pts.iter().any(|p| p.in_open(&zero, &one));
    let below_one = pts.iter().any(|p| p.cmp_rational(&one).is_lt());
    ClassReport {
        regulated: Flag::Yes,
        cadlag: Flag::from_bool(!below_one),
        u0: Flag::from_bool(!interior),
        monotone: Flag::from_bool(only(&zero) || only(&one)),
        bv: if pts.is_empty() { Flag::Yes } else { Flag::UnknownAtTruncation },
        variation: pts.is_empty().then(ExactScalar::zero),
        variation_exact: pts.is_empty(),
        lsco: Flag::from_bool(pts.is_empty()),
        usco: Flag::Yes,
        cliquish: Flag::Yes,
        locally_bounded: Flag::Yes,
    }
}

/// Reduced fractions in `(0, 1)` ordered by denominator, then numerator.
pub fn rationals_by_denominator() -> impl Iterator<Item = ExactScalar> {
    (2i64..).flat_map(|d| (1..d).filter(move |&n| n.gcd(&d) == 1).map(move |n| ExactScalar::new(n, d)))
}

pub fn make_heaviside(a: ExactScalar, v: ExactScalar) -> Result<PiecewiseFn> {
    PiecewiseFn::heaviside(a, v)
}

pub fn make_step(initial: ExactScalar, jumps: &[(ExactScalar, ExactScalar)]) -> Result<PiecewiseFn> {
    PiecewiseFn::step(initial, jumps)
}

pub fn make_thomae(support: HeightedSet, rule: WeightRule) -> Result<ThomaeFn> {
    ThomaeFn::new(support, rule)
}

/// `1/2^(n+1)` at points whose least containing set is `X_n`, zero elsewhere.
pub fn make_php_h(closed_sets: &[Vec<Point>]) -> Result<ThomaeFn> {
    ThomaeFn::new(HeightedSet::from_nested(closed_sets)?, WeightRule::Power)
}

/// Named gallery constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Heaviside,
    Square,
    ThomaeDefault,
    PhpH,
    Dirichlet,
}

/// Number of support points of the default Thomae-type function.
pub const THOMAE_DEFAULT_SIZE: usize = 64;

/// Number of nested sets in the php-h preset.
pub const PHP_H_LEVELS: usize = 8;

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Heaviside, Preset::Square, Preset::ThomaeDefault, Preset::PhpH, Preset::Dirichlet];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Heaviside => "heaviside",
            Preset::Square => "square",
            Preset::ThomaeDefault => "thomae-default",
            Preset::PhpH => "php-h",
            Preset::Dirichlet => "dirichlet",
        }
    }

    pub fn build(&self) -> GalleryFn {
        match self {
            Preset::Heaviside => GalleryFn::Piecewise(
                make_heaviside(ExactScalar::new(1, 2), ExactScalar::one()).expect("valid jump"),
            ),
            Preset::Square => GalleryFn::Piecewise(PiecewiseFn::polynomial(Polynomial::monomial(2))),
            Preset::ThomaeDefault => GalleryFn::Thomae(thomae_default()),
            Preset::PhpH => GalleryFn::Thomae(php_h()),
            Preset::Dirichlet => GalleryFn::Dirichlet(DirichletFn { dense_set: DenseSet::PrimeDenominator }),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown preset {s:?}")))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first 64 rationals of `(0, 1)`, `q_m` at height `m`, dyadic weights.
pub fn thomae_default() -> ThomaeFn {
    let points: Vec<Point> =
        rationals_by_denominator().take(THOMAE_DEFAULT_SIZE).map(Point::Rational).collect();
    let heights = (0..points.len() as u64).collect();
    let support = HeightedSet::new(points, heights, None).expect("distinct rationals");
    ThomaeFn::new(support, WeightRule::Dyadic).expect("dyadic rule is decreasing")
}

/// Nested sets `X_0 ⊆ ... ⊆ X_7`; level `n` adds the rational `(n+1)/(2n+3)`
/// and the irrational `sqrt(2)/(n+2)`.
pub fn php_h_sets() -> Vec<Vec<Point>> {
    let mut sets = Vec::with_capacity(PHP_H_LEVELS);
    let mut current: Vec<Point> = Vec::new();
    for n in 0..PHP_H_LEVELS as i64 {
        current.push(Point::Rational(ExactScalar::new(n + 1, 2 * n + 3)));
        let surd = QuadraticSurd::new(ExactScalar::zero(), ExactScalar::new(1, n + 2), 2).expect("sqrt 2 is irrational");
        current.push(Point::Surd(surd));
        sets.push(current.clone());
    }
    sets
}

pub fn php_h() -> ThomaeFn {
    make_php_h(&php_h_sets()).expect("preset sets are nested")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn heaviside() -> GalleryFn {
        Preset::Heaviside.build()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(heaviside().eval(&q(1, 4)).unwrap(), q(0, 1));
        assert_eq!(heaviside().eval(&q(3, 4)).unwrap(), q(1, 1));
        assert!(heaviside().eval(&q(5, 4)).is_err());
        let d = Preset::Dirichlet.build();
        assert_eq!(d.eval(&q(2, 5)).unwrap(), q(1, 1));
        assert_eq!(d.eval(&q(1, 4)).unwrap(), q(0, 1));
        let empty = GalleryFn::Thomae(make_thomae(HeightedSet::empty(), WeightRule::Dyadic).unwrap());
        assert_eq!(empty.eval(&q(1, 2)).unwrap(), q(0, 1));
    }

    #[test]
    fn php_h_least_level_weight() {
        let h = make_php_h(&[vec![Point::Rational(q(1, 3))], vec![Point::Rational(q(1, 3)), Point::Rational(q(2, 3))]]).unwrap();
        assert_eq!(h.eval(&q(2, 3)), q(1, 4));
        assert_eq!(h.eval(&q(1, 3)), q(1, 2));
    }

    #[test]
    fn thomae_default_enumeration() {
        let t = thomae_default();
        assert_eq!(t.support().len(), 64);
        assert_eq!(t.support().points()[1], Point::Rational(q(1, 3)));
        assert_eq!(t.eval(&q(1, 3)), q(1, 8));
        assert_eq!(t.eval(&q(1, 2)), q(1, 4));
        assert_eq!(t.eval(&q(1, 97)), q(0, 1));
        let first: Vec<_> = rationals_by_denominator().take(5).collect();
        assert_eq!(first, vec![q(1, 2), q(1, 3), q(2, 3), q(1, 4), q(3, 4)]);
    }

    #[test]
    fn limits() {
        let h = heaviside();
        assert_eq!(h.left_limit(&q(1, 2)).unwrap().value, q(0, 1));
        assert_eq!(h.right_limit(&q(1, 2)).unwrap().value, q(1, 1));
        let t = Preset::ThomaeDefault.build();
        let l = t.left_limit(&q(1, 3)).unwrap();
        assert_eq!(l.value, q(0, 1));
        assert!(l.construction_derived);
        assert!(matches!(Preset::Dirichlet.build().left_limit(&q(1, 2)), Err(Error::NotRegulated(_))));
        let sq = Preset::Square.build();
        assert_eq!(sq.left_limit(&q(1, 3)).unwrap().value, sq.eval(&q(1, 3)).unwrap());
    }

    #[test]
    fn classify_examples() {
        let c = heaviside().classify();
        assert_eq!((c.cadlag, c.u0, c.bv), (Flag::Yes, Flag::Yes, Flag::Yes));
        assert_eq!(c.variation, Some(q(1, 1)));
        let hump = GalleryFn::Piecewise(PiecewiseFn::polynomial(Polynomial::new(vec![q(0, 1), q(1, 1), q(-1, 1)])));
        let c = hump.classify();
        assert_eq!((c.regulated, c.cadlag, c.monotone), (Flag::Yes, Flag::Yes, Flag::No));
        assert_eq!(c.variation, Some(q(1, 2)));
        let c = Preset::ThomaeDefault.build().classify();
        assert_eq!((c.regulated, c.bv, c.usco, c.lsco), (Flag::Yes, Flag::UnknownAtTruncation, Flag::Yes, Flag::No));
        let c = Preset::Dirichlet.build().classify();
        assert_eq!((c.regulated, c.bv, c.cadlag, c.cliquish), (Flag::No, Flag::No, Flag::No, Flag::No));
        assert_eq!((c.lsco, c.usco, c.locally_bounded), (Flag::No, Flag::No, Flag::Yes));
    }

    #[test]
    fn non_u0_spike() {
        let spike = GalleryFn::Piecewise(make_heaviside(q(1, 2), q(5, 1)).unwrap());
        let c = spike.classify();
        assert_eq!((c.u0, c.cadlag, c.usco, c.monotone), (Flag::No, Flag::No, Flag::Yes, Flag::No));
        let down = GalleryFn::Piecewise(make_heaviside(q(1, 2), q(-1, 1)).unwrap());
        assert_eq!(down.classify().lsco, Flag::Yes);
    }

    #[test]
    fn thomae_samples_match_eval() {
        let t = Preset::ThomaeDefault.build();
        for n in [12u64, 30, 64] {
            let direct: Vec<_> = (0..=n).map(|k| t.eval(&q(k as i64, n as i64)).unwrap()).collect();
            assert_eq!(t.samples(n), direct);
        }
    }

    #[test]
    fn gallery_json_round_trip() {
        let sum = GalleryFn::sum(Preset::PhpH.build(), heaviside());
        for f in [heaviside(), Preset::PhpH.build(), Preset::Dirichlet.build(), sum] {
            let text = serde_json::to_string(&f).unwrap();
            let back: GalleryFn = serde_json::from_str(&text).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn php_h_preset_shape() {
        let h = php_h();
        assert_eq!(h.support().len(), 2 * PHP_H_LEVELS);
        let total: ExactScalar = h.support_values().map(|(_, v)| v.clone()).sum();
        assert!(total < q(2, 1));
        assert_eq!(h.rational_restriction().support().len(), PHP_H_LEVELS);
    }
}
