//! Functions with finitely many breakpoints and polynomial pieces.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::poly::{Located, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Value and one-sided limits at a breakpoint. `left_limit` is absent at 0
/// and `right_limit` at 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointData {
    pub value: ExactScalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_limit: Option<ExactScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_limit: Option<ExactScalar>,
}

/// Breakpoints `0 = b_0 < ... < b_m = 1`, piece `i` on `(b_i, b_{i+1})`, and
/// free values at the breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseDoc", into = "PiecewiseDoc")]
pub struct PiecewiseFn {
    breakpoints: Vec<ExactScalar>,
    pieces: Vec<Polynomial>,
    point_data: Vec<PointData>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct PiecewiseDoc {
    breakpoints: Vec<ExactScalar>,
    pieces: Vec<Polynomial>,
    /// Values with explicit limits, checked against the pieces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point_data: Option<Vec<PointData>>,
    /// Breakpoint values only; limits are derived from the pieces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<ExactScalar>>,
}

/// Where a point of `[0, 1]` falls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Breakpoint(usize),
    Piece(usize),
}

impl PiecewiseFn {
    /// Builds the function and derives every one-sided limit from the pieces.
    pub fn new(breakpoints: Vec<ExactScalar>, pieces: Vec<Polynomial>, values: Vec<ExactScalar>) -> Result<Self> {
        check_shape(&breakpoints, pieces.len(), values.len())?;
        let last = breakpoints.len() - 1;
        let point_data = values
            .into_iter()
            .enumerate()
            .map(|(i, value)| PointData {
                value,
                left_limit: (i > 0).then(|| pieces[i - 1].eval(&breakpoints[i])),
                right_limit: (i < last).then(|| pieces[i].eval(&breakpoints[i])),
            })
            .collect();
        Ok(PiecewiseFn { breakpoints, pieces, point_data })
    }

    /// Builds the function from stored limits, checking them against the pieces.
    pub fn from_parts(breakpoints: Vec<ExactScalar>, pieces: Vec<Polynomial>, point_data: Vec<PointData>) -> Result<Self> {
        check_shape(&breakpoints, pieces.len(), point_data.len())?;
        let values = point_data.iter().map(|d| d.value.clone()).collect();
        let built = PiecewiseFn::new(breakpoints, pieces, values)?;
        for (i, (stored, derived)) in point_data.iter().zip(&built.point_data).enumerate() {
            if stored.left_limit != derived.left_limit || stored.right_limit != derived.right_limit {
                return Err(Error::Construction(format!(
                    "limits stored at breakpoint {} disagree with the adjacent pieces",
                    built.breakpoints[i]
                )));
            }
        }
        Ok(built)
    }

    /// A single polynomial on `[0, 1]`.
    pub fn polynomial(p: Polynomial) -> Self {
        let (zero, one) = (ExactScalar::zero(), ExactScalar::one());
        let values = vec![p.eval(&zero), p.eval(&one)];
        PiecewiseFn::new(vec![zero, one], vec![p], values).expect("unit interval shape")
    }

    pub fn constant(c: ExactScalar) -> Self {
        PiecewiseFn::polynomial(Polynomial::constant(c))
    }

    /// 0 on `[0, a)`, 1 on `(a, 1]`, and `v` at `a`.
    pub fn heaviside(a: ExactScalar, v: ExactScalar) -> Result<Self> {
        if !(a.is_positive() && a < ExactScalar::one()) {
            return Err(Error::Construction(format!("jump location {a} must lie in (0,1)")));
        }
        PiecewiseFn::new(
            vec![ExactScalar::zero(), a, ExactScalar::one()],
            vec![Polynomial::zero(), Polynomial::constant(ExactScalar::one())],
            vec![ExactScalar::zero(), v, ExactScalar::one()],
        )
    }

    /// Right-continuous step function starting at `initial` and jumping by
    /// `size` at each `(location, size)`; locations strictly increasing in `(0,1)`.
    pub fn step(initial: ExactScalar, jumps: &[(ExactScalar, ExactScalar)]) -> Result<Self> {
        let mut breakpoints = vec![ExactScalar::zero()];
        let mut pieces = Vec::with_capacity(jumps.len() + 1);
        let mut values = vec![initial.clone()];
        let mut level = initial;
        for (loc, size) in jumps {
            if loc <= breakpoints.last().unwrap() || loc >= &ExactScalar::one() {
                return Err(Error::Construction(format!(
                    "jump locations must be strictly increasing in (0,1); got {loc}"
                )));
            }
            pieces.push(Polynomial::constant(level.clone()));
            level += size;
            breakpoints.push(loc.clone());
            values.push(level.clone());
        }
        pieces.push(Polynomial::constant(level.clone()));
        breakpoints.push(ExactScalar::one());
        values.push(level);
        PiecewiseFn::new(breakpoints, pieces, values)
    }

    /// Indicator of a finite set of points in `[0, 1]`.
    pub fn indicator(points: &[ExactScalar]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort();
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Construction("indicator points must be distinct".into()));
        }
        if let Some(bad) = pts.iter().find(|p| !p.in_unit_interval()) {
            return Err(Error::Construction(format!("indicator point {bad} outside [0,1]")));
        }
        let mut breakpoints = vec![ExactScalar::zero()];
        breakpoints.extend(pts.iter().filter(|p| !p.is_zero() && **p != ExactScalar::one()).cloned());
        breakpoints.push(ExactScalar::one());
        let values = breakpoints
            .iter()
            .map(|b| if pts.binary_search(b).is_ok() { ExactScalar::one() } else { ExactScalar::zero() })
            .collect();
        let pieces = vec![Polynomial::zero(); breakpoints.len() - 1];
        PiecewiseFn::new(breakpoints, pieces, values)
    }

    pub fn breakpoints(&self) -> &[ExactScalar] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn point_data(&self) -> &[PointData] {
        &self.point_data
    }

    /// Interior breakpoints, i.e. excluding 0 and 1.
    pub fn interior_breakpoints(&self) -> &[ExactScalar] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    /// Assumes `x` in `[0, 1]`.
    pub fn locate(&self, x: &ExactScalar) -> Location {
        match self.breakpoints.binary_search(x) {
            Ok(i) => Location::Breakpoint(i),
            Err(i) => Location::Piece(i.clamp(1, self.pieces.len()) - 1),
        }
    }

    /// Assumes `x` in `[0, 1]`.
    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        match self.locate(x) {
            Location::Breakpoint(i) => self.point_data[i].value.clone(),
            Location::Piece(i) => self.pieces[i].eval(x),
        }
    }

    /// `f(x-)` for `x` in `(0, 1]`.
    pub fn left_limit(&self, x: &ExactScalar) -> Result<ExactScalar> {
        if !(x.is_positive() && x <= &ExactScalar::one()) {
            return Err(Error::Domain(format!("left limit needs x in (0,1], got {x}")));
        }
        Ok(match self.locate(x) {
            Location::Breakpoint(i) => self.point_data[i].left_limit.clone().expect("interior or right end"),
            Location::Piece(i) => self.pieces[i].eval(x),
        })
    }

    /// `f(x+)` for `x` in `[0, 1)`.
    pub fn right_limit(&self, x: &ExactScalar) -> Result<ExactScalar> {
        if !(!x.is_negative() && x < &ExactScalar::one()) {
            return Err(Error::Domain(format!("right limit needs x in [0,1), got {x}")));
        }
        Ok(match self.locate(x) {
            Location::Breakpoint(i) => self.point_data[i].right_limit.clone().expect("interior or left end"),
            Location::Piece(i) => self.pieces[i].eval(x),
        })
    }

    /// Pointwise combination `op(self, other)` for a linear `op`.
    pub fn combine(&self, other: &PiecewiseFn, op: impl Fn(&ExactScalar, &ExactScalar) -> ExactScalar,
                   pop: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> PiecewiseFn {
        let mut breakpoints: Vec<ExactScalar> =
            self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        breakpoints.sort();
        breakpoints.dedup();
        let pieces = breakpoints
            .windows(2)
            .map(|w| {
                let mid = w[0].midpoint(&w[1]);
                let (a, b) = (self.piece_at(&mid), other.piece_at(&mid));
                pop(a, b)
            })
            .collect();
        let values = breakpoints.iter().map(|b| op(&self.eval(b), &other.eval(b))).collect();
        PiecewiseFn::new(breakpoints, pieces, values).expect("merged breakpoints stay well formed")
    }

    pub fn add(&self, other: &PiecewiseFn) -> PiecewiseFn {
        self.combine(other, |a, b| a + b, Polynomial::add)
    }

    pub fn sub(&self, other: &PiecewiseFn) -> PiecewiseFn {
        self.combine(other, |a, b| a - b, Polynomial::sub)
    }

    pub fn scale(&self, c: &ExactScalar) -> PiecewiseFn {
        PiecewiseFn {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
            point_data: self
                .point_data
                .iter()
                .map(|d| PointData {
                    value: &d.value * c,
                    left_limit: d.left_limit.as_ref().map(|l| l * c),
                    right_limit: d.right_limit.as_ref().map(|r| r * c),
                })
                .collect(),
        }
    }

    /// Polynomial in force on the open piece containing the non-breakpoint `x`.
    fn piece_at(&self, x: &ExactScalar) -> &Polynomial {
        match self.locate(x) {
            Location::Piece(i) => &self.pieces[i],
            Location::Breakpoint(_) => unreachable!("midpoints of merged breakpoints are interior"),
        }
    }

    /// Same function with every turning point of every piece promoted to a
    /// breakpoint, so each piece is monotone. Fails on an irrational turning point.
    pub fn split_monotone(&self) -> Result<PiecewiseFn> {
        let mut breakpoints = Vec::new();
        let mut pieces = Vec::new();
        let mut values = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let (a, b) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
            breakpoints.push(a.clone());
            values.push(self.point_data[i].value.clone());
            pieces.push(p.clone());
            for c in p.critical_points(a, b) {
                let Located::Exact(c) = c else {
                    return Err(Error::NeedsBreakpoints(format!(
                        "piece on ({a}, {b}) turns at an irrational point"
                    )));
                };
                values.push(p.eval(&c));
                breakpoints.push(c);
                pieces.push(p.clone());
            }
        }
        breakpoints.push(ExactScalar::one());
        values.push(self.point_data.last().unwrap().value.clone());
        PiecewiseFn::new(breakpoints, pieces, values)
    }

    /// Sign of the piece's slope: 1 nondecreasing, -1 nonincreasing, 0 constant,
    /// `None` if it changes direction inside the piece.
    pub fn piece_direction(&self, i: usize) -> Option<i32> {
        let p = &self.pieces[i];
        if p.is_constant() {
            return Some(0);
        }
        let (a, b) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
        let (min, max) = p.derivative().extrema(a, b);
        if !min.value.is_negative() {
            Some(1)
        } else if !max.value.is_positive() {
            Some(-1)
        } else {
            None
        }
    }

    /// `V_0^y(f)` for `y` in `[0, 1]`, and whether it is exact.
    ///
    /// Each breakpoint `b < y` contributes `|f(b) - f(b-)| + |f(b+) - f(b)|`,
    /// `y` itself contributes `|f(y) - f(y-)|`, and pieces their variation.
    pub fn variation_to(&self, y: &ExactScalar) -> (ExactScalar, bool) {
        let mut total = ExactScalar::zero();
        let mut exact = true;
        for (i, b) in self.breakpoints.iter().enumerate() {
            if b > y {
                break;
            }
            let d = &self.point_data[i];
            if let Some(l) = &d.left_limit {
                total += (&d.value - l).abs();
            }
            if b == y {
                return (total, exact);
            }
            if let Some(r) = &d.right_limit {
                total += (r - &d.value).abs();
            }
            let end = self.breakpoints[i + 1].clone().min(y.clone());
            let (v, e) = self.pieces[i].variation(b, &end);
            total += v;
            exact &= e;
        }
        (total, exact)
    }

    pub fn total_variation(&self) -> (ExactScalar, bool) {
        self.variation_to(&ExactScalar::one())
    }
}

fn check_shape(breakpoints: &[ExactScalar], pieces: usize, data: usize) -> Result<()> {
    if breakpoints.len() < 2
        || !breakpoints[0].is_zero()
        || breakpoints.last() != Some(&ExactScalar::one())
    {
        return Err(Error::Construction("breakpoints must start at 0 and end at 1".into()));
    }
    if let Some(w) = breakpoints.windows(2).find(|w| w[0].cmp(&w[1]) != Ordering::Less) {
        return Err(Error::Construction(format!(
            "breakpoints must be strictly increasing; found {} then {}",
            w[0], w[1]
        )));
    }
    if pieces != breakpoints.len() - 1 {
        return Err(Error::Construction(format!(
            "{} breakpoints need {} pieces, got {pieces}",
            breakpoints.len(),
            breakpoints.len() - 1
        )));
    }
    if data != breakpoints.len() {
        return Err(Error::Construction(format!(
            "{} breakpoints need as many point values, got {data}",
            breakpoints.len()
        )));
    }
    Ok(())
}

impl TryFrom<PiecewiseDoc> for PiecewiseFn {
    type Error = Error;

    fn try_from(doc: PiecewiseDoc) -> Result<Self> {
        match (doc.point_data, doc.values) {
            (Some(data), None) => PiecewiseFn::from_parts(doc.breakpoints, doc.pieces, data),
            (None, Some(values)) => PiecewiseFn::new(doc.breakpoints, doc.pieces, values),
            _ => Err(Error::Construction("give exactly one of point_data or values".into())),
        }
    }
}

impl From<PiecewiseFn> for PiecewiseDoc {
    fn from(f: PiecewiseFn) -> Self {
        PiecewiseDoc { breakpoints: f.breakpoints, pieces: f.pieces, point_data: Some(f.point_data), values: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn hump() -> PiecewiseFn {
        PiecewiseFn::polynomial(Polynomial::new(vec![q(0, 1), q(1, 1), q(-1, 1)]))
    }

    #[test]
    fn heaviside_values_and_limits() {
        let h = PiecewiseFn::heaviside(q(1, 2), q(1, 1)).unwrap();
        assert_eq!(h.eval(&q(1, 4)), q(0, 1));
        assert_eq!(h.eval(&q(3, 4)), q(1, 1));
        assert_eq!(h.eval(&q(1, 2)), q(1, 1));
        assert_eq!(h.left_limit(&q(1, 2)).unwrap(), q(0, 1));
        assert_eq!(h.right_limit(&q(1, 2)).unwrap(), q(1, 1));
        assert!(h.left_limit(&q(0, 1)).is_err());
        assert!(h.right_limit(&q(1, 1)).is_err());
        assert!(PiecewiseFn::heaviside(q(1, 1), q(0, 1)).is_err());
    }

    #[test]
    fn step_is_right_continuous() {
        let s = PiecewiseFn::step(q(1, 1), &[(q(1, 4), q(-2, 1))]).unwrap();
        assert_eq!(s.left_limit(&q(1, 4)).unwrap(), q(1, 1));
        assert_eq!(s.eval(&q(1, 4)), q(-1, 1));
        assert_eq!(s.right_limit(&q(1, 4)).unwrap(), q(-1, 1));
        assert!(PiecewiseFn::step(q(0, 1), &[(q(1, 2), q(1, 1)), (q(1, 2), q(1, 1))]).is_err());
    }

    #[test]
    fn rejects_malformed_breakpoints() {
        let z = Polynomial::zero();
        assert!(PiecewiseFn::new(vec![q(0, 1), q(1, 2), q(1, 2), q(1, 1)], vec![z.clone(); 3], vec![q(0, 1); 4]).is_err());
        assert!(PiecewiseFn::new(vec![q(0, 1), q(3, 4), q(1, 2), q(1, 1)], vec![z.clone(); 3], vec![q(0, 1); 4]).is_err());
        assert!(PiecewiseFn::new(vec![q(1, 4), q(1, 1)], vec![z], vec![q(0, 1); 2]).is_err());
    }

    #[test]
    fn stored_limits_are_checked() {
        let h = PiecewiseFn::heaviside(q(1, 2), q(1, 1)).unwrap();
        let mut data = h.point_data().to_vec();
        data[1].left_limit = Some(q(1, 3));
        assert!(PiecewiseFn::from_parts(h.breakpoints().to_vec(), h.pieces().to_vec(), data).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = PiecewiseFn::heaviside(q(1, 2), q(1, 3)).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        assert!(text.contains("\"1/2\""));
        let back: PiecewiseFn = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn indicator_and_combination() {
        let ind = PiecewiseFn::indicator(&[q(1, 3), q(0, 1)]).unwrap();
        assert_eq!(ind.eval(&q(1, 3)), q(1, 1));
        assert_eq!(ind.eval(&q(0, 1)), q(1, 1));
        assert_eq!(ind.eval(&q(1, 2)), q(0, 1));
        let sum = ind.add(&hump());
        assert_eq!(sum.eval(&q(1, 3)), q(11, 9));
        assert_eq!(sum.left_limit(&q(1, 3)).unwrap(), q(2, 9));
        assert_eq!(sum.sub(&hump()).eval(&q(1, 5)), q(0, 1));
    }

    #[test]
    fn variation_counts_pieces_and_jumps() {
        assert_eq!(hump().total_variation(), (q(1, 2), true));
        assert_eq!(hump().variation_to(&q(1, 4)), (q(3, 16), true));
        let h = PiecewiseFn::heaviside(q(1, 2), q(1, 1)).unwrap();
        assert_eq!(h.total_variation(), (q(1, 1), true));
        let spike = PiecewiseFn::heaviside(q(1, 2), q(5, 1)).unwrap();
        assert_eq!(spike.total_variation(), (q(9, 1), true));
        assert_eq!(spike.variation_to(&q(1, 2)), (q(5, 1), true));
    }

    #[test]
    fn monotone_split() {
        let s = hump().split_monotone().unwrap();
        assert_eq!(s.breakpoints(), &[q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(s.piece_direction(0), Some(1));
        assert_eq!(s.piece_direction(1), Some(-1));
        let irr = PiecewiseFn::polynomial(Polynomial::new(vec![q(0, 1), q(-1, 2), q(0, 1), q(1, 1)]));
        assert!(matches!(irr.split_monotone(), Err(Error::NeedsBreakpoints(_))));
    }
}
