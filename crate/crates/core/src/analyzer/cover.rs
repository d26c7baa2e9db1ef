//! Finite measure-zero covers and nested-interval avoidance of finite sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Point};

/// Open intervals with rational endpoints and their exact total length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalCover {
    pub intervals: Vec<(ExactScalar, ExactScalar)>,
    pub total_length: ExactScalar,
}

impl IntervalCover {
    pub fn covers(&self, p: &Point) -> bool {
        self.intervals.iter().any(|(a, b)| p.in_open(a, b))
    }

    fn from_intervals(intervals: Vec<(ExactScalar, ExactScalar)>) -> Self {
        let total_length = intervals.iter().map(|(a, b)| b - a).sum();
        IntervalCover { intervals, total_length }
    }
}

/// A rational within `radius` of `p` (exact for rational points).
fn rational_near(p: &Point, radius: &ExactScalar) -> ExactScalar {
    match p {
        Point::Rational(r) => r.clone(),
        Point::Surd(s) => {
            let mut bits = 16;
            loop {
                let (lo, hi) = s.enclose(bits);
                if &(&hi - &lo) < radius {
                    return lo.midpoint(&hi);
                }
                bits *= 2;
            }
        }
    }
}

/// Interval `i` has length `eps / 2^(i+1)` and contains point `i`, so the
/// total is `eps (1 - 2^-m) < eps` for `m` points.
pub fn cover(points: &[Point], eps: &ExactScalar) -> Result<IntervalCover> {
    if !eps.is_positive() {
        return Err(Error::Domain(format!("cover budget must be positive, got {eps}")));
    }
    let intervals = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let half = eps * ExactScalar::pow2(-(i as i64) - 2);
            let c = rational_near(p, &(&half / ExactScalar::from_integer(2)));
            (&c - &half, c + half)
        })
        .collect();
    Ok(IntervalCover::from_intervals(intervals))
}

/// Covers `sets[n]` with budget `eps / 2^(n+1)` each.
pub fn cover_family(sets: &[Vec<Point>], eps: &ExactScalar) -> Result<IntervalCover> {
    let mut intervals = Vec::new();
    for (n, set) in sets.iter().enumerate() {
        let budget = eps * ExactScalar::pow2(-(n as i64) - 1);
        intervals.extend(cover(set, &budget)?.intervals);
    }
    Ok(IntervalCover::from_intervals(intervals))
}

/// A rational in `(0, 1)` outside every set: for each set in turn, trisect
/// the current interval and keep the lowest third whose closure misses the
/// set, descending into the lowest third while no third does.
pub fn baire_witness(avoid: &[Vec<Point>]) -> ExactScalar {
    let (mut lo, mut hi) = (ExactScalar::zero(), ExactScalar::one());
    let three = ExactScalar::from_integer(3);
    for set in avoid {
        loop {
            let step = (&hi - &lo) / &three;
            let thirds: Vec<(ExactScalar, ExactScalar)> = (0..3)
                .map(|j| {
                    let a = &lo + &step * ExactScalar::from_integer(j);
                    let b = &a + &step;
                    (a, b)
                })
                .collect();
            if let Some((a, b)) = thirds.iter().find(|(a, b)| set.iter().all(|p| !p.in_closed(a, b))) {
                lo = a.clone();
                hi = b.clone();
                break;
            }
            hi = thirds[0].1.clone();
        }
    }
    lo.midpoint(&hi)
}
