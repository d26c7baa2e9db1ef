//! Oscillation, jump sets, membership probes for the convergence set `B_f`,
//! level jump sets and finite covers.

mod cover;

pub use cover::{baire_witness, cover, cover_family, IntervalCover};

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{stabilized, trajectory, Mode, Num};
use crate::error::{Error, Result};
use crate::gallery::{GalleryFn, Location, PiecewiseFn, Polynomial};
use crate::scalar::{ExactScalar, Point};

/// Depth of the shrinking-ball cross-check for pointwise oscillation.
pub const SAMPLED_DEPTH: u32 = 20;

fn unsupported(what: &str) -> Error {
    Error::Unsupported(format!("{what} is defined for piecewise, Thomae-type and Dirichlet functions"))
}

/// `sup f - inf f` over `[a, b]`.
pub fn oscillation_interval(f: &GalleryFn, a: &ExactScalar, b: &ExactScalar) -> Result<ExactScalar> {
    if a >= b {
        return Err(Error::Domain(format!("oscillation needs a < b, got [{a}, {b}]")));
    }
    a.require_unit("a")?;
    b.require_unit("b")?;
    match f {
        GalleryFn::Piecewise(p) => {
            let (lo, hi) = piecewise_range(p, a, b);
            Ok(hi - lo)
        }
        // Non-support rationals in [a, b] give the infimum 0.
        GalleryFn::Thomae(t) => Ok(t.max_on(a, b)),
        GalleryFn::Dirichlet(_) => Ok(ExactScalar::one()),
        _ => Err(unsupported("interval oscillation")),
    }
}

/// Infimum and supremum of a piecewise function over `[a, b]`.
fn piecewise_range(p: &PiecewiseFn, a: &ExactScalar, b: &ExactScalar) -> (ExactScalar, ExactScalar) {
    let mut cands: Vec<ExactScalar> = Vec::new();
    let bps = p.breakpoints();
    for (i, poly) in p.pieces().iter().enumerate() {
        let lo = a.max(&bps[i]);
        let hi = b.min(&bps[i + 1]);
        if lo < hi {
            let (min, max) = poly.extrema(lo, hi);
            cands.push(min.value);
            cands.push(max.value);
        }
    }
    for (x, d) in bps.iter().zip(p.point_data()) {
        if a <= x && x <= b {
            cands.push(d.value.clone());
        }
    }
    let lo = cands.iter().min().cloned().expect("nonempty interval");
    let hi = cands.iter().max().cloned().expect("nonempty interval");
    (lo, hi)
}

/// `osc_f(x0)` from stored limit data.
pub fn oscillation_point(f: &GalleryFn, x0: &ExactScalar) -> Result<ExactScalar> {
    x0.require_unit("x0")?;
    match f {
        GalleryFn::Piecewise(p) => Ok(match p.locate(x0) {
            Location::Piece(_) => ExactScalar::zero(),
            Location::Breakpoint(i) => {
                let d = &p.point_data()[i];
                let vals: Vec<&ExactScalar> =
                    std::iter::once(&d.value).chain(&d.left_limit).chain(&d.right_limit).collect();
                vals.iter().copied().max().unwrap() - vals.iter().copied().min().unwrap()
            }
        }),
        GalleryFn::Thomae(t) => Ok(t.eval(x0)),
        GalleryFn::Dirichlet(_) => Ok(ExactScalar::one()),
        _ => Err(unsupported("pointwise oscillation")),
    }
}

/// `osc_f(x)` at a possibly irrational point; Thomae-type functions only
/// for irrational `x`.
pub fn oscillation_at(f: &GalleryFn, x: &Point) -> Result<ExactScalar> {
    match (f, x) {
        (_, Point::Rational(r)) => oscillation_point(f, r),
        (GalleryFn::Thomae(t), p) => Ok(t.eval_point(p)),
        (GalleryFn::Dirichlet(_), _) => Ok(ExactScalar::one()),
        _ => Err(Error::Unsupported("oscillation at an irrational point of this function".into())),
    }
}

/// Cross-check of [`oscillation_point`]: interval oscillation over the ball
/// of radius `2^-depth` around `x0`, clipped to `[0, 1]`.
pub fn oscillation_point_sampled(f: &GalleryFn, x0: &ExactScalar, depth: u32) -> Result<ExactScalar> {
    x0.require_unit("x0")?;
    let r = ExactScalar::pow2(-i64::from(depth));
    let a = (x0 - &r).max(ExactScalar::zero());
    let b = (x0 + &r).min(ExactScalar::one());
    oscillation_interval(f, &a, &b)
}

/// `D_k`: points where `f` differs from a one-sided limit by more than `2^-k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpSet {
    pub k: u32,
    pub points: Vec<Point>,
}

pub fn jump_set(f: &GalleryFn, k: u32) -> Result<JumpSet> {
    if !f.is_regulated() {
        return Err(Error::NotRegulated("jump sets need one-sided limits".into()));
    }
    let thr = ExactScalar::pow2(-i64::from(k));
    let mut points = Vec::new();
    for c in f.discontinuity_candidates() {
        if jump_size(f, &c)? > thr {
            points.push(c);
        }
    }
    if let Some(p) = f.as_piecewise() {
        let (v, exact) = p.total_variation();
        if exact && v <= ExactScalar::one() && points.len() as u128 > 1u128 << k.min(127) {
            return Err(Error::Consistency(format!(
                "variation {v} <= 1 but D_{k} has {} points",
                points.len()
            )));
        }
    }
    Ok(JumpSet { k, points })
}

/// `max(|f(x) - f(x+)|, |f(x) - f(x-)|)` at a candidate point.
fn jump_size(f: &GalleryFn, x: &Point) -> Result<ExactScalar> {
    let Point::Rational(r) = x else {
        // Limits of every regulated gallery component vanish off the
        // rationals except for Thomae parts, whose value is the jump.
        return Ok(f.eval_point(x)?.abs());
    };
    let v = f.eval(r)?;
    let mut jump = ExactScalar::zero();
    if r.is_positive() {
        jump = jump.max((&v - f.left_limit(r)?.value).abs());
    }
    if r < &ExactScalar::one() {
        jump = jump.max((&v - f.right_limit(r)?.value).abs());
    }
    Ok(jump)
}

/// Outcome of a `B_f` membership probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    InBf,
    NotInBf,
    Inconclusive,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::InBf => "in-bf",
            Membership::NotInBf => "not-in-bf",
            Membership::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub x: ExactScalar,
    pub verdict: Membership,
    /// Last value of the trajectory.
    pub estimate: Num,
    /// `f(x)`.
    pub target: ExactScalar,
}

/// `InBf` when the last three values lie within `tol` of `f(x0)`; `NotInBf`
/// when they agree with each other within `tol` but the last one misses
/// `f(x0)` by more than `2 tol`.
pub fn b_set_probe(f: &GalleryFn, x0: &ExactScalar, schedule: &[u64], tol: &ExactScalar, mode: Mode) -> Result<Probe> {
    let target = f.eval(x0)?;
    let values = trajectory(f, x0, schedule, mode)?;
    let estimate = values.last().cloned().expect("nonempty schedule");
    let close = values.len() >= 3 && values[values.len() - 3..].iter().all(|v| v.abs_diff(&target).lt(tol));
    let two_tol = tol * ExactScalar::from_integer(2);
    let verdict = if close {
        Membership::InBf
    } else if stabilized(&values, tol) && estimate.abs_diff(&target).gt(&two_tol) {
        Membership::NotInBf
    } else {
        Membership::Inconclusive
    };
    Ok(Probe { x: x0.clone(), verdict, estimate, target })
}

/// Probes every grid point, in grid order.
pub fn b_set_sweep(f: &GalleryFn, grid: &[ExactScalar], schedule: &[u64], tol: &ExactScalar, mode: Mode) -> Result<Vec<Probe>> {
    grid.par_iter().map(|x| b_set_probe(f, x, schedule, tol, mode)).collect()
}

/// `E_{q,l}` together with whether the answer is only valid up to the
/// materialized truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelJumpSet {
    pub q: ExactScalar,
    pub l: u32,
    pub points: Vec<ExactScalar>,
    pub bounded_depth: bool,
}

/// `E_{q,l} = {x : f(x) <= q, and f > q + 2^-l somewhere in every
/// neighbourhood of x}`.
pub fn level_jump_set(f: &GalleryFn, q: &ExactScalar, l: u32) -> Result<LevelJumpSet> {
    let thr = q + ExactScalar::pow2(-i64::from(l));
    match f {
        GalleryFn::Piecewise(p) => {
            let points = p
                .breakpoints()
                .iter()
                .enumerate()
                .filter(|(i, b)| &p.point_data()[*i].value <= q && exceeds_nearby(p, *i, b, &thr))
                .map(|(_, b)| b.clone())
                .collect();
            Ok(LevelJumpSet { q: q.clone(), l, points, bounded_depth: false })
        }
        // Finitely many support points: a small punctured neighbourhood sees
        // only zeros, and f(x) <= q < 0 never holds.
        GalleryFn::Thomae(_) => Ok(LevelJumpSet { q: q.clone(), l, points: Vec::new(), bounded_depth: true }),
        _ => Err(Error::Unsupported("level jump sets are computed for piecewise and Thomae-type functions".into())),
    }
}

/// Whether values above `thr` occur arbitrarily close to breakpoint `i`
/// (excluding the breakpoint itself). Within a piece only the adjacent
/// polynomials matter.
fn exceeds_nearby(p: &PiecewiseFn, i: usize, b: &ExactScalar, thr: &ExactScalar) -> bool {
    let side = |poly: &Polynomial, right: bool| {
        let shifted = poly.sub(&Polynomial::constant(thr.clone()));
        let v = shifted.eval(b);
        v.is_positive() || (v.is_zero() && shifted.local_sign(b, right) > 0)
    };
    let pieces = p.pieces();
    (i > 0 && side(&pieces[i - 1], false)) || (i < pieces.len() && side(&pieces[i], true))
}
