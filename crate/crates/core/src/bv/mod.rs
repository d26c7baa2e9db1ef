//! Variation, Jordan decomposition, Helly selection and Riemann sums.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::{GalleryFn, PiecewiseFn, Polynomial};
use crate::scalar::{ExactScalar, Point};

/// Whether a cumulative variation is the supremum itself or a partition sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    LowerBound,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariationEntry {
    pub node: ExactScalar,
    pub cumulative: ExactScalar,
    pub flag: Exactness,
}

/// `V_0^node(f)` along an increasing grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariationProfile {
    pub entries: Vec<VariationEntry>,
}

impl VariationProfile {
    /// `Exact` only if every entry is.
    pub fn flag(&self) -> Exactness {
        if self.entries.iter().all(|e| e.flag == Exactness::Exact) {
            Exactness::Exact
        } else {
            Exactness::LowerBound
        }
    }
}

/// Cumulative variation at every node. An entry is exact when `f` is
/// piecewise with rational turning points and the nodes up to it include
/// every breakpoint up to it; otherwise it extends the previous entry by
/// the partition increment.
pub fn variation_profile(f: &GalleryFn, nodes: &[ExactScalar]) -> Result<VariationProfile> {
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("variation grid must be strictly increasing".into()));
    }
    if let Some(bad) = nodes.iter().find(|x| !x.in_unit_interval()) {
        return Err(Error::Domain(format!("variation grid point {bad} outside [0,1]")));
    }
    let values: Vec<ExactScalar> = nodes.iter().map(|x| f.eval_unchecked(x)).collect();
    let mut entries: Vec<VariationEntry> = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        let partial = match entries.last() {
            None => ExactScalar::zero(),
            Some(prev) => &prev.cumulative + (&values[i] - &values[i - 1]).abs(),
        };
        let exact = f.as_piecewise().and_then(|p| {
            let covered = p.breakpoints().iter().take_while(|b| *b <= node).all(|b| nodes[..=i].binary_search(b).is_ok());
            let (v, e) = p.variation_to(node);
            (covered && e).then_some(v)
        });
        entries.push(match exact {
            Some(v) => VariationEntry { node: node.clone(), cumulative: v, flag: Exactness::Exact },
            None => VariationEntry { node: node.clone(), cumulative: partial, flag: Exactness::LowerBound },
        });
    }
    Ok(VariationProfile { entries })
}

/// `V_0^y(f)` from a grid in `[0, y]`; `y` is appended when missing.
pub fn variation(f: &GalleryFn, y: &ExactScalar, grid: &[ExactScalar]) -> Result<VariationEntry> {
    if !(y.is_positive() && y <= &ExactScalar::one()) {
        return Err(Error::Domain(format!("variation needs y in (0,1], got {y}")));
    }
    if grid.last().is_some_and(|g| g > y) {
        return Err(Error::Domain(format!("grid extends beyond y = {y}")));
    }
    let mut nodes = grid.to_vec();
    if nodes.last() != Some(y) {
        nodes.push(y.clone());
    }
    let profile = variation_profile(f, &nodes)?;
    Ok(profile.entries.last().cloned().expect("y is a node"))
}

/// `g(x) = V_0^x(f)` and `h = g - f`, both nondecreasing, with `g(0) = 0`.
pub fn jordan_decompose(f: &GalleryFn) -> Result<(GalleryFn, GalleryFn)> {
    let p = f.as_piecewise().ok_or_else(|| {
        Error::NeedsBreakpoints("exact variation is only available for piecewise functions".into())
    })?;
    let m = p.split_monotone()?;
    let g = variation_function(&m)?;
    let h = g.sub(p);
    Ok((GalleryFn::Piecewise(g), GalleryFn::Piecewise(h)))
}

fn variation_function(m: &PiecewiseFn) -> Result<PiecewiseFn> {
    let bps = m.breakpoints();
    let data = m.point_data();
    let mut values = Vec::with_capacity(bps.len());
    let mut pieces = Vec::with_capacity(m.pieces().len());
    for (i, b) in bps.iter().enumerate() {
        let (v, _) = m.variation_to(b);
        if let Some(poly) = m.pieces().get(i) {
            let start = &v + (data[i].right_limit.as_ref().unwrap() - &data[i].value).abs();
            let s = m.piece_direction(i).ok_or_else(|| {
                Error::NeedsBreakpoints(format!("piece starting at {b} is not monotone"))
            })?;
            let sign = ExactScalar::from_integer(s);
            let piece = poly.scale(&sign).add(&Polynomial::constant(start - &sign * poly.eval(b)));
            pieces.push(piece);
        }
        values.push(v);
    }
    PiecewiseFn::new(bps.to_vec(), pieces, values)
}

/// Outcome of a Helly selection on a finite sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellySelection {
    pub indices: Vec<usize>,
}

/// Successively narrows the surviving indices at each grid point by value
/// bisection, keeping the more populated half (the lower one on ties), until
/// the survivors' values there span less than `tol`.
pub fn helly_select(fs: &[GalleryFn], grid: &[ExactScalar], tol: &ExactScalar) -> Result<HellySelection> {
    if !tol.is_positive() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut survivors: Vec<usize> = (0..fs.len()).collect();
    for x in grid {
        x.require_unit("grid point")?;
        let vals: Vec<(usize, ExactScalar)> = survivors.iter().map(|&i| (i, fs[i].eval_unchecked(x))).collect();
        let Some(mut lo) = vals.iter().map(|(_, v)| v.clone()).min() else { break };
        let mut hi = vals.iter().map(|(_, v)| v.clone()).max().unwrap();
        let mut keep = vals;
        while &hi - &lo >= *tol {
            let mid = lo.midpoint(&hi);
            let (lower, upper): (Vec<_>, Vec<_>) = keep.into_iter().partition(|(_, v)| v <= &mid);
            keep = if lower.len() >= upper.len() { lower } else { upper };
            lo = keep.iter().map(|(_, v)| v.clone()).min().unwrap();
            hi = keep.iter().map(|(_, v)| v.clone()).max().unwrap();
        }
        survivors = keep.into_iter().map(|(i, _)| i).collect();
    }
    if survivors.len() < 3 {
        return Err(Error::Inconclusive(format!(
            "only {} indices survive at tolerance {tol}: {survivors:?}",
            survivors.len()
        )));
    }
    Ok(HellySelection { indices: survivors })
}

/// `g0(n) = floor(V_0^1(f_n))`, so that `g0(n) <= V <= g0(n) + 1`.
pub fn helly_witness(fs: &[GalleryFn]) -> Result<Vec<u64>> {
    fs.iter()
        .enumerate()
        .map(|(n, f)| {
            let p = f.as_piecewise().ok_or_else(|| {
                Error::NeedsBreakpoints(format!("variation of sequence term {n} is not exactly computable"))
            })?;
            let (v, exact) = p.total_variation();
            if !exact {
                return Err(Error::NeedsBreakpoints(format!("term {n} turns at an irrational point")));
            }
            let floor = v.floor();
            let g = floor.to_u64().ok_or_else(|| Error::Capacity(format!("variation {v} of term {n} exceeds u64")))?;
            let g_s = ExactScalar::from_integer(floor);
            if !(g_s <= v && v <= g_s + ExactScalar::one()) {
                return Err(Error::Consistency(format!("floor sandwich failed for term {n}")));
            }
            Ok(g)
        })
        .collect()
}

/// Tag choice inside each partition cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagRule {
    LeftEndpoint,
    Midpoint,
    /// The candidate maximizing `|f|` among cell endpoints, midpoint,
    /// breakpoints, support points and turning points in the cell.
    AdversarialMaxOsc,
}

/// `sum_i f(t_i) (x_{i+1} - x_i)` over `x_i = min(i * mesh, 1)`.
pub fn riemann_sum(f: &GalleryFn, mesh: &ExactScalar, rule: TagRule) -> Result<ExactScalar> {
    if !mesh.is_positive() {
        return Err(Error::Domain(format!("mesh must be positive, got {mesh}")));
    }
    let one = ExactScalar::one();
    let cells = (&one / mesh).ceil().to_u64().ok_or_else(|| Error::Capacity(format!("mesh {mesh} is too fine")))?;
    let mut candidates: Vec<Point> = f.discontinuity_candidates();
    if !matches!(f, GalleryFn::Thomae(_)) {
        candidates.retain(Point::is_rational);
    }
    let mut total = ExactScalar::zero();
    for i in 0..cells {
        let a = (mesh * ExactScalar::from_integer(i)).min(one.clone());
        let b = (mesh * ExactScalar::from_integer(i + 1)).min(one.clone());
        let value = match rule {
            TagRule::LeftEndpoint => f.eval_unchecked(&a),
            TagRule::Midpoint => f.eval_unchecked(&a.midpoint(&b)),
            TagRule::AdversarialMaxOsc => adversarial_value(f, &a, &b, &candidates)?,
        };
        total += value * (&b - &a);
    }
    Ok(total)
}

fn adversarial_value(f: &GalleryFn, a: &ExactScalar, b: &ExactScalar, candidates: &[Point]) -> Result<ExactScalar> {
    let mut tags: Vec<Point> = vec![Point::Rational(a.clone()), Point::Rational(a.midpoint(b)), Point::Rational(b.clone())];
    tags.extend(candidates.iter().filter(|p| p.in_closed(a, b)).cloned());
    if let Some(p) = f.as_piecewise() {
        for (i, poly) in p.pieces().iter().enumerate() {
            let lo = a.max(&p.breakpoints()[i]);
            let hi = b.min(&p.breakpoints()[i + 1]);
            if lo < hi {
                tags.extend(poly.critical_points(lo, hi).iter().map(|c| Point::Rational(c.representative())));
            }
        }
    }
    let mut best: Option<ExactScalar> = None;
    for t in &tags {
        let v = f.eval_point(t)?;
        if best.as_ref().is_none_or(|bv| v.abs() > bv.abs()) {
            best = Some(v);
        }
    }
    Ok(best.expect("at least the endpoints"))
}
