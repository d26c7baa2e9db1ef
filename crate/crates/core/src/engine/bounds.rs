//! Quantitative bounds around the Bernstein operator: degree budgets,
//! uniform errors, window masses and the error decomposition at a point.

use rayon::prelude::*;
use serde::Serialize;

use super::report::{stabilized, trajectory};
use super::{bernstein_eval, target_or_value, Mode, Num, Target};
use crate::error::{Error, Result};
use crate::gallery::GalleryFn;
use crate::scalar::{pmf_row_float, ExactScalar, IntegerRow};

/// `2^(2 M0 + 2 N0 + k0 + 1)`; exponents of 63 or more exceed the signed
/// 64-bit index range.
pub fn sufficient_n(m0: u32, n0: u32, k0: u32) -> Result<u64> {
    let e = 2 * u64::from(m0) + 2 * u64::from(n0) + u64::from(k0) + 1;
    if e >= 63 {
        return Err(Error::Capacity(format!("2^{e} exceeds the 64-bit index range")));
    }
    Ok(1u64 << e)
}

/// `max_x |f(x) - B_n(f, x)|` over the grid; zero for an empty grid.
pub fn uniform_error(f: &GalleryFn, n: u64, grid: &[ExactScalar]) -> Result<ExactScalar> {
    let errs: Vec<ExactScalar> = grid
        .par_iter()
        .map(|x| Ok((f.eval(x)? - bernstein_eval(f, n, x)?).abs()))
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().max().unwrap_or_else(ExactScalar::zero))
}

/// Index set of `k/n` relative to the window of half-width `delta` at `x0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Window {
    /// `x0 <= k/n < x0 + delta`
    Right,
    /// `x0 - delta < k/n < x0`
    Left,
    /// `|k/n - x0| >= delta`
    Outside,
}

fn window_of(k: u64, n: u64, x0: &ExactScalar, delta: &ExactScalar) -> Window {
    let t = ExactScalar::new(k, n);
    let d = &t - x0;
    if d.abs() >= *delta {
        Window::Outside
    } else if d.is_negative() {
        Window::Left
    } else {
        Window::Right
    }
}

/// Requires `x0` in `(0, 1)` and `2^-N0 <= min(x0, 1 - x0)`; returns `2^-N0`.
fn check_window(x0: &ExactScalar, n0: u32) -> Result<ExactScalar> {
    let delta = ExactScalar::pow2(-i64::from(n0));
    let one = ExactScalar::one();
    if !(x0.is_positive() && x0 < &one) || &delta > x0 || delta > &one - x0 {
        return Err(Error::Domain(format!(
            "window of half-width 2^-{n0} around {x0} leaves [0,1]"
        )));
    }
    Ok(delta)
}

/// Partial sums of `(f(k/n) - target) p_{n,k}(x0)` over the right window
/// `A0`, the left window `A1` and the complement `A2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorDecomposition {
    pub n: u64,
    pub x0: ExactScalar,
    pub n0: u32,
    pub target: Target,
    pub sum_a0: ExactScalar,
    pub sum_a1: ExactScalar,
    pub sum_a2: ExactScalar,
    pub a0: Vec<u64>,
    pub a1: Vec<u64>,
    pub a2: Vec<u64>,
}

impl ErrorDecomposition {
    pub fn total(&self) -> ExactScalar {
        &self.sum_a0 + &self.sum_a1 + &self.sum_a2
    }
}

pub fn error_decomposition(f: &GalleryFn, x0: &ExactScalar, n0: u32, n: u64) -> Result<ErrorDecomposition> {
    if n == 0 {
        return Err(Error::Domain("Bernstein degree must be at least 1".into()));
    }
    if !(x0.is_positive() && x0 < &ExactScalar::one()) {
        return Err(Error::Domain(format!("decomposition needs x0 in (0,1), got {x0}")));
    }
    let target = target_or_value(f, x0)?;
    let delta = ExactScalar::pow2(-i64::from(n0));
    let row = IntegerRow::new(n, x0)?;
    let shifted: Vec<ExactScalar> = f.samples(n).into_iter().map(|v| v - &target.value).collect();
    let windows: Vec<Window> = (0..=n).map(|k| window_of(k, n, x0, &delta)).collect();
    let part = |w: Window| {
        let masked: Vec<ExactScalar> = shifted
            .iter()
            .zip(&windows)
            .map(|(v, &u)| if u == w { v.clone() } else { ExactScalar::zero() })
            .collect();
        let idx: Vec<u64> = (0..=n).filter(|&k| windows[k as usize] == w).collect();
        (row.dot(&masked), idx)
    };
    let (sum_a0, a0) = part(Window::Right);
    let (sum_a1, a1) = part(Window::Left);
    let (sum_a2, a2) = part(Window::Outside);
    Ok(ErrorDecomposition { n, x0: x0.clone(), n0, target, sum_a0, sum_a1, sum_a2, a0, a1, a2 })
}

/// `sum_{x0 <= k/n < x0 + 2^-N0} p_{n,k}(x0)`, exactly.
pub fn halfmass(n: u64, x0: &ExactScalar, n0: u32) -> Result<ExactScalar> {
    window_mass(n, x0, n0, Window::Right)
}

/// The right-window mass in double precision, for `n <= 2^20`.
pub fn halfmass_float(n: u64, x0: &ExactScalar, n0: u32) -> Result<f64> {
    let delta = check_window(x0, n0)?;
    let weights = pmf_row_float(n, x0.to_f64())?;
    Ok(weights
        .iter()
        .enumerate()
        .filter(|&(k, _)| window_of(k as u64, n, x0, &delta) == Window::Right)
        .map(|(_, w)| w)
        .sum())
}

fn window_mass(n: u64, x0: &ExactScalar, n0: u32, which: Window) -> Result<ExactScalar> {
    let delta = check_window(x0, n0)?;
    if n == 0 {
        return Err(Error::Domain("Bernstein degree must be at least 1".into()));
    }
    let row = IntegerRow::new(n, x0)?;
    let total: num_bigint::BigUint = row
        .weights
        .iter()
        .enumerate()
        .filter(|&(k, _)| window_of(k as u64, n, x0, &delta) == which)
        .map(|(_, w)| w)
        .sum();
    Ok(ExactScalar::new(num_bigint::BigInt::from(total), num_bigint::BigInt::from(row.denom)))
}

/// Mass outside the window together with its second-moment bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailMass {
    pub mass: ExactScalar,
    /// `2^(2 N0) x0 (1 - x0) / n`
    pub bound: ExactScalar,
}

/// `sum_{|k/n - x0| >= 2^-N0} p_{n,k}(x0)`; fails with a consistency error if
/// it ever exceeds its bound.
pub fn tail_mass(n: u64, x0: &ExactScalar, n0: u32) -> Result<TailMass> {
    let mass = window_mass(n, x0, n0, Window::Outside)?;
    let bound = ExactScalar::pow2(2 * i64::from(n0)) * x0 * (ExactScalar::one() - x0)
        / ExactScalar::from_integer(n);
    if mass > bound {
        return Err(Error::Consistency(format!(
            "tail mass {mass} exceeds its bound {bound} at n = {n}, x0 = {x0}, N0 = {n0}"
        )));
    }
    Ok(TailMass { mass, bound })
}

/// Comparison of `|f(x0) - estimate|` against `|f(x0+) - f(x0-)| / 2 + tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MidpointCheck {
    pub holds: bool,
    pub estimate: Num,
    pub deviation: Num,
    pub allowance: ExactScalar,
}

/// Uses the last schedule value as the limit estimate.
pub fn midpoint_bound_check(
    f: &GalleryFn,
    x0: &ExactScalar,
    schedule: &[u64],
    tol: &ExactScalar,
    mode: Mode,
) -> Result<MidpointCheck> {
    if !(x0.is_positive() && x0 < &ExactScalar::one()) {
        return Err(Error::Domain(format!("midpoint check needs x0 in (0,1), got {x0}")));
    }
    let l = f.left_limit(x0)?.value;
    let r = f.right_limit(x0)?.value;
    let values = trajectory(f, x0, schedule, mode)?;
    if !stabilized(&values, tol) {
        return Err(Error::Inconclusive(format!(
            "trajectory at {x0} has not stabilized within {tol}; last value {:.6e}",
            values.last().expect("nonempty schedule").to_f64()
        )));
    }
    let estimate = values.last().unwrap().clone();
    let deviation = estimate.abs_diff(&f.eval(x0)?);
    let allowance = ((r - l) / ExactScalar::from_integer(2)).abs() + tol;
    let holds = match &deviation {
        Num::Exact(d) => d <= &allowance,
        Num::Float(d) => *d <= allowance.to_f64(),
    };
    Ok(MidpointCheck { holds, estimate, deviation, allowance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{PiecewiseFn, Polynomial, Preset};
    use crate::scalar::q;

    #[test]
    fn sufficient_n_examples() {
        assert_eq!(sufficient_n(0, 0, 0).unwrap(), 2);
        assert_eq!(sufficient_n(1, 2, 3).unwrap(), 1024);
        assert!(matches!(sufficient_n(0, 0, 62), Err(Error::Capacity(_))));
        assert_eq!(sufficient_n(0, 0, 61).unwrap(), 1 << 62);
    }

    #[test]
    fn uniform_error_examples() {
        let id = GalleryFn::Piecewise(PiecewiseFn::polynomial(Polynomial::identity()));
        let grid: Vec<_> = (0..=10).map(|i| q(i, 10)).collect();
        assert_eq!(uniform_error(&id, 7, &grid).unwrap(), q(0, 1));
        let sq = Preset::Square.build();
        let grid: Vec<_> = (0..=100).map(|i| q(i, 100)).collect();
        assert_eq!(uniform_error(&sq, 100, &grid).unwrap(), q(1, 400));
        let h = Preset::Heaviside.build();
        let e = uniform_error(&h, 1024, &[q(1, 2)]).unwrap();
        assert!(e > q(2, 5));
    }

    #[test]
    fn decomposition_examples() {
        let c = GalleryFn::Piecewise(PiecewiseFn::constant(q(2, 3)));
        let d = error_decomposition(&c, &q(1, 3), 2, 9).unwrap();
        assert!(d.sum_a0.is_zero() && d.sum_a1.is_zero() && d.sum_a2.is_zero());

        let h = Preset::Heaviside.build();
        let d = error_decomposition(&h, &q(1, 2), 2, 8).unwrap();
        assert_eq!(d.total(), bernstein_eval(&h, 8, &q(1, 2)).unwrap() - q(1, 2));
        assert_eq!(d.a0, vec![4, 5]);
        assert_eq!(d.a1, vec![3]);
        assert_eq!(d.a2, vec![0, 1, 2, 6, 7, 8]);

        let d = error_decomposition(&Preset::Square.build(), &q(1, 2), 1, 4).unwrap();
        assert_eq!(d.total(), q(1, 16));
    }

    #[test]
    fn halfmass_examples() {
        assert_eq!(halfmass(2, &q(1, 2), 1).unwrap(), q(1, 2));
        let v = halfmass_float(10_000, &q(3, 10), 5).unwrap();
        assert!((v - 0.5).abs() < 0.02, "{v}");
        for n in [5u64, 11, 31] {
            let hm = halfmass(n, &q(1, 2), 2).unwrap();
            let tail = tail_mass(n, &q(1, 2), 2).unwrap().mass;
            assert_eq!((hm - q(1, 2)).abs(), tail / ExactScalar::from_integer(2));
        }
        assert!(matches!(halfmass(10, &q(1, 8), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_examples() {
        assert_eq!(tail_mass(16, &q(1, 2), 1).unwrap().mass, q(2, 65536));
        for k0 in 0..4u32 {
            let n0 = 2;
            let n = 1u64 << (2 * n0 + k0 + 1);
            let t = tail_mass(n, &q(1, 2), n0).unwrap();
            assert!(t.mass <= ExactScalar::pow2(-(i64::from(k0) + 3)));
        }
        assert!(matches!(tail_mass(16, &q(1, 16), 2), Err(Error::Domain(_))));
    }

    #[test]
    fn midpoint_examples() {
        let schedule: Vec<u64> = (8..=12).map(|e| 1 << e).collect();
        let tol = q(1, 50);
        let h = Preset::Heaviside.build();
        assert!(midpoint_bound_check(&h, &q(1, 2), &schedule, &tol, Mode::Exact).unwrap().holds);
        let sq = Preset::Square.build();
        let c = midpoint_bound_check(&sq, &q(1, 3), &schedule, &tol, Mode::Exact).unwrap();
        assert!(c.holds);
        assert_eq!(c.allowance, tol);
        // Limits 0 and 0 with value 5; dyadic degrees never sample 1/3.
        let spike = GalleryFn::scaled(q(5, 1), GalleryFn::Piecewise(PiecewiseFn::indicator(&[q(1, 3)]).unwrap()));
        let c = midpoint_bound_check(&spike, &q(1, 3), &schedule, &tol, Mode::Exact).unwrap();
        assert_eq!(c.estimate, Num::Exact(q(0, 1)));
        assert!(!c.holds);
        let early: Vec<u64> = vec![2, 4, 8];
        assert!(matches!(
            midpoint_bound_check(&h, &q(1, 2), &early, &tol, Mode::Exact),
            Err(Error::Inconclusive(_))
        ));
    }
}
