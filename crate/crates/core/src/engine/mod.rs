//! Bernstein operator evaluation and convergence diagnostics.

mod bounds;
mod report;

pub use bounds::{
    error_decomposition, halfmass, halfmass_float, midpoint_bound_check, sufficient_n, tail_mass,
    uniform_error, ErrorDecomposition, MidpointCheck, TailMass,
};
pub use report::{
    converge_report, default_schedule, stabilized, trajectory, ConvergenceReport, Verdict, DEFAULT_TOL,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gallery::{GalleryFn, Polynomial};
use crate::scalar::{pmf_row_float, ExactScalar, IntegerRow, EXACT_ROW_LIMIT, FLOAT_ROW_LIMIT};

/// Arithmetic used for Bernstein sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Parse(format!("unknown mode {s:?}; expected exact or float"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// A computed quantity: exact rational, or a double from float mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(ExactScalar),
    Float(f64),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(x) => x.to_f64(),
            Num::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            Num::Exact(x) => Some(x),
            Num::Float(_) => None,
        }
    }

    /// `|self - other|`, in the arithmetic of `self`.
    pub fn abs_diff(&self, other: &ExactScalar) -> Num {
        match self {
            Num::Exact(x) => Num::Exact((x - other).abs()),
            Num::Float(x) => Num::Float((x - other.to_f64()).abs()),
        }
    }

    pub fn abs_diff_num(&self, other: &Num) -> Num {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact((a - b).abs()),
            _ => Num::Float((self.to_f64() - other.to_f64()).abs()),
        }
    }

    /// `self < tol`, exactly when `self` is exact.
    pub fn lt(&self, tol: &ExactScalar) -> bool {
        match self {
            Num::Exact(x) => x < tol,
            Num::Float(x) => *x < tol.to_f64(),
        }
    }

    /// `self > bound`, exactly when `self` is exact.
    pub fn gt(&self, bound: &ExactScalar) -> bool {
        match self {
            Num::Exact(x) => x > bound,
            Num::Float(x) => *x > bound.to_f64(),
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(x) => x.fmt(f),
            Num::Float(x) => x.fmt(f),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Num::Exact(x) => x.serialize(serializer),
            Num::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("Bernstein degree must be at least 1".into()));
    }
    Ok(())
}

/// `B_n(f, x)` exactly. Sums the row for `n <= 5000`; beyond that only
/// polynomial functions are supported, through their closed form.
pub fn bernstein_eval(f: &GalleryFn, n: u64, x: &ExactScalar) -> Result<ExactScalar> {
    check_n(n)?;
    x.require_unit("x")?;
    if n <= EXACT_ROW_LIMIT {
        return bernstein_eval_summed(f, n, x);
    }
    match f.as_polynomial() {
        Some(p) => Ok(bernstein_polynomial(p, n, x)),
        None => Err(Error::Capacity(format!(
            "exact Bernstein sum for n = {n} exceeds the limit {EXACT_ROW_LIMIT}; use float mode"
        ))),
    }
}

/// `sum_k f(k/n) p_{n,k}(x)` summed term by term.
pub fn bernstein_eval_summed(f: &GalleryFn, n: u64, x: &ExactScalar) -> Result<ExactScalar> {
    check_n(n)?;
    let row = IntegerRow::new(n, x)?;
    Ok(row.dot(&f.samples(n)))
}

/// `B_n(p, x)` for a polynomial via
/// `B_n(t^m) = sum_j S(m, j) n(n-1)...(n-j+1) / n^m x^j`, valid for any `n >= 1`.
pub fn bernstein_polynomial(p: &Polynomial, n: u64, x: &ExactScalar) -> ExactScalar {
    let deg = match p.degree() {
        None => return ExactScalar::zero(),
        Some(d) => d,
    };
    let stirling = stirling2_table(deg);
    let nn = BigInt::from(n);
    // falling[j] = n (n-1) ... (n-j+1)
    let mut falling = vec![BigInt::one()];
    for j in 0..deg {
        let next = &falling[j] * (&nn - BigInt::from(j));
        falling.push(next);
    }
    let mut image = vec![ExactScalar::zero(); deg + 1];
    for (m, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let n_pow_m = num_traits::pow(nn.clone(), m);
        for j in 0..=m {
            let s = &stirling[m][j];
            if s.is_zero() {
                continue;
            }
            image[j] += c * ExactScalar::new(s * &falling[j], n_pow_m.clone());
        }
    }
    Polynomial::new(image).eval(x)
}

/// Stirling numbers of the second kind `S(m, j)` for `m, j <= deg`.
fn stirling2_table(deg: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); deg + 1]; deg + 1];
    s[0][0] = BigInt::one();
    for m in 1..=deg {
        for j in 1..=m {
            s[m][j] = BigInt::from(j) * &s[m - 1][j] + &s[m - 1][j - 1];
        }
    }
    s
}

/// `B_n(f, x)` in double precision for `n <= 2^20`.
pub fn bernstein_eval_float(f: &GalleryFn, n: u64, x: &ExactScalar) -> Result<f64> {
    check_n(n)?;
    x.require_unit("x")?;
    if n > FLOAT_ROW_LIMIT {
        return Err(Error::Capacity(format!("float row for n = {n} exceeds the limit {FLOAT_ROW_LIMIT}")));
    }
    let weights = pmf_row_float(n, x.to_f64())?;
    let samples = f.samples(n);
    Ok(weights
        .par_iter()
        .zip(samples.par_iter())
        .filter(|(_, v)| !v.is_zero())
        .map(|(w, v)| w * v.to_f64())
        .sum())
}

/// `B_n(f, x)` in the requested arithmetic.
pub fn bernstein_eval_mode(f: &GalleryFn, n: u64, x: &ExactScalar, mode: Mode) -> Result<Num> {
    match mode {
        Mode::Exact => bernstein_eval(f, n, x).map(Num::Exact),
        Mode::Float => bernstein_eval_float(f, n, x).map(Num::Float),
    }
}

/// Which limit the Bernstein values are expected to approach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    FunctionValue,
    JumpMidpoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Target {
    pub value: ExactScalar,
    pub kind: TargetKind,
}

/// `f(x)` where `f(x-) = f(x) = f(x+)`, otherwise `(f(x-) + f(x+)) / 2`.
/// At the endpoints the target is always `f(x)`.
pub fn target_value(f: &GalleryFn, x: &ExactScalar) -> Result<Target> {
    x.require_unit("x")?;
    let value = f.eval_unchecked(x);
    if x.is_zero() || x == &ExactScalar::one() {
        return Ok(Target { value, kind: TargetKind::FunctionValue });
    }
    let l = f.left_limit(x)?.value;
    let r = f.right_limit(x)?.value;
    if l == r && r == value {
        Ok(Target { value, kind: TargetKind::FunctionValue })
    } else {
        Ok(Target { value: (l + r) / ExactScalar::from_integer(2), kind: TargetKind::JumpMidpoint })
    }
}

/// [`target_value`], or `f(x)` when the one-sided limits do not exist.
pub fn target_or_value(f: &GalleryFn, x: &ExactScalar) -> Result<Target> {
    match target_value(f, x) {
        Err(Error::NotRegulated(_)) => Ok(Target { value: f.eval_unchecked(x), kind: TargetKind::FunctionValue }),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_heaviside, make_step, PiecewiseFn, Preset};
    use crate::scalar::q;

    fn poly_fn(cs: &[(i64, i64)]) -> GalleryFn {
        GalleryFn::Piecewise(PiecewiseFn::polynomial(Polynomial::new(cs.iter().map(|&(a, b)| q(a, b)).collect())))
    }

    #[test]
    fn eval_examples() {
        let c = poly_fn(&[(3, 7)]);
        assert_eq!(bernstein_eval(&c, 9, &q(2, 5)).unwrap(), q(3, 7));
        let id = poly_fn(&[(0, 1), (1, 1)]);
        assert_eq!(bernstein_eval(&id, 3, &q(1, 3)).unwrap(), q(1, 3));
        let h = Preset::Heaviside.build();
        assert_eq!(bernstein_eval(&h, 4, &q(1, 2)).unwrap(), q(11, 16));
        assert!(matches!(bernstein_eval(&h, 0, &q(1, 2)), Err(Error::Domain(_))));
        assert!(matches!(bernstein_eval(&h, 6000, &q(1, 2)), Err(Error::Capacity(_))));
    }

    #[test]
    fn closed_form_matches_summation() {
        let p = poly_fn(&[(1, 3), (-2, 1), (5, 4), (0, 1), (7, 2)]);
        for n in [1u64, 2, 5, 17, 64] {
            for x in [q(0, 1), q(1, 3), q(5, 7), q(1, 1)] {
                let summed = bernstein_eval_summed(&p, n, &x).unwrap();
                assert_eq!(bernstein_polynomial(p.as_polynomial().unwrap(), n, &x), summed);
            }
        }
        // Large n goes through the closed form.
        let sq = Preset::Square.build();
        let n = 1u64 << 25;
        let x = q(1, 2);
        assert_eq!(bernstein_eval(&sq, n, &x).unwrap() - q(1, 4), q(1, 4) / ExactScalar::from_integer(n as i64));
    }

    #[test]
    fn float_matches_exact() {
        let h = Preset::Heaviside.build();
        let exact = bernstein_eval(&h, 200, &q(3, 7)).unwrap().to_f64();
        let float = bernstein_eval_float(&h, 200, &q(3, 7)).unwrap();
        assert!((exact - float).abs() <= 1e-9 * exact.abs());
    }

    #[test]
    fn targets() {
        let h = Preset::Heaviside.build();
        let t = target_value(&h, &q(1, 2)).unwrap();
        assert_eq!((t.value, t.kind), (q(1, 2), TargetKind::JumpMidpoint));
        let sq = Preset::Square.build();
        let t = target_value(&sq, &q(1, 3)).unwrap();
        assert_eq!((t.value, t.kind), (q(1, 9), TargetKind::FunctionValue));
        let s = GalleryFn::Piecewise(make_step(q(1, 1), &[(q(1, 4), q(-2, 1))]).unwrap());
        let t = target_value(&s, &q(1, 4)).unwrap();
        assert_eq!((t.value, t.kind), (q(0, 1), TargetKind::JumpMidpoint));
        let spike = GalleryFn::Piecewise(make_heaviside(q(1, 2), q(5, 1)).unwrap());
        assert_eq!(target_value(&spike, &q(0, 1)).unwrap().kind, TargetKind::FunctionValue);
        assert!(matches!(target_value(&Preset::Dirichlet.build(), &q(1, 3)), Err(Error::NotRegulated(_))));
        let t = target_value(&Preset::ThomaeDefault.build(), &q(1, 3)).unwrap();
        assert_eq!((t.value, t.kind), (q(0, 1), TargetKind::JumpMidpoint));
    }

    #[test]
    fn num_display() {
        assert_eq!(Num::Exact(q(1, 3)).to_string(), "1/3");
        assert_eq!(Num::Float(0.1).to_string(), "0.1");
        assert_eq!(serde_json::to_string(&Num::Float(0.25)).unwrap(), "0.25");
    }
}
