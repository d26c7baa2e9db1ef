//! Binomial coefficients and Bernstein basis weights `p_{n,k}(x) = C(n,k) x^k (1-x)^(n-k)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::ExactScalar;
use crate::error::{Error, Result};

/// Largest `n` for which exact rows are built. Denominators grow like
/// `den(x)^n`, so larger degrees must go through the float path.
pub const EXACT_ROW_LIMIT: u64 = 5000;

/// Largest `n` accepted by [`pmf_row_float`].
pub const FLOAT_ROW_LIMIT: u64 = 1 << 20;

/// `C(n, k)` exactly.
pub fn binom(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("binom: k = {k} exceeds n = {n}")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact.
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Weights of one row scaled to integers: `p_{n,k}(x) = weights[k] / denom`
/// with `denom = q^n` for `x = p/q` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRow {
    pub n: u64,
    pub x: ExactScalar,
    pub weights: Vec<BigUint>,
    pub denom: BigUint,
}

impl IntegerRow {
    /// Builds the row with the multiplicative recurrence
    /// `W_{k+1} = W_k (n-k) p / ((k+1)(q-p))`, starting from `W_0 = (q-p)^n`.
    pub fn new(n: u64, x: &ExactScalar) -> Result<Self> {
        x.require_unit("x")?;
        if n > EXACT_ROW_LIMIT {
            return Err(Error::Capacity(format!(
                "exact row for n = {n} exceeds the limit {EXACT_ROW_LIMIT}; use float mode"
            )));
        }
        let p = x.numer().magnitude().clone();
        let q = x.denom().magnitude().clone();
        let denom = num_traits::pow(q.clone(), n as usize);
        let len = n as usize + 1;

        let weights = if p.is_zero() {
            let mut w = vec![BigUint::zero(); len];
            w[0] = denom.clone();
            w
        } else if p == q {
            let mut w = vec![BigUint::zero(); len];
            w[len - 1] = denom.clone();
            w
        } else {
            let r = &q - &p;
            let mut w = Vec::with_capacity(len);
            let mut cur = num_traits::pow(r.clone(), n as usize);
            for k in 0..n {
                let next = (&cur * (n - k) * &p) / (&r * (k + 1));
                w.push(std::mem::replace(&mut cur, next));
            }
            w.push(cur);
            w
        };
        Ok(IntegerRow { n, x: x.clone(), weights, denom })
    }

    pub fn weight(&self, k: usize) -> ExactScalar {
        ExactScalar::new(
            BigInt::from(self.weights[k].clone()),
            BigInt::from(self.denom.clone()),
        )
    }

    /// `sum_k W_k`, which equals `denom` exactly when the row sums to one.
    pub fn integer_sum(&self) -> BigUint {
        self.weights.iter().sum()
    }

    /// `sum_k (x - k/n)^2 p_{n,k}(x)`, summed term by term.
    pub fn second_moment(&self) -> Result<ExactScalar> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Domain("second moment needs n >= 1".into()));
        }
        // (x - k/n)^2 = (p n - k q)^2 / (q n)^2
        let p = self.x.numer();
        let q = self.x.denom();
        let nb = BigInt::from(n);
        let pn = p * &nb;
        let mut acc = BigInt::zero();
        for (k, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let d = &pn - BigInt::from(k) * q;
            acc += &d * &d * BigInt::from(w.clone());
        }
        let qn = q * &nb;
        Ok(ExactScalar::new(acc, BigInt::from(self.denom.clone()) * &qn * &qn))
    }

    /// `sum_k values[k] * p_{n,k}(x)`, accumulated over a common denominator.
    pub fn dot(&self, values: &[ExactScalar]) -> ExactScalar {
        assert_eq!(values.len(), self.weights.len(), "one value per weight");
        let lcm = values
            .iter()
            .filter(|v| !v.is_zero())
            .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
        let mut acc = BigInt::zero();
        for (w, v) in self.weights.iter().zip(values) {
            if v.is_zero() || w.is_zero() {
                continue;
            }
            let scaled = v.numer() * (&lcm / v.denom());
            acc += scaled * BigInt::from(w.clone());
        }
        ExactScalar::new(acc, lcm * BigInt::from(self.denom.clone()))
    }
}

/// One exact row of Bernstein basis weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmfRow {
    pub n: u64,
    pub x: ExactScalar,
    pub weights: Vec<ExactScalar>,
}

impl PmfRow {
    pub fn sum(&self) -> ExactScalar {
        self.weights.iter().sum()
    }
}

/// All `n+1` weights `p_{n,0}(x) .. p_{n,n}(x)` as exact rationals.
pub fn pmf_row(n: u64, x: &ExactScalar) -> Result<PmfRow> {
    let row = IntegerRow::new(n, x)?;
    let weights = (0..row.weights.len()).map(|k| row.weight(k)).collect();
    Ok(PmfRow { n, x: x.clone(), weights })
}

/// `sum_k (x - k/n)^2 p_{n,k}(x)`, summed term by term.
pub fn second_moment(n: u64, x: &ExactScalar) -> Result<ExactScalar> {
    IntegerRow::new(n, x)?.second_moment()
}

/// Float weights for `1 <= n <= 2^20`, computed in log space with
/// Stirling-error and deviance terms, then exponentiated.
pub fn pmf_row_float(n: u64, x: f64) -> Result<Vec<f64>> {
    if !(1..=FLOAT_ROW_LIMIT).contains(&n) {
        return Err(Error::Domain(format!("float row needs 1 <= n <= {FLOAT_ROW_LIMIT}, got {n}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} is outside [0,1]")));
    }
    let len = n as usize + 1;
    if x == 0.0 || x == 1.0 {
        let mut w = vec![0.0; len];
        w[if x == 0.0 { 0 } else { len - 1 }] = 1.0;
        return Ok(w);
    }
    Ok((0..=n).map(|k| ln_pmf(n, k, x).exp()).collect())
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn ln_pmf(n: u64, k: u64, x: f64) -> f64 {
    let nf = n as f64;
    if k == 0 {
        return nf * (-x).ln_1p();
    }
    if k == n {
        return nf * x.ln();
    }
    let kf = k as f64;
    let mf = (n - k) as f64;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, nf * x) - bd0(mf, nf * (1.0 - x));
    let lf = LN_2PI + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

// ln(n!) - ((n + 1/2) ln n - n + ln sqrt(2 pi)) for n = 0..=15.
const STIRLERR_SMALL: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_26,
    0.041_340_695_955_409_3,
    0.027_677_925_684_998_34,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_193,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_77,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_87,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_53,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_847_5,
    0.005_554_733_551_962_801,
];

fn stirlerr(n: u64) -> f64 {
    if n <= 15 {
        return STIRLERR_SMALL[n as usize];
    }
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    const S5: f64 = 691.0 / 360_360.0;
    const S6: f64 = 1.0 / 156.0;
    let nf = n as f64;
    let nn = nf * nf;
    (S0 - (S1 - (S2 - (S3 - (S4 - (S5 - S6 / nn) / nn) / nn) / nn) / nn) / nn) / nf
}

/// Deviance term `x ln(x/np) + np - x`, with a series when `x` is near `np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let d = x - np;
        let mut v = d / (x + np);
        let mut s = d * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let prev = s;
            s += ej / (2 * j + 1) as f64;
            if s == prev {
                return s;
            }
        }
        return s;
    }
    x * (x / np).ln() + np - x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    /// Pascal's triangle, independent of the multiplicative formula.
    fn pascal(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigUint::one(); i + 1];
            for k in 1..i {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binom_small_cases() {
        assert_eq!(binom(4, 2).unwrap(), BigUint::from(6u32));
        for n in 0..20 {
            assert_eq!(binom(n, 0).unwrap(), BigUint::one());
        }
        assert!(matches!(binom(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn binom_matches_pascal_oracle() {
        let tri = pascal(60);
        assert_eq!(tri[50][25], BigUint::from(126_410_606_437_752u64));
        assert_eq!(binom(50, 25).unwrap(), BigUint::from(126_410_606_437_752u64));
        for n in 0..=60u64 {
            for k in 0..=n {
                assert_eq!(binom(n, k).unwrap(), tri[n as usize][k as usize]);
            }
        }
    }

    #[test]
    fn pmf_row_examples() {
        assert_eq!(pmf_row(2, &q(1, 2)).unwrap().weights, vec![q(1, 4), q(1, 2), q(1, 4)]);
        assert_eq!(
            pmf_row(3, &q(0, 1)).unwrap().weights,
            vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]
        );
        assert_eq!(
            pmf_row(3, &q(1, 1)).unwrap().weights,
            vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]
        );
    }

    #[test]
    fn pmf_row_matches_direct_formula() {
        // direct C(n,k) x^k (1-x)^(n-k), term by term
        let direct = |n: u64, x: &ExactScalar| -> Vec<ExactScalar> {
            let one_minus = ExactScalar::one() - x;
            (0..=n)
                .map(|k| {
                    ExactScalar::from_integer(BigInt::from(binom(n, k).unwrap()))
                        * x.pow(k as u32)
                        * one_minus.pow((n - k) as u32)
                })
                .collect()
        };
        let row = pmf_row(4, &q(1, 3)).unwrap();
        assert_eq!(
            row.weights,
            vec![q(16, 81), q(32, 81), q(24, 81), q(8, 81), q(1, 81)]
        );
        assert_eq!(row.weights, direct(4, &q(1, 3)));
        for (n, x) in [(7, q(2, 5)), (12, q(5, 7)), (1, q(1, 9)), (0, q(1, 2))] {
            assert_eq!(pmf_row(n, &x).unwrap().weights, direct(n, &x));
        }
    }

    #[test]
    fn pmf_row_domain_and_capacity() {
        assert!(matches!(pmf_row(3, &q(3, 2)), Err(Error::Domain(_))));
        assert!(matches!(pmf_row(3, &q(-1, 2)), Err(Error::Domain(_))));
        assert!(matches!(pmf_row(5001, &q(1, 2)), Err(Error::Capacity(_))));
        assert!(pmf_row(5000, &q(1, 2)).is_ok());
    }

    #[test]
    fn second_moment_examples() {
        assert_eq!(second_moment(2, &q(1, 2)).unwrap(), q(1, 8));
        for n in 1..10 {
            assert_eq!(second_moment(n, &q(0, 1)).unwrap(), ExactScalar::zero());
        }
        // term-by-term oracle over the exact row
        let x = q(1, 3);
        let row = pmf_row(10, &x).unwrap();
        let oracle: ExactScalar = row
            .weights
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let d = &x - q(k as i64, 10);
                &d * &d * w
            })
            .sum();
        assert_eq!(oracle, q(1, 45));
        assert_eq!(second_moment(10, &x).unwrap(), q(1, 45));
        assert!(matches!(second_moment(0, &x), Err(Error::Domain(_))));
    }

    #[test]
    fn dot_uses_common_denominator() {
        let row = IntegerRow::new(3, &q(1, 3)).unwrap();
        let values = vec![q(1, 2), q(-1, 3), q(0, 1), q(5, 7)];
        let expected: ExactScalar =
            values.iter().enumerate().map(|(k, v)| v * row.weight(k)).sum();
        assert_eq!(row.dot(&values), expected);
    }

    #[test]
    fn float_row_small_and_normalized() {
        let w = pmf_row_float(2, 0.5).unwrap();
        for (a, b) in w.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-12);
        }
        let s: f64 = pmf_row_float(1000, 0.3).unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-10, "sum = {s}");
        let s: f64 = pmf_row_float(100_000, 0.3).unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-10, "sum = {s}");
    }

    #[test]
    fn float_row_mode_by_scan() {
        let w = pmf_row_float(100_000, 0.3).unwrap();
        let (arg, _) = w
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
        // mode of Binomial(n, x) is floor((n+1) x)
        let mode = ((100_001.0f64) * 0.3).floor() as i64;
        assert!((arg as i64 - mode).abs() <= 1);
        assert!((arg as i64 - 30_000).abs() <= 1);
    }

    #[test]
    fn float_row_domain() {
        assert!(pmf_row_float(0, 0.5).is_err());
        assert!(pmf_row_float(FLOAT_ROW_LIMIT + 1, 0.5).is_err());
        assert!(pmf_row_float(4, 1.5).is_err());
        assert_eq!(pmf_row_float(3, 0.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(pmf_row_float(3, 1.0).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
    }
}
