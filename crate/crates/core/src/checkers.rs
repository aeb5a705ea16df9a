//! Definition-level inequality checks on exact positive integer sequences.
//!
//! Polynomial forms are decided exactly with cross-multiplied integers. The
//! root-sequence forms involve `a(n)^{1/n}`; they are certified with ball
//! logarithms and have an exact big-integer power comparison as oracle.

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{certify_sign, Ball, PrecisionPolicy, Sign};
use crate::exactseries::CoefficientTable;

/// Default largest `n` for which root-sequence checks use exact powers.
pub const ROOT_EXACT_CROSSOVER: i64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckerError {
    #[error("window of length {got} is too short, need at least {need}")]
    TooShort { need: usize, got: usize },
    #[error("a({n}) is not strictly positive")]
    NonPositive { n: i64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// `a(start), a(start+1), ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceWindow {
    start: i64,
    values: Vec<BigInt>,
}

impl SequenceWindow {
    pub fn new(start: i64, values: Vec<BigInt>) -> Result<SequenceWindow, CheckerError> {
        if let Some(i) = values.iter().position(|v| v.sign() != BigSign::Plus) {
            return Err(CheckerError::NonPositive { n: start + i as i64 });
        }
        Ok(SequenceWindow { start, values })
    }

    pub fn from_i64s(start: i64, values: &[i64]) -> Result<SequenceWindow, CheckerError> {
        SequenceWindow::new(start, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// `c(lo) ..= c(hi)`, with `lo >= 0`.
    pub fn from_table(table: &CoefficientTable, lo: i64, hi: i64) -> Result<SequenceWindow, CheckerError> {
        if lo < 0 || hi > table.max_n() || hi < lo {
            return Err(CheckerError::Domain(format!(
                "c({lo}..={hi}) is outside the table (0..={})",
                table.max_n()
            )));
        }
        let values = (lo..=hi).map(|n| table.get(n).expect("in range").clone()).collect();
        SequenceWindow::new(lo, values)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a(n)`; `n` must lie in the window.
    pub fn a(&self, n: i64) -> &BigInt {
        &self.values[(n - self.start) as usize]
    }

    fn require(&self, need: usize) -> Result<(), CheckerError> {
        if self.values.len() < need {
            return Err(CheckerError::TooShort { need, got: self.values.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The inequality holds strictly.
    Strict,
    /// The defining expression is exactly zero.
    Equality,
    Fails,
    /// Certification ran out of precision.
    Unresolved,
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Strict | Verdict::Equality)
    }
}

#[derive(Clone, Debug)]
pub enum Evidence {
    Exact(BigInt),
    Certified { enclosure: Option<Ball>, precision: u32 },
}

#[derive(Clone, Debug)]
pub struct PointVerdict {
    pub n: i64,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl PointVerdict {
    /// Verdict for "`value >= 0`" (or "`value <= 0`" when `nonpositive`).
    fn exact(n: i64, value: BigInt, nonpositive: bool) -> PointVerdict {
        let verdict = match (value.sign(), nonpositive) {
            (BigSign::NoSign, _) => Verdict::Equality,
            (BigSign::Plus, false) | (BigSign::Minus, true) => Verdict::Strict,
            _ => Verdict::Fails,
        };
        PointVerdict { n, verdict, evidence: Evidence::Exact(value) }
    }

    pub fn precision_used(&self) -> Option<u32> {
        match &self.evidence {
            Evidence::Exact(_) => None,
            Evidence::Certified { precision, .. } => Some(*precision),
        }
    }
}

/// `a(n) a(n+2) - a(n+1)^2 <= 0` for each `n` with `a(n+2)` in the window.
pub fn check_log_concave(w: &SequenceWindow) -> Result<Vec<PointVerdict>, CheckerError> {
    w.require(3)?;
    Ok((w.start()..=w.end() - 2)
        .map(|n| {
            let v = w.a(n) * w.a(n + 2) - w.a(n + 1) * w.a(n + 1);
            PointVerdict::exact(n, v, true)
        })
        .collect())
}

/// `r(n) r(n+2) - r(n+1)^2 >= 0` with `r(n) = a(n+1)/a(n)`, decided as
/// `a(n+1)^3 a(n+3) - a(n) a(n+2)^3 >= 0`.
pub fn check_ratio_log_convex(w: &SequenceWindow) -> Result<Vec<PointVerdict>, CheckerError> {
    w.require(4)?;
    Ok((w.start()..=w.end() - 3)
        .map(|n| {
            let b = w.a(n + 1);
            let c = w.a(n + 2);
            let v = b * b * b * w.a(n + 3) - w.a(n) * c * c * c;
            PointVerdict::exact(n, v, false)
        })
        .collect())
}

/// `4(a_n^2 - a_{n-1}a_{n+1})(a_{n+1}^2 - a_n a_{n+2}) - (a_n a_{n+1} - a_{n-1}a_{n+2})^2 >= 0`.
pub fn higher_turan_form(a0: &BigInt, a1: &BigInt, a2: &BigInt, a3: &BigInt) -> BigInt {
    let t1 = a1 * a1 - a0 * a2;
    let t2 = a2 * a2 - a1 * a3;
    let m = a1 * a2 - a0 * a3;
    BigInt::from(4) * t1 * t2 - &m * &m
}

/// Higher Turán inequality at each `n` from `start + 1`.
pub fn check_higher_turan(w: &SequenceWindow) -> Result<Vec<PointVerdict>, CheckerError> {
    w.require(4)?;
    Ok((w.start() + 1..=w.end() - 2)
        .map(|n| {
            let v = higher_turan_form(w.a(n - 1), w.a(n), w.a(n + 1), w.a(n + 2));
            PointVerdict::exact(n, v, false)
        })
        .collect())
}

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = row[k as usize].clone() * (n - k) / (k + 1);
        row.push(next);
    }
    row
}

/// `L_m(a_n) = (1/2) sum_{k=0}^{2m} (-1)^{k+m} C(2m,k) a(n+k) a(n+2m-k)`.
pub fn laguerre_value(w: &SequenceWindow, n: i64, m: u32) -> BigInt {
    let two_m = 2 * m as i64;
    let binom = binomial_row(two_m as u64);
    let mut sum = BigInt::zero();
    for k in 0..=two_m {
        let term = &binom[k as usize] * w.a(n + k) * w.a(n + two_m - k);
        if (k + m as i64) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    // The sum pairs k with 2m - k, so it is even.
    let (half, rem) = sum.div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero());
    half
}

/// `L_m(a_n) >= 0` for each `n` with `a(n+2m)` in the window.
pub fn check_laguerre(w: &SequenceWindow, m: i64) -> Result<Vec<PointVerdict>, CheckerError> {
    if m <= 0 {
        return Err(CheckerError::Domain(format!("Laguerre order must be positive, got {m}")));
    }
    let m = u32::try_from(m).map_err(|_| CheckerError::Domain("Laguerre order too large".into()))?;
    w.require(2 * m as usize + 1)?;
    Ok((w.start()..=w.end() - 2 * m as i64)
        .map(|n| PointVerdict::exact(n, laguerre_value(w, n, m), false))
        .collect())
}

fn log_over_index(w: &SequenceWindow, k: i64, prec: u32) -> Result<Ball, crate::ball::BallError> {
    Ball::from_bigint(w.a(k), prec).log()?.div_i64(k)
}

fn certified(n: i64, policy: PrecisionPolicy, eval: impl Fn(u32) -> Result<Ball, crate::ball::BallError>) -> PointVerdict {
    match certify_sign("root", n, policy, eval) {
        Ok(c) => PointVerdict {
            n,
            verdict: match c.sign {
                Sign::StrictlyPositive => Verdict::Strict,
                Sign::StrictlyNegative => Verdict::Fails,
                Sign::Inconclusive => Verdict::Unresolved,
            },
            evidence: Evidence::Certified { enclosure: c.enclosure, precision: c.precision_used },
        },
        Err(_) => PointVerdict {
            n,
            verdict: Verdict::Unresolved,
            evidence: Evidence::Certified { enclosure: None, precision: policy.max },
        },
    }
}

fn root_indices(w: &SequenceWindow, lead: i64, need: usize) -> Result<std::ops::RangeInclusive<i64>, CheckerError> {
    w.require(need)?;
    if w.start() < 1 {
        return Err(CheckerError::Domain("root sequences start at n = 1".into()));
    }
    Ok(w.start() + lead..=w.end() - (need as i64 - 1 - lead))
}

/// `log a(n)/n + log a(n+2)/(n+2) - 2 log a(n+1)/(n+1)`, ball-certified.
pub fn root_log_convex_ball(w: &SequenceWindow, n: i64, policy: PrecisionPolicy) -> PointVerdict {
    certified(n, policy, |p| {
        let two = log_over_index(w, n + 1, p)?.mul_2exp(1);
        Ok(log_over_index(w, n, p)?.add_ball(&log_over_index(w, n + 2, p)?).sub_ball(&two))
    })
}

/// Compares `a(n)^{(n+1)(n+2)} a(n+2)^{n(n+1)}` with `a(n+1)^{2n(n+2)}`.
pub fn root_log_convex_exact(w: &SequenceWindow, n: i64) -> PointVerdict {
    let e = |x: i64| x as usize;
    let lhs = num_traits::pow(w.a(n).clone(), e((n + 1) * (n + 2)))
        * num_traits::pow(w.a(n + 2).clone(), e(n * (n + 1)));
    let rhs = num_traits::pow(w.a(n + 1).clone(), e(2 * n * (n + 2)));
    PointVerdict::exact(n, lhs - rhs, false)
}

/// Log-convexity of `a(n)^{1/n}` at each `n` from the window start; exact
/// powers up to `crossover`, ball logarithms beyond.
pub fn check_root_log_convex(
    w: &SequenceWindow,
    policy: PrecisionPolicy,
    crossover: i64,
) -> Result<Vec<PointVerdict>, CheckerError> {
    let ns = root_indices(w, 0, 3)?;
    Ok(ns
        .map(|n| {
            if n <= crossover {
                root_log_convex_exact(w, n)
            } else {
                root_log_convex_ball(w, n, policy)
            }
        })
        .collect())
}

/// `3 L(n+1) - 3 L(n) + L(n-1) - L(n+2)` with `L(k) = log a(k) / k`,
/// ball-certified. Nonnegative iff `t(n) = s(n+1)/s(n)`, `s(n) = a(n)^{1/n}`,
/// satisfies `t(n-1) t(n+1) <= t(n)^2`.
pub fn root_ratio_log_concave_ball(w: &SequenceWindow, n: i64, policy: PrecisionPolicy) -> PointVerdict {
    certified(n, policy, |p| {
        let up = log_over_index(w, n + 1, p)?.sub_ball(&log_over_index(w, n, p)?).mul_i64(3);
        Ok(up.add_ball(&log_over_index(w, n - 1, p)?).sub_ball(&log_over_index(w, n + 2, p)?))
    })
}

/// The same comparison after multiplying through by `M = lcm(n-1, n, n+1, n+2)`:
/// `a(n+1)^{3M/(n+1)} a(n-1)^{M/(n-1)}` against `a(n)^{3M/n} a(n+2)^{M/(n+2)}`.
pub fn root_ratio_log_concave_exact(w: &SequenceWindow, n: i64) -> PointVerdict {
    let m = [n - 1, n + 1, n + 2].iter().fold(n, |acc, &k| acc.lcm(&k));
    let pw = |k: i64, mult: i64| num_traits::pow(w.a(k).clone(), (mult * m / k) as usize);
    let lhs = pw(n + 1, 3) * pw(n - 1, 1);
    let rhs = pw(n, 3) * pw(n + 2, 1);
    PointVerdict::exact(n, lhs - rhs, false)
}

/// Ratio log-concavity of `a(n)^{1/n}` at each `n` from `start + 1`.
pub fn check_root_ratio_log_concave(
    w: &SequenceWindow,
    policy: PrecisionPolicy,
    crossover: i64,
) -> Result<Vec<PointVerdict>, CheckerError> {
    let ns = root_indices(w, 1, 4)?;
    if w.start() < 1 || *ns.start() < 2 {
        return Err(CheckerError::Domain("root ratio checks need a(n-1) with n - 1 >= 1".into()));
    }
    Ok(ns
        .map(|n| {
            if n <= crossover {
                root_ratio_log_concave_exact(w, n)
            } else {
                root_ratio_log_concave_ball(w, n, policy)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{j_coefficients, Route};
    use proptest::prelude::*;

    fn win(start: i64, v: &[i64]) -> SequenceWindow {
        SequenceWindow::from_i64s(start, v).unwrap()
    }

    fn factorials(start: i64, len: usize) -> SequenceWindow {
        let mut v = Vec::new();
        let mut f = BigInt::one();
        for k in 1..=start {
            f *= k;
        }
        for k in start..start + len as i64 {
            v.push(f.clone());
            f *= k + 1;
        }
        SequenceWindow::new(start, v).unwrap()
    }

    fn c_window(lo: i64, hi: i64) -> SequenceWindow {
        let t = j_coefficients(hi as usize + 1, Route::EisensteinE4).unwrap();
        SequenceWindow::from_table(&t, lo, hi).unwrap()
    }

    fn verdicts(v: &[PointVerdict]) -> Vec<Verdict> {
        v.iter().map(|p| p.verdict).collect()
    }

    #[test]
    fn windows_reject_nonpositive_values() {
        assert_eq!(SequenceWindow::from_i64s(3, &[1, 0]), Err(CheckerError::NonPositive { n: 4 }));
        assert!(check_log_concave(&win(0, &[1, 2])).is_err());
    }

    #[test]
    fn log_concavity_examples() {
        let c = c_window(0, 2);
        let v = check_log_concave(&c).unwrap();
        assert_eq!(v[0].verdict, Verdict::Strict);
        assert_eq!(verdicts(&check_log_concave(&win(0, &[5, 5, 5])).unwrap()), vec![Verdict::Equality]);
        assert_eq!(verdicts(&check_log_concave(&win(0, &[1, 2, 4])).unwrap()), vec![Verdict::Equality]);
        // n! is log-convex, so log-concavity fails.
        assert!(verdicts(&check_log_concave(&factorials(1, 6)).unwrap()).iter().all(|&v| v == Verdict::Fails));
    }

    #[test]
    fn ratio_log_convexity_examples() {
        let c = c_window(1, 24);
        assert!(check_ratio_log_convex(&c).unwrap().iter().all(|p| p.verdict == Verdict::Strict));
        let geo = win(0, &[3, 6, 12, 24, 48]);
        assert!(check_ratio_log_convex(&geo).unwrap().iter().all(|p| p.verdict == Verdict::Equality));
        assert_eq!(check_ratio_log_convex(&factorials(1, 4)).unwrap()[0].verdict, Verdict::Fails);
    }

    #[test]
    fn higher_turan_examples() {
        let c = c_window(1, 4);
        let v = check_higher_turan(&c).unwrap();
        assert_eq!((v[0].n, v[0].verdict), (2, Verdict::Strict));
        let geo = win(0, &[1, 3, 9, 27, 81]);
        assert!(check_higher_turan(&geo).unwrap().iter().all(|p| p.verdict == Verdict::Equality));
        let f = check_higher_turan(&win(0, &[1, 1, 2, 6])).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].n, 1);
        assert_eq!(f[0].verdict, Verdict::Fails);
        assert!(matches!(&f[0].evidence, Evidence::Exact(v) if *v == BigInt::from(-8)));
    }

    #[test]
    fn laguerre_examples() {
        let geo = win(0, &[1, 2, 4, 8, 16]);
        let v = check_laguerre(&geo, 2).unwrap();
        assert!(matches!(&v[0].evidence, Evidence::Exact(x) if x.is_zero()));
        let c = c_window(1, 5);
        assert_eq!(check_laguerre(&c, 2).unwrap()[0].verdict, Verdict::Strict);
        assert!(check_laguerre(&geo, 0).is_err());
        assert!(check_laguerre(&win(0, &[1, 2, 3, 4]), 2).is_err());
    }

    #[test]
    fn root_examples() {
        let c = c_window(1, 3);
        let pol = PrecisionPolicy::default();
        assert_eq!(root_log_convex_exact(&c, 1).verdict, Verdict::Strict);
        assert_eq!(root_log_convex_ball(&c, 1, pol).verdict, Verdict::Strict);
        // A constant sequence 7 has log-convex roots 7^{1/n}, strictly.
        let seven = win(1, &[7, 7, 7]);
        assert_eq!(check_root_log_convex(&seven, pol, 30).unwrap()[0].verdict, Verdict::Strict);
        let ones = win(1, &[1, 1, 1]);
        assert_eq!(check_root_log_convex(&ones, pol, 30).unwrap()[0].verdict, Verdict::Equality);
        // 2^n has constant roots, so the ratio test is an equality.
        let pow2 = win(1, &[2, 4, 8, 16]);
        assert_eq!(check_root_ratio_log_concave(&pow2, pol, 30).unwrap()[0].verdict, Verdict::Equality);
        let c = c_window(1, 4);
        assert_eq!(check_root_ratio_log_concave(&c, pol, 30).unwrap()[0].verdict, Verdict::Strict);
        assert!(check_root_log_convex(&win(0, &[1, 2, 3]), pol, 30).is_err());
    }

    #[test]
    fn ball_and_exact_root_checks_agree_on_c() {
        let c = c_window(1, 32);
        let pol = PrecisionPolicy::default();
        for n in 1..=30 {
            assert_eq!(root_log_convex_ball(&c, n, pol).verdict, root_log_convex_exact(&c, n).verdict, "n={n}");
        }
        for n in 2..=29 {
            assert_eq!(
                root_ratio_log_concave_ball(&c, n, pol).verdict,
                root_ratio_log_concave_exact(&c, n).verdict,
                "n={n}"
            );
        }
    }

    proptest! {
        #[test]
        fn laguerre_order_one_is_turan_defect(v in prop::collection::vec(1i64..1_000_000, 3..12)) {
            let w = win(0, &v);
            let lc = check_log_concave(&w).unwrap();
            let l1 = check_laguerre(&w, 1).unwrap();
            for (a, b) in lc.iter().zip(&l1) {
                match (&a.evidence, &b.evidence) {
                    (Evidence::Exact(x), Evidence::Exact(y)) => prop_assert_eq!(x, &-y),
                    _ => prop_assert!(false),
                }
            }
        }

        #[test]
        fn laguerre_two_matches_expansion(v in prop::collection::vec(1i64..1_000_000, 5..12)) {
            let w = win(0, &v);
            for p in check_laguerre(&w, 2).unwrap() {
                let n = p.n;
                let a = |k: i64| w.a(n + k).clone();
                let expect = a(0) * a(4) - BigInt::from(4) * a(1) * a(3) + BigInt::from(3) * a(2) * a(2);
                prop_assert!(matches!(&p.evidence, Evidence::Exact(x) if *x == expect));
            }
        }

        #[test]
        fn geometric_sequences_are_equality_cases(a in 1i64..1000, r in 1i64..50) {
            let v: Vec<BigInt> = (0..6u32).map(|k| BigInt::from(a) * BigInt::from(r).pow(k)).collect();
            let w = SequenceWindow::new(0, v).unwrap();
            for p in check_higher_turan(&w).unwrap() {
                prop_assert_eq!(p.verdict, Verdict::Equality);
            }
            for p in check_laguerre(&w, 2).unwrap() {
                prop_assert_eq!(p.verdict, Verdict::Equality);
            }
        }

        #[test]
        fn strict_log_concavity_and_turan_are_consistent(v in prop::collection::vec(1i64..10_000, 4..10)) {
            // Higher Turán at n with strict log-concavity at n-1 and n means
            // both Turán factors are positive.
            let w = win(0, &v);
            let lc = check_log_concave(&w).unwrap();
            for p in check_higher_turan(&w).unwrap() {
                let i = (p.n - 1) as usize;
                if p.verdict.holds() && lc[i].verdict == Verdict::Strict && lc[i + 1].verdict == Verdict::Strict {
                    let t1 = w.a(p.n) * w.a(p.n) - w.a(p.n - 1) * w.a(p.n + 1);
                    let t2 = w.a(p.n + 1) * w.a(p.n + 1) - w.a(p.n) * w.a(p.n + 2);
                    prop_assert!(t1 > BigInt::zero() && t2 > BigInt::zero());
                }
            }
        }
    }
}
