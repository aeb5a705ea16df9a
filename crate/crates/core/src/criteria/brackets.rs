//! Locating the real roots that fix each criterion threshold.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::ball::{Ball, BallError, PrecisionPolicy, Sign};
use crate::bounds::value_gap;
use crate::certify::{par_map, probe, Probe};
use crate::report::{CheckReport, Entry, Outcome, Witness};

use super::{CriterionInstance, CriterionKind, TURAN_CORNERS};

/// Samples per claimed interval, and per unit length in the discovery scan.
pub const BRACKET_SAMPLES: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketExpr {
    /// `x^{1/4}(d(x) - C x^{-5/2}) - 1`
    ValueGap,
    /// `f(x) - g(x+1)`
    RatioGap,
    /// One of the four corner tests, indexed as [`TURAN_CORNERS`].
    Turan(usize),
    /// `p(x-1) p(x)^2 p(x+1) - 4 q(x) + 3`
    Laguerre,
}

impl BracketExpr {
    pub fn label(self) -> &'static str {
        match self {
            BracketExpr::ValueGap => "x^(1/4)(d(x)-C/x^(5/2))-1",
            BracketExpr::RatioGap => "f(x)-g(x+1)",
            BracketExpr::Turan(i) => TURAN_CORNERS[i],
            BracketExpr::Laguerre => "p(x-1)p(x)^2p(x+1)-4q(x)+3",
        }
    }

    /// The expression is formed only for `x` strictly above this.
    pub fn domain_lo(self) -> i64 {
        match self {
            BracketExpr::Laguerre => 1,
            _ => 0,
        }
    }

    pub fn eval(self, x: &Ball) -> Result<Ball, BallError> {
        match self {
            BracketExpr::ValueGap => value_gap(x),
            BracketExpr::RatioGap => CriterionInstance::j(CriterionKind::LogConcave).ratio_gap(x),
            BracketExpr::Turan(i) => Ok(CriterionInstance::j(CriterionKind::HigherTuran).turan_values(x)?[i].clone()),
            BracketExpr::Laguerre => CriterionInstance::j(CriterionKind::Laguerre2).laguerre_value(x),
        }
    }
}

/// A claimed open interval containing the unique positive root.
#[derive(Clone, Copy, Debug)]
pub struct BracketClaim {
    pub id: &'static str,
    pub expr: BracketExpr,
    pub lo: i64,
    pub hi: i64,
}

pub const CLAIMS: [BracketClaim; 7] = [
    BracketClaim { id: "value-gap", expr: BracketExpr::ValueGap, lo: 1, hi: 2 },
    BracketClaim { id: "ratio-gap", expr: BracketExpr::RatioGap, lo: 0, hi: 1 },
    BracketClaim { id: "turan-pp", expr: BracketExpr::Turan(0), lo: 0, hi: 1 },
    BracketClaim { id: "turan-pq", expr: BracketExpr::Turan(1), lo: 1, hi: 2 },
    BracketClaim { id: "turan-qp", expr: BracketExpr::Turan(2), lo: 2, hi: 3 },
    BracketClaim { id: "turan-qq", expr: BracketExpr::Turan(3), lo: 1, hi: 2 },
    BracketClaim { id: "laguerre", expr: BracketExpr::Laguerre, lo: 2, hi: 3 },
];

/// One certified sample `x = num / den`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub num: BigInt,
    pub den: BigInt,
    pub probe: Probe,
}

impl Sample {
    pub fn x_string(&self) -> String {
        BigRational::new(self.num.clone(), self.den.clone()).to_string()
    }
}

/// Signs on a grid and the adjacent pairs where the certified sign flips.
#[derive(Clone, Debug)]
pub struct RootBracket {
    pub samples: Vec<Sample>,
    /// Indices `i` such that samples `i` and `i+1` have opposite strict signs.
    pub changes: Vec<usize>,
}

impl RootBracket {
    pub fn interval(&self, i: usize) -> (String, String) {
        (self.samples[i].x_string(), self.samples[i + 1].x_string())
    }

    /// The rightmost sign change, which bounds the last root from both sides.
    pub fn last_interval(&self) -> Option<(String, String)> {
        self.changes.last().map(|&i| self.interval(i))
    }

    fn sign_at(&self, i: usize) -> Sign {
        self.samples[i].probe.sign
    }
}

/// Certifies signs of `expr` at `k` equally spaced points of `[lo, hi]`,
/// skipping points outside the domain.
pub fn bracket_root(expr: BracketExpr, lo: i64, hi: i64, steps: i64, policy: PrecisionPolicy) -> RootBracket {
    let den = BigInt::from(steps);
    let first = if lo <= expr.domain_lo() { (expr.domain_lo() - lo) * steps / (hi - lo) + 1 } else { 0 };
    let samples = par_map(first..=steps, |i| {
        let num = BigInt::from(lo * steps + i * (hi - lo));
        let pr = probe(expr.label(), 0, policy, |p| expr.eval(&Ball::from_ratio(&num, &den, p)?));
        Sample { num, den: den.clone(), probe: pr }
    });
    let mut rb = RootBracket { samples, changes: Vec::new() };
    for i in 0..rb.samples.len().saturating_sub(1) {
        let (a, b) = (rb.sign_at(i), rb.sign_at(i + 1));
        if a.is_strict() && b.is_strict() && a != b {
            rb.changes.push(i);
        }
    }
    rb
}

/// For each claimed interval: a certified sign change inside it, plus the
/// bracket observed by scanning the whole domain up to `max(hi, 3)`.
pub fn bracket_check(policy: PrecisionPolicy) -> CheckReport {
    let mut r = CheckReport::new("brackets", "claimed intervals contain a certified sign change of each criterion");
    for c in CLAIMS {
        let inside = bracket_root(c.expr, c.lo, c.hi, BRACKET_SAMPLES, policy);
        let outcome = if !inside.changes.is_empty() {
            Outcome::Pass
        } else if inside.samples.iter().any(|s| !s.probe.sign.is_strict()) {
            Outcome::Unresolved
        } else {
            Outcome::Fail
        };
        let mut e = Entry::over(c.lo.to_string(), c.hi.to_string(), outcome).item(c.id);
        for s in [inside.samples.first(), inside.samples.last()].into_iter().flatten() {
            e = e.precision(s.probe.precision).witness(Witness {
                label: format!("{} at x={}", c.expr.label(), s.x_string()),
                value: s.probe.witness().value,
            });
        }
        let span = c.hi.max(3) - c.expr.domain_lo();
        let scan = bracket_root(c.expr, c.expr.domain_lo(), c.hi.max(3), BRACKET_SAMPLES * span, policy);
        match scan.last_interval() {
            Some((a, b)) => {
                r.finding(format!("observed-{}", c.id), format!("[{a}, {b}]"));
                if scan.changes.len() > 1 {
                    e = e.note(format!("{} sign changes in the scan", scan.changes.len()));
                }
                if outcome != Outcome::Pass {
                    e = e.note(format!("sign change found at [{a}, {b}] instead"));
                }
            }
            None => r.finding(format!("observed-{}", c.id), "none"),
        }
        r.push(e);
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::new(128, 1024)
    }

    fn observed(expr: BracketExpr) -> (f64, f64) {
        let s = bracket_root(expr, expr.domain_lo(), 3, 16 * (3 - expr.domain_lo()), pol());
        let i = *s.changes.last().unwrap();
        let x = |k: usize| {
            let s = &s.samples[k];
            s.num.to_string().parse::<f64>().unwrap() / s.den.to_string().parse::<f64>().unwrap()
        };
        (x(i), x(i + 1))
    }

    #[test]
    fn roots_fall_where_located_independently() {
        let (a, b) = observed(BracketExpr::ValueGap);
        assert!(1.0 <= a && b <= 2.0);
        let (a, b) = observed(BracketExpr::RatioGap);
        assert!(a <= 0.515 && 0.515 <= b);
        let (a, b) = observed(BracketExpr::Turan(0));
        assert!(0.3 <= a && b <= 0.5);
        let (a, b) = observed(BracketExpr::Turan(1));
        assert!(1.0 <= a && b <= 1.5);
        let (a, b) = observed(BracketExpr::Turan(2));
        assert!(1.5 <= a && b <= 2.0, "{a} {b}");
        let (a, b) = observed(BracketExpr::Turan(3));
        assert!(1.5 <= a && b <= 2.0);
        let (a, b) = observed(BracketExpr::Laguerre);
        assert!(2.0 <= a && b <= 3.0);
    }

    #[test]
    fn the_qp_corner_is_positive_at_two() {
        let v = BracketExpr::Turan(2).eval(&Ball::from_i64(2, 256)).unwrap();
        assert!(v.is_positive());
        assert!((v.to_f64() - 0.0279).abs() < 1e-3);
    }
}
