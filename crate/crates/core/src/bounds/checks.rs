//! Range checks of the bounds against exact coefficients.

use std::ops::RangeInclusive;

use crate::ball::{Ball, BallError, PrecisionPolicy};
use crate::certify::{all_positive_entry, coeff, need, par_map, probe, Probe};
use crate::exactseries::CoefficientTable;
use crate::report::{CheckReport, Entry};
use crate::VerifyError;

use super::{BoundFn, BoundName};

/// A lower/upper pair enclosing `c(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pair {
    AB,
    KL,
}

impl Pair {
    pub fn bounds(self) -> (BoundName, BoundName) {
        match self {
            Pair::AB => (BoundName::A, BoundName::B),
            Pair::KL => (BoundName::K, BoundName::L),
        }
    }

    pub fn valid_from(self) -> i64 {
        let (lo, hi) = self.bounds();
        lo.valid_from().max(hi.valid_from())
    }

    pub fn id(self) -> &'static str {
        match self {
            Pair::AB => "sandwich-ab",
            Pair::KL => "sandwich-kl",
        }
    }
}

fn exact(table: &CoefficientTable, n: i64, prec: u32) -> Ball {
    Ball::from_bigint(coeff(table, n), prec)
}

fn eval(b: BoundName, n: i64, prec: u32) -> Result<Ball, BallError> {
    b.eval_unchecked(n, prec)
}

/// `lower(n) < c(n) < upper(n)` for each `n`; entries below the pair's
/// validity threshold are recorded but not asserted.
pub fn sandwich_check(
    pair: Pair,
    table: &CoefficientTable,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> Result<CheckReport, VerifyError> {
    need(table, *range.end())?;
    let (lo, hi) = pair.bounds();
    let from = pair.valid_from();
    let entries = par_map(range.clone().filter(|&n| n >= 1), |n| {
        let below = probe(&format!("c-{lo}"), n, policy, |p| {
            Ok(exact(table, n, p).sub_ball(&eval(lo, n, p)?))
        });
        let above = probe(&format!("{hi}-c"), n, policy, |p| {
            Ok(eval(hi, n, p)?.sub_ball(&exact(table, n, p)))
        });
        all_positive_entry(n, &[below, above]).asserted(n >= from)
    });
    let mut r = CheckReport::new(pair.id(), format!("{lo}(n) < c(n) < {hi}(n), claimed for n >= {from}"));
    r.extend(entries);
    Ok(r.finish())
}

/// `e(n) < c(n)` for `n >= 2`.
pub fn lower_e_check(
    table: &CoefficientTable,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> Result<CheckReport, VerifyError> {
    need(table, *range.end())?;
    let from = BoundName::E.valid_from();
    let entries = par_map(range.filter(|&n| n >= from), |n| {
        let p = probe("c-e", n, policy, |p| {
            Ok(exact(table, n, p).sub_ball(&eval(BoundName::E, n, p)?))
        });
        all_positive_entry(n, &[p])
    });
    let mut r = CheckReport::new("lower-e", "e(n) < c(n) for n >= 2");
    r.extend(entries);
    Ok(r.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RatioPair {
    /// `f(n) < r(n) < g(n)`
    FG,
    /// `p(n) < u(n) < q(n)`
    PQ,
}

impl RatioPair {
    /// First `n` at which the chain through the value bounds is available.
    pub fn chain_from(self) -> i64 {
        match self {
            RatioPair::FG => 6,
            RatioPair::PQ => 8,
        }
    }
}

fn ratio_ball(table: &CoefficientTable, which: RatioPair, n: i64, prec: u32) -> Result<Ball, BallError> {
    match which {
        RatioPair::FG => Ball::from_ratio(coeff(table, n + 1), coeff(table, n), prec),
        RatioPair::PQ => {
            let c = coeff(table, n);
            Ball::from_ratio(&(coeff(table, n - 1) * coeff(table, n + 1)), &(c * c), prec)
        }
    }
}

fn direct_probes(table: &CoefficientTable, which: RatioPair, n: i64, policy: PrecisionPolicy) -> [Probe; 2] {
    let (lo, hi, sym) = match which {
        RatioPair::FG => (BoundName::F, BoundName::G, "r"),
        RatioPair::PQ => (BoundName::P, BoundName::Q, "u"),
    };
    [
        probe(&format!("{sym}-{lo}"), n, policy, |p| {
            Ok(ratio_ball(table, which, n, p)?.sub_ball(&eval(lo, n, p)?))
        }),
        probe(&format!("{hi}-{sym}"), n, policy, |p| {
            Ok(eval(hi, n, p)?.sub_ball(&ratio_ball(table, which, n, p)?))
        }),
    ]
}

fn chain_probes(which: RatioPair, n: i64, policy: PrecisionPolicy) -> [Probe; 2] {
    match which {
        RatioPair::FG => {
            use BoundName::{A, B, F, G};
            [
                probe("a(n+1)/b(n)-f", n, policy, |p| {
                    Ok(eval(A, n + 1, p)?.div_ball(&eval(B, n, p)?)?.sub_ball(&eval(F, n, p)?))
                }),
                probe("g-b(n+1)/a(n)", n, policy, |p| {
                    Ok(eval(G, n, p)?.sub_ball(&eval(B, n + 1, p)?.div_ball(&eval(A, n, p)?)?))
                }),
            ]
        }
        RatioPair::PQ => {
            use BoundName::{K, L, P, Q};
            [
                probe("k(n-1)k(n+1)/l(n)^2-p", n, policy, |p| {
                    let v = eval(K, n - 1, p)?.mul_ball(&eval(K, n + 1, p)?).div_ball(&eval(L, n, p)?.sqr())?;
                    Ok(v.sub_ball(&eval(P, n, p)?))
                }),
                probe("q-l(n-1)l(n+1)/k(n)^2", n, policy, |p| {
                    let v = eval(L, n - 1, p)?.mul_ball(&eval(L, n + 1, p)?).div_ball(&eval(K, n, p)?.sqr())?;
                    Ok(eval(Q, n, p)?.sub_ball(&v))
                }),
            ]
        }
    }
}

fn ratio_description(which: RatioPair) -> &'static str {
    match which {
        RatioPair::FG => "f(n) < r(n) < g(n), r(n) = c(n+1)/c(n)",
        RatioPair::PQ => "p(n) < u(n) < q(n), u(n) = c(n-1)c(n+1)/c(n)^2",
    }
}

/// The ratio bounds checked directly against exact coefficients.
pub fn ratio_direct(
    which: RatioPair,
    table: &CoefficientTable,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> Result<CheckReport, VerifyError> {
    need(table, *range.end() + 1)?;
    let entries = par_map(range.filter(|&n| n >= 1), |n| {
        all_positive_entry(n, &direct_probes(table, which, n, policy))
    });
    let id = match which {
        RatioPair::FG => "ratio-fg",
        RatioPair::PQ => "ratio-pq",
    };
    let mut r = CheckReport::new(id, ratio_description(which));
    r.extend(entries);
    Ok(r.finish())
}

/// The ratio bounds against the quotients of the value bounds from
/// [`RatioPair::chain_from`] on, and directly against exact coefficients below.
pub fn ratio_bound_consistency(
    which: RatioPair,
    table: &CoefficientTable,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> Result<CheckReport, VerifyError> {
    let from = which.chain_from();
    need(table, (from - 1).min(*range.end()) + 1)?;
    let entries = par_map(range.filter(|&n| n >= 1), |n| {
        if n >= from {
            all_positive_entry(n, &chain_probes(which, n, policy)).item("chain")
        } else {
            all_positive_entry(n, &direct_probes(table, which, n, policy)).item("direct")
        }
    });
    let id = match which {
        RatioPair::FG => "ratio-consistency-fg",
        RatioPair::PQ => "ratio-consistency-pq",
    };
    let description = match which {
        RatioPair::FG => "f(n) <= a(n+1)/b(n) and b(n+1)/a(n) <= g(n) for n >= 6; f < r < g exactly below",
        RatioPair::PQ => "p(n) <= k(n-1)k(n+1)/l(n)^2 and l(n-1)l(n+1)/k(n)^2 <= q(n) for n >= 8; p < u < q exactly below",
    };
    let mut r = CheckReport::new(id, description);
    r.extend(entries);
    Ok(r.finish())
}

fn difference_check(
    id: &str,
    description: &str,
    terms: &[(BoundName, BoundName)],
    from: i64,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> CheckReport {
    let entries: Vec<Entry> = par_map(range.filter(|&n| n >= from), |n| {
        let probes: Vec<Probe> = terms
            .iter()
            .map(|&(small, big)| {
                probe(&format!("{big}-{small}"), n, policy, |p| {
                    Ok(eval(big, n, p)?.sub_ball(&eval(small, n, p)?))
                })
            })
            .collect();
        all_positive_entry(n, &probes)
    });
    let mut r = CheckReport::new(id, description);
    r.extend(entries);
    r.finish()
}

/// Pointwise ordering among the bounds themselves.
pub fn bound_order_check(range: RangeInclusive<i64>, policy: PrecisionPolicy) -> Vec<CheckReport> {
    use BoundName::*;
    let r = || range.clone();
    let mut out = vec![
        difference_check("order-ab", "a(n) < b(n) for n >= 6", &[(A, B)], 6, r(), policy),
        difference_check("order-kl", "k(n) < l(n) for n >= 7", &[(K, L)], 7, r(), policy),
        difference_check("order-fg", "f(n) < g(n) for n >= 1", &[(F, G)], 1, r(), policy),
        difference_check("order-pq", "p(n) < q(n) for n >= 1", &[(P, Q)], 1, r(), policy),
        difference_check("order-ea", "e(n) < a(n) for n >= 2", &[(E, A)], 2, r(), policy),
        difference_check(
            "order-tighter",
            "a(n) < k(n) and l(n) < b(n) for n >= 7",
            &[(A, K), (L, B)],
            7,
            r(),
            policy,
        ),
    ];
    let below_one: Vec<Entry> = par_map(r().filter(|&n| n >= 4), |n| {
        let p = probe("1-q", n, policy, |p| Ok(Ball::one(p).sub_ball(&eval(Q, n, p)?)));
        all_positive_entry(n, &[p])
    });
    let mut q = CheckReport::new("order-q-below-one", "q(n) < 1 for n >= 4");
    q.extend(below_one);
    out.push(q.finish());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{j_coefficients, Route};
    use crate::report::Outcome;

    fn table(n: usize) -> CoefficientTable {
        j_coefficients(n, Route::EisensteinE4).unwrap()
    }

    #[test]
    fn sandwiches_hold_on_small_range() {
        let t = table(102);
        let pol = PrecisionPolicy::default();
        let ab = sandwich_check(Pair::AB, &t, 1..=100, pol).unwrap();
        assert_eq!(ab.entries.len(), 100);
        assert!(ab.is_clean(), "{:?}", ab.summary);
        assert_eq!(ab.summary.not_asserted, 5);
        // Below the threshold the lower bound is allowed to fail.
        assert_eq!(ab.entries[1].outcome, Outcome::Fail);
        let kl = sandwich_check(Pair::KL, &t, 7..=100, pol).unwrap();
        assert!(kl.is_clean());
    }

    #[test]
    fn ratios_on_first_terms() {
        let t = table(60);
        let pol = PrecisionPolicy::default();
        let fg = ratio_direct(RatioPair::FG, &t, 1..=5, pol).unwrap();
        assert!(fg.is_clean());
        let pq = ratio_direct(RatioPair::PQ, &t, 1..=7, pol).unwrap();
        assert!(pq.is_clean());
        let chain = ratio_bound_consistency(RatioPair::FG, &t, 50..=50, pol).unwrap();
        assert!(chain.is_clean());
        assert_eq!(chain.entries[0].item.as_deref(), Some("chain"));
    }

    #[test]
    fn missing_coefficients_are_reported() {
        let t = table(10);
        assert!(matches!(
            sandwich_check(Pair::AB, &t, 6..=20, PrecisionPolicy::default()),
            Err(VerifyError::MissingCoefficient { n: 20, .. })
        ));
    }
}
