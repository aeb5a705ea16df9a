//! Named checks and the coefficient range each one needs.

use std::fmt;
use std::str::FromStr;

use crate::ball::{Ball, PrecisionPolicy, Sign};
use crate::bounds::{
    bound_order_check, lower_e_check, ratio_bound_consistency, ratio_direct, remainder_threshold, sandwich_check, Pair,
    RatioPair, REMAINDER_5, REMAINDER_6,
};
use crate::certify::{coeff, need, par_map, probe};
use crate::checkers::{self, SequenceWindow, Verdict};
use crate::criteria::{bracket_check, criterion_check, direct_check, run_theorem, CriterionKind, Property, TheoremId};
use crate::exactseries::{j_coefficients, CoefficientTable, Route};
use crate::report::{CheckReport, Entry, Outcome, Witness};
use crate::VerifyError;

/// `(n, tolerance)`: `1 - tol <= c(n) sqrt2 n^{3/4} e^{-4 pi sqrt n} <= 1`.
pub const ASYMPTOTIC_POINTS: [(i64, &str); 2] = [(1000, "0.04"), (5000, "0.015")];

/// Smallest `n` from which the remainder bound at order 5 is claimed below its constant.
pub const REMAINDER_5_FROM: i64 = 15;

/// Searched range for the remainder thresholds; the bound decreases beyond it.
pub const REMAINDER_SEARCH: i64 = 40;

/// Largest `n` of the ball/exact root oracle comparison.
pub const ORACLE_MAX: i64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    Coefficients,
    Asymptotic,
    Sandwich(Pair),
    LowerE,
    Ratio(RatioPair),
    RatioConsistency(RatioPair),
    Remainder(u32),
    /// All the pointwise orderings among bounds.
    Order,
    Direct(Property),
    Criterion(CriterionKind),
    Brackets,
    Theorem(TheoremId),
    OracleRoot,
    NegativeControls,
}

impl CheckId {
    pub fn all() -> Vec<CheckId> {
        let mut v = vec![
            CheckId::Coefficients,
            CheckId::Asymptotic,
            CheckId::Sandwich(Pair::AB),
            CheckId::Sandwich(Pair::KL),
            CheckId::LowerE,
            CheckId::Ratio(RatioPair::FG),
            CheckId::Ratio(RatioPair::PQ),
            CheckId::RatioConsistency(RatioPair::FG),
            CheckId::RatioConsistency(RatioPair::PQ),
            CheckId::Remainder(5),
            CheckId::Remainder(6),
            CheckId::Order,
        ];
        v.extend(Property::ALL.map(CheckId::Direct));
        v.extend(CriterionKind::ALL.map(CheckId::Criterion));
        v.push(CheckId::Brackets);
        v.extend(TheoremId::ALL.map(CheckId::Theorem));
        v.push(CheckId::OracleRoot);
        v.push(CheckId::NegativeControls);
        v
    }

    pub fn id(self) -> String {
        match self {
            CheckId::Coefficients => "coefficients".into(),
            CheckId::Asymptotic => "asymptotic".into(),
            CheckId::Sandwich(p) => p.id().into(),
            CheckId::LowerE => "lower-e".into(),
            CheckId::Ratio(RatioPair::FG) => "ratio-fg".into(),
            CheckId::Ratio(RatioPair::PQ) => "ratio-pq".into(),
            CheckId::RatioConsistency(RatioPair::FG) => "ratio-consistency-fg".into(),
            CheckId::RatioConsistency(RatioPair::PQ) => "ratio-consistency-pq".into(),
            CheckId::Remainder(p) => format!("remainder-{p}"),
            CheckId::Order => "order".into(),
            CheckId::Direct(p) => p.id().into(),
            CheckId::Criterion(k) => format!("criterion-{}", k.id()),
            CheckId::Brackets => "brackets".into(),
            CheckId::Theorem(t) => t.id().into(),
            CheckId::OracleRoot => "oracle-root".into(),
            CheckId::NegativeControls => "negative-controls".into(),
        }
    }

    /// Largest `n` with `c(n)` needed for a run up to `n_max`; `None` when
    /// the check does not read coefficients.
    pub fn needs(self, n_max: i64) -> Option<i64> {
        match self {
            CheckId::Coefficients | CheckId::Sandwich(_) | CheckId::LowerE => Some(n_max),
            CheckId::Asymptotic => Some(ASYMPTOTIC_POINTS.iter().map(|p| p.0).max().unwrap_or(0)),
            CheckId::Ratio(_) | CheckId::RatioConsistency(_) => Some(n_max + 1),
            CheckId::Direct(p) => Some(p.needs(n_max)),
            CheckId::Theorem(t) => Some(t.needs(n_max)),
            CheckId::OracleRoot => Some(ORACLE_MAX + 2),
            CheckId::Remainder(_)
            | CheckId::Order
            | CheckId::Criterion(_)
            | CheckId::Brackets
            | CheckId::NegativeControls => None,
        }
    }

    /// The smallest `n_max` at which the check asserts anything.
    pub fn min_n_max(self) -> i64 {
        match self {
            CheckId::Sandwich(p) => p.valid_from(),
            CheckId::LowerE => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for CheckId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<CheckId, VerifyError> {
        let s = if s.starts_with("order-") { "order" } else { s };
        CheckId::all()
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| VerifyError::Usage(format!("unknown check {s:?}")))
    }
}

/// Parses a comma-separated selection; `all` selects every check.
pub fn parse_selection(s: &str) -> Result<Vec<CheckId>, VerifyError> {
    let mut out: Vec<CheckId> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let ids = if part == "all" { CheckId::all() } else { vec![part.parse()?] };
        for id in ids {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    if out.is_empty() {
        return Err(VerifyError::Usage("empty check selection".into()));
    }
    Ok(out)
}

/// Coefficients a selection needs, counted from `c(0)`.
pub fn table_count(ids: &[CheckId], n_max: i64) -> usize {
    ids.iter().filter_map(|c| c.needs(n_max)).max().map_or(0, |n| (n + 1).max(0) as usize)
}

/// Runs one check. `Order` yields one report per ordering.
pub fn run_check(
    id: CheckId,
    table: &CoefficientTable,
    n_max: i64,
    policy: PrecisionPolicy,
) -> Result<Vec<CheckReport>, VerifyError> {
    let one = |r: CheckReport| Ok(vec![r]);
    match id {
        CheckId::Coefficients => one(coefficients_check(table, n_max)?),
        CheckId::Asymptotic => one(asymptotic_check(table, policy)?),
        CheckId::Sandwich(p) => one(sandwich_check(p, table, 1..=n_max, policy)?),
        CheckId::LowerE => one(lower_e_check(table, 2..=n_max, policy)?),
        CheckId::Ratio(w) => one(ratio_direct(w, table, 1..=n_max, policy)?),
        CheckId::RatioConsistency(w) => one(ratio_bound_consistency(w, table, 1..=n_max, policy)?),
        CheckId::Remainder(p) => one(remainder_check(p, n_max.max(REMAINDER_SEARCH), policy)?),
        CheckId::Order => Ok(bound_order_check(1..=n_max, policy)),
        CheckId::Direct(p) => {
            let from = TheoremId::ALL
                .iter()
                .flat_map(|t| t.properties())
                .find(|(q, _)| *q == p)
                .map_or(1, |(_, from)| from);
            one(direct_check(p, table, from..=n_max, policy)?)
        }
        CheckId::Criterion(k) => one(criterion_check(k, k.domain_min()..=n_max, policy)),
        CheckId::Brackets => one(bracket_check(policy)),
        CheckId::Theorem(t) => one(run_theorem(t, table, n_max, policy)?),
        CheckId::OracleRoot => one(oracle_root_check(table, ORACLE_MAX, policy)?),
        CheckId::NegativeControls => one(negative_controls()?),
    }
}

/// Known leading values, and agreement of the table with the route it
/// was not computed by.
pub fn coefficients_check(table: &CoefficientTable, n_max: i64) -> Result<CheckReport, VerifyError> {
    need(table, n_max)?;
    let other = match table.source() {
        Route::EisensteinE6 => Route::EisensteinE4,
        _ => Route::EisensteinE6,
    };
    let check = j_coefficients((n_max + 1) as usize, other)?;
    let known = [(0i64, 744i64), (1, 196884), (2, 21493760)];
    let mut r = CheckReport::new("coefficients", format!("c(n) agrees with the {other} route; c(0), c(1), c(2) as known"));
    for n in 0..=n_max {
        let v = coeff(table, n);
        let mut ok = check.get(n) == Some(v);
        let mut e = Entry::at(n, Outcome::Pass);
        if let Some(&(_, want)) = known.iter().find(|(k, _)| *k == n) {
            ok &= *v == want.into();
            e = e.witness(Witness::exact(format!("c({n})"), v));
        }
        if !ok {
            e = e.note(format!("{other} route gives {}", check.get(n).map_or("nothing".into(), |x| x.to_string())));
        }
        r.push(Entry { outcome: if ok { Outcome::Pass } else { Outcome::Fail }, ..e });
    }
    r.finding("source", table.source());
    Ok(r.finish())
}

/// `c(n) sqrt2 n^{3/4} e^{-4 pi sqrt n}`
pub fn asymptotic_ratio(c: &num_bigint::BigInt, n: i64, prec: u32) -> Result<Ball, crate::BallError> {
    let x = Ball::from_i64(n, prec);
    let expo = Ball::pi(prec).mul_2exp(2).mul_ball(&x.sqrt()?).exp()?;
    let sqrt2 = Ball::from_i64(2, prec).sqrt()?;
    Ball::from_bigint(c, prec).mul_ball(&sqrt2).mul_ball(&x.pow_rational(3, 4)?).div_ball(&expo)
}

pub fn asymptotic_check(table: &CoefficientTable, policy: PrecisionPolicy) -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new("asymptotic", "1 - tol <= c(n) sqrt(2) n^(3/4) exp(-4 pi sqrt(n)) <= 1");
    for (n, tol) in ASYMPTOTIC_POINTS {
        need(table, n)?;
        let c = coeff(table, n);
        let above = probe("ratio-(1-tol)", n, policy, |p| {
            let one = Ball::one(p).sub_ball(&Ball::from_decimal(tol, p)?);
            Ok(asymptotic_ratio(c, n, p)?.sub_ball(&one))
        });
        let below = probe("1-ratio", n, policy, |p| Ok(Ball::one(p).sub_ball(&asymptotic_ratio(c, n, p)?)));
        let value = asymptotic_ratio(c, n, policy.start.max(256))?;
        let e = crate::certify::all_positive_entry(n, &[above, below])
            .witness(Witness::ball("ratio", &value))
            .note(format!("tolerance {tol}"));
        r.push(e);
    }
    Ok(r.finish())
}

/// Remainder bound of order `p` against its decimal constant over
/// `1..=search_max`. Asserted from the claimed start for order 5 and from
/// the searched threshold for order 6.
pub fn remainder_check(p: u32, search_max: i64, policy: PrecisionPolicy) -> Result<CheckReport, VerifyError> {
    let constant = match p {
        5 => REMAINDER_5,
        6 => REMAINDER_6,
        _ => return Err(VerifyError::Usage(format!("no remainder constant for order {p}"))),
    };
    let s = remainder_threshold(p, constant, search_max, policy)?;
    let from = match p {
        5 => Some(REMAINDER_5_FROM),
        _ => s.n_star,
    };
    let mut r = CheckReport::new(
        format!("remainder-{p}"),
        format!("remainder bound of order {p} <= {constant}"),
    );
    r.finding("constant", constant);
    r.finding("decreasing-from", s.decreasing_from);
    r.finding("n-star", s.n_star.map_or("none".to_string(), |n| n.to_string()));
    r.finding("asserted-from", from.map_or("none".to_string(), |n| n.to_string()));
    r.finding("limit", s.limit.to_decimal_string(crate::report::WITNESS_DIGITS));
    for (n, sign, prec, enc) in &s.signs {
        let outcome = match sign {
            Sign::StrictlyNegative => Outcome::Pass,
            Sign::StrictlyPositive => Outcome::Fail,
            Sign::Inconclusive => Outcome::Unresolved,
        };
        let mut e = Entry::at(*n, outcome).precision(*prec).asserted(from.is_some_and(|f| *n >= f));
        if let Some(b) = enc {
            e = e.witness(Witness::ball("bound-constant", b));
        }
        r.push(e);
    }
    if from.is_none() {
        r.push(Entry::at(search_max, Outcome::Fail).item("threshold").note("no n in range with the bound below the constant"));
    }
    Ok(r.finish())
}

/// Ball-certified root-sequence verdicts against exact power comparisons.
pub fn oracle_root_check(table: &CoefficientTable, n_hi: i64, policy: PrecisionPolicy) -> Result<CheckReport, VerifyError> {
    need(table, n_hi + 2)?;
    let w = SequenceWindow::from_table(table, 1, n_hi + 2)?;
    let entries = par_map(1..=n_hi, |n| {
        let mut pairs = vec![(
            "root-log-convex",
            checkers::root_log_convex_ball(&w, n, policy),
            checkers::root_log_convex_exact(&w, n),
        )];
        if n >= 2 {
            pairs.push((
                "root-ratio-log-concave",
                checkers::root_ratio_log_concave_ball(&w, n, policy),
                checkers::root_ratio_log_concave_exact(&w, n),
            ));
        }
        let mut e = Entry::at(n, Outcome::Pass);
        let mut outcome = Outcome::Pass;
        for (label, ball, exact) in pairs {
            if let Some(p) = ball.precision_used() {
                e = e.precision(p);
            }
            let agree = match (ball.verdict, exact.verdict) {
                (Verdict::Unresolved, _) => {
                    outcome = crate::certify::combine([outcome, Outcome::Unresolved]);
                    true
                }
                (b, x) => b == x,
            };
            if !agree {
                outcome = Outcome::Fail;
                e = e.note(format!("{label}: ball {:?}, exact {:?}", ball.verdict, exact.verdict));
            }
        }
        Entry { outcome, ..e }
    });
    let mut r = CheckReport::new("oracle-root", "ball and exact root-sequence verdicts agree");
    r.extend(entries);
    Ok(r.finish())
}

/// Sequences the checkers must reject.
pub fn negative_controls() -> Result<CheckReport, VerifyError> {
    let mut r = CheckReport::new("negative-controls", "checkers reject sequences that violate the inequalities");
    let mut fact = vec![1i64];
    for i in 1..=12 {
        fact.push(fact[i - 1] * i as i64);
    }
    let turan = checkers::check_higher_turan(&SequenceWindow::from_i64s(0, &[1, 1, 2, 6])?)?;
    let second = turan.iter().find(|v| v.n == 1).map(|v| v.verdict);
    r.push(
        Entry::at(1, if second == Some(Verdict::Fails) { Outcome::Pass } else { Outcome::Fail })
            .item("higher-turan [1, 1, 2, 6]")
            .note(format!("verdict {second:?}")),
    );
    let lc = checkers::check_log_concave(&SequenceWindow::from_i64s(1, &fact[1..])?)?;
    let fails = lc.iter().filter(|v| v.verdict == Verdict::Fails).count();
    r.push(
        Entry::at(1, if fails == lc.len() && !lc.is_empty() { Outcome::Pass } else { Outcome::Fail })
            .item("log-concave n!")
            .note(format!("{fails} of {} indices rejected", lc.len())),
    );
    Ok(r.finish())
}
