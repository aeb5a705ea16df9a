//! Criterion checks over integer ranges and their comparison with the
//! inequalities they are meant to imply.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::ball::{PrecisionPolicy, Sign};
use crate::certify::{combine, need, par_map, Probe};
use crate::checkers::{self, PointVerdict, SequenceWindow, Verdict, ROOT_EXACT_CROSSOVER};
use crate::exactseries::CoefficientTable;
use crate::report::{CheckReport, Entry, Outcome, Witness};
use crate::VerifyError;

use super::brackets::{BracketExpr, CLAIMS};
use super::{CriterionInstance, CriterionKind};

/// Inequalities checked directly on exact coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    LogConcave,
    RatioLogConvex,
    RootLogConvex,
    RootRatioLogConcave,
    HigherTuran,
    Laguerre2,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::LogConcave,
        Property::RatioLogConvex,
        Property::RootLogConvex,
        Property::RootRatioLogConcave,
        Property::HigherTuran,
        Property::Laguerre2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::LogConcave => "log-concave",
            Property::RatioLogConvex => "ratio-log-convex",
            Property::RootLogConvex => "root-log-convex",
            Property::RootRatioLogConcave => "root-ratio-log-concave",
            Property::HigherTuran => "higher-turan",
            Property::Laguerre2 => "laguerre-2",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Property::LogConcave => "c(n)^2 >= c(n-1)c(n+1) at n+1",
            Property::RatioLogConvex => "r(n) r(n+2) >= r(n+1)^2 with r(n) = c(n+1)/c(n)",
            Property::RootLogConvex => "c(n)^(1/n) is log-convex at n+1",
            Property::RootRatioLogConcave => "c(n+1)^(1/(n+1)) / c(n)^(1/n) is log-concave",
            Property::HigherTuran => "higher Turan inequality",
            Property::Laguerre2 => "L_2(c(n)) >= 0",
        }
    }

    /// Coefficients used by the verdict at `n`: `c(n - before) ..= c(n + after)`.
    fn reach(self) -> (i64, i64) {
        match self {
            Property::LogConcave | Property::RootLogConvex => (0, 2),
            Property::RatioLogConvex => (0, 3),
            Property::RootRatioLogConcave | Property::HigherTuran => (1, 2),
            Property::Laguerre2 => (0, 4),
        }
    }

    /// Smallest index at which the verdict is formed for `c(n)`, `n >= -1`,
    /// excluding the root forms at `n <= 0`.
    pub fn first_index(self) -> i64 {
        match self {
            Property::LogConcave | Property::RatioLogConvex | Property::Laguerre2 => -1,
            Property::RootLogConvex => 1,
            Property::RootRatioLogConcave => 2,
            Property::HigherTuran => 0,
        }
    }

    /// Last coefficient index needed for verdicts through `hi`.
    pub fn needs(self, hi: i64) -> i64 {
        hi + self.reach().1
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Exact or certified verdicts of `prop` at each `n` in `range`.
pub fn direct_verdicts(
    prop: Property,
    table: &CoefficientTable,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> Result<Vec<PointVerdict>, VerifyError> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < prop.first_index() {
        return Err(VerifyError::Usage(format!("{prop} is formed for n >= {}", prop.first_index())));
    }
    if hi < lo {
        return Ok(Vec::new());
    }
    need(table, prop.needs(hi))?;
    let (before, after) = prop.reach();
    let w = SequenceWindow::from_table(table, lo - before, hi + after)?;
    let all = match prop {
        Property::LogConcave => checkers::check_log_concave(&w)?,
        Property::RatioLogConvex => checkers::check_ratio_log_convex(&w)?,
        Property::HigherTuran => checkers::check_higher_turan(&w)?,
        Property::Laguerre2 => checkers::check_laguerre(&w, 2)?,
        Property::RootLogConvex | Property::RootRatioLogConcave => {
            let points: Vec<i64> = range.clone().collect();
            par_map(points, |n| {
                let exact = n <= ROOT_EXACT_CROSSOVER;
                match (prop, exact) {
                    (Property::RootLogConvex, true) => checkers::root_log_convex_exact(&w, n),
                    (Property::RootLogConvex, false) => checkers::root_log_convex_ball(&w, n, policy),
                    (_, true) => checkers::root_ratio_log_concave_exact(&w, n),
                    (_, false) => checkers::root_ratio_log_concave_ball(&w, n, policy),
                }
            })
        }
    };
    Ok(all.into_iter().filter(|v| range.contains(&v.n)).collect())
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Strict | Verdict::Equality => Outcome::Pass,
        Verdict::Fails => Outcome::Fail,
        Verdict::Unresolved => Outcome::Unresolved,
    }
}

fn verdict_witness(prop: Property, v: &PointVerdict) -> Witness {
    let label = format!("{prop} at n={}", v.n);
    match &v.evidence {
        checkers::Evidence::Exact(x) => {
            let s = x.to_string();
            let short = if s.len() > 40 { format!("{}... ({} digits)", &s[..24], s.trim_start_matches('-').len()) } else { s };
            Witness::exact(label, short)
        }
        checkers::Evidence::Certified { enclosure: Some(b), .. } => Witness::ball(label, b),
        checkers::Evidence::Certified { enclosure: None, .. } => Witness::exact(label, "unavailable"),
    }
}

/// Entries for a direct check of `prop` over `range`.
pub fn direct_check(
    prop: Property,
    table: &CoefficientTable,
    range: RangeInclusive<i64>,
    policy: PrecisionPolicy,
) -> Result<CheckReport, VerifyError> {
    let verdicts = direct_verdicts(prop, table, range, policy)?;
    let mut r = CheckReport::new(prop.id(), prop.describe());
    let mut equalities = 0;
    for v in &verdicts {
        if v.verdict == Verdict::Equality {
            equalities += 1;
        }
        let mut e = Entry::at(v.n, verdict_outcome(v.verdict)).witness(verdict_witness(prop, v));
        if let Some(p) = v.precision_used() {
            e = e.precision(p);
        }
        r.push(e);
    }
    if equalities > 0 {
        r.finding("equalities", equalities);
    }
    Ok(r.finish())
}

/// Sign a criterion expression is expected to have at integer `n`, read off
/// the claimed root interval. `None` when `n` lies inside it.
fn expected_sign(expr: BracketExpr, n: i64) -> Option<Sign> {
    let claim = CLAIMS.iter().find(|c| c.expr == expr)?;
    if n >= claim.hi {
        Some(Sign::StrictlyPositive)
    } else if n <= claim.lo {
        Some(Sign::StrictlyNegative)
    } else {
        None
    }
}

fn bracket_exprs(kind: CriterionKind) -> Vec<BracketExpr> {
    match kind {
        CriterionKind::LogConcave => vec![BracketExpr::RatioGap],
        CriterionKind::HigherTuran => (0..4).map(BracketExpr::Turan).collect(),
        CriterionKind::Laguerre2 => vec![BracketExpr::Laguerre],
        CriterionKind::RootLogConvex | CriterionKind::RootRatioLogConcave => Vec::new(),
    }
}

fn criterion_probes(inst: &CriterionInstance, n: i64, policy: PrecisionPolicy) -> Vec<Probe> {
    match inst.certify(n, policy) {
        Ok(certs) => certs
            .into_iter()
            .map(|c| Probe {
                label: c.expr,
                sign: c.sign,
                precision: c.precision_used,
                enclosure: c.enclosure,
                error: None,
            })
            .collect(),
        Err(e) => vec![Probe {
            label: inst.kind.id().to_string(),
            sign: Sign::Inconclusive,
            precision: policy.start,
            enclosure: None,
            error: Some(e.to_string()),
        }],
    }
}

/// The criterion evaluated on integers in `range`. From the threshold on,
/// every expression must be positive; below it, each expression must have
/// the sign implied by its claimed root interval.
pub fn criterion_check(kind: CriterionKind, range: RangeInclusive<i64>, policy: PrecisionPolicy) -> CheckReport {
    let inst = CriterionInstance::j(kind);
    let lo = (*range.start()).max(kind.domain_min());
    let exprs = bracket_exprs(kind);
    let entries = par_map(lo..=*range.end(), |n| {
        let probes = criterion_probes(&inst, n, policy);
        let outcomes: Vec<Outcome> = probes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let want = if n >= kind.threshold() {
                    Some(Sign::StrictlyPositive)
                } else {
                    exprs.get(i).and_then(|&x| expected_sign(x, n))
                };
                match want {
                    Some(s) => p.expect(s),
                    None => Outcome::Pass,
                }
            })
            .collect();
        let mut e = Entry::at(n, combine(outcomes.iter().copied())).asserted(n >= kind.threshold() || !exprs.is_empty());
        for (p, o) in probes.iter().zip(&outcomes) {
            e = e.precision(p.precision).witness(p.witness());
            if *o != Outcome::Pass {
                e = e.note(format!("{} {o}", p.label));
            }
        }
        e
    });
    let mut r = CheckReport::new(format!("criterion-{}", kind.id()), format!("{kind} criterion, positive from n = {}", kind.threshold()));
    r.finding("threshold", kind.threshold());
    r.extend(entries);
    r.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    T31,
    T33,
    T35,
    T42,
    T44,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [TheoremId::T31, TheoremId::T33, TheoremId::T35, TheoremId::T42, TheoremId::T44];

    pub fn id(self) -> &'static str {
        match self {
            TheoremId::T31 => "theorem-3.1",
            TheoremId::T33 => "theorem-3.3",
            TheoremId::T35 => "theorem-3.5",
            TheoremId::T42 => "theorem-4.2",
            TheoremId::T44 => "theorem-4.4",
        }
    }

    pub fn criterion(self) -> CriterionKind {
        match self {
            TheoremId::T31 => CriterionKind::LogConcave,
            TheoremId::T33 => CriterionKind::RootLogConvex,
            TheoremId::T35 => CriterionKind::RootRatioLogConcave,
            TheoremId::T42 => CriterionKind::HigherTuran,
            TheoremId::T44 => CriterionKind::Laguerre2,
        }
    }

    /// Direct properties with the first index each is claimed from.
    pub fn properties(self) -> Vec<(Property, i64)> {
        match self {
            TheoremId::T31 => vec![(Property::LogConcave, 0), (Property::RatioLogConvex, 1)],
            TheoremId::T33 => vec![(Property::RootLogConvex, 1)],
            TheoremId::T35 => vec![(Property::RootRatioLogConcave, 2)],
            TheoremId::T42 => vec![(Property::HigherTuran, 2)],
            TheoremId::T44 => vec![(Property::Laguerre2, 1)],
        }
    }

    /// Last coefficient needed to run up to `n_max`.
    pub fn needs(self, n_max: i64) -> i64 {
        self.properties().iter().map(|(p, _)| p.needs(n_max)).max().unwrap_or(n_max)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TheoremId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<TheoremId, VerifyError> {
        let s = s.trim_start_matches("theorem-");
        TheoremId::ALL
            .into_iter()
            .find(|t| t.id().trim_start_matches("theorem-") == s)
            .ok_or_else(|| VerifyError::Usage(format!("unknown theorem {s:?}")))
    }
}

/// Runs the direct checks the theorem claims on `[first, n_max]` and the
/// criterion from its threshold, and records any index where the criterion
/// passes but the inequality it implies fails.
pub fn run_theorem(
    id: TheoremId,
    table: &CoefficientTable,
    n_max: i64,
    policy: PrecisionPolicy,
) -> Result<CheckReport, VerifyError> {
    need(table, id.needs(n_max))?;
    let kind = id.criterion();
    let inst = CriterionInstance::j(kind);
    let props = id.properties();
    // The first listed property is the one the criterion implies.
    let implied = props[0].0;
    let lo = props.iter().map(|&(_, from)| from).min().unwrap_or(1);
    let mut direct = Vec::new();
    for &(p, from) in &props {
        direct.push((p, direct_verdicts(p, table, from..=n_max, policy)?));
    }
    // Criterion index whose pass implies the direct verdict at `n`.
    let criterion_at = |n: i64| (kind.threshold()..=n + 2).find(|&m| kind.implied_index(m) == n);

    let entries = par_map(lo..=n_max, |n| {
        let mut outcomes = Vec::new();
        let mut e = Entry::at(n, Outcome::Pass);
        let mut implied_holds = None;
        for (p, vs) in &direct {
            if let Some(v) = vs.iter().find(|v| v.n == n) {
                let o = verdict_outcome(v.verdict);
                if *p == implied {
                    implied_holds = Some(o);
                }
                e = e.witness(verdict_witness(*p, v));
                if let Some(pr) = v.precision_used() {
                    e = e.precision(pr);
                }
                if o != Outcome::Pass {
                    e = e.note(format!("{p} {o}"));
                }
                outcomes.push(o);
            }
        }
        if let Some(m) = criterion_at(n) {
            let probes = criterion_probes(&inst, m, policy);
            let c = combine(probes.iter().map(Probe::positive));
            for pr in &probes {
                e = e.precision(pr.precision).witness(Witness {
                    label: format!("{} at n={m}", pr.label),
                    value: pr.witness().value,
                });
            }
            if c != Outcome::Pass {
                e = e.note(format!("criterion at n={m} {c}"));
            }
            if c == Outcome::Pass && implied_holds == Some(Outcome::Fail) {
                e = e.note(format!("soundness: criterion at n={m} passes but {implied} fails"));
            }
            outcomes.push(c);
        }
        Entry { outcome: combine(outcomes), ..e }
    });

    let mut r = CheckReport::new(
        id.id(),
        format!(
            "{} from the {kind} criterion (n >= {})",
            props.iter().map(|(p, from)| format!("{p} for n >= {from}")).collect::<Vec<_>>().join(" and "),
            kind.threshold()
        ),
    );
    r.finding("criterion-from", kind.threshold());
    let unsound = entries.iter().filter(|e| e.note.as_deref().is_some_and(|s| s.contains("soundness:"))).count();
    r.finding("soundness-counterexamples", unsound);
    r.extend(entries);
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{j_coefficients, Route};

    fn table(n: usize) -> CoefficientTable {
        j_coefficients(n, Route::EisensteinE4).unwrap()
    }

    #[test]
    fn direct_checks_hold_on_small_range() {
        let t = table(80);
        for p in Property::ALL {
            let lo = p.first_index().max(1);
            let r = direct_check(p, &t, lo..=60, PrecisionPolicy::default()).unwrap();
            assert_eq!(r.summary.fail, 0, "{p}: {:?}", r.entries.iter().find(|e| e.outcome == Outcome::Fail));
            assert_eq!(r.summary.unresolved, 0);
        }
    }

    #[test]
    fn ratio_log_convexity_fails_at_zero() {
        let t = table(10);
        let r = direct_check(Property::RatioLogConvex, &t, 0..=0, PrecisionPolicy::default()).unwrap();
        assert_eq!(r.entries[0].outcome, Outcome::Fail);
    }

    #[test]
    fn theorems_hold_to_sixty() {
        let t = table(80);
        for id in TheoremId::ALL {
            let r = run_theorem(id, &t, 60, PrecisionPolicy::default()).unwrap();
            assert!(r.is_clean(), "{id}: {:?}", r.entries.iter().find(|e| e.outcome != Outcome::Pass));
            assert_eq!(r.findings["soundness-counterexamples"], "0");
        }
    }

    #[test]
    fn turan_criterion_below_threshold_flags_the_qp_corner() {
        let r = criterion_check(CriterionKind::HigherTuran, 1..=4, PrecisionPolicy::default());
        let at = |n: i64| r.entries.iter().find(|e| e.n == Some(n)).unwrap();
        assert_eq!(at(1).outcome, Outcome::Pass);
        assert_eq!(at(2).outcome, Outcome::Fail);
        assert!(at(2).note.as_deref().unwrap().contains("t(q(n),p(n+1))"));
        assert_eq!(at(3).outcome, Outcome::Pass);
    }

    #[test]
    fn theorem_ids_parse() {
        assert_eq!("theorem-4.4".parse::<TheoremId>().unwrap(), TheoremId::T44);
        assert_eq!("3.1".parse::<TheoremId>().unwrap(), TheoremId::T31);
        assert!("9.9".parse::<TheoremId>().is_err());
    }
}
