//! Turning sign certificates into report verdicts.

use num_bigint::BigInt;

use crate::ball::{certify_sign, Ball, BallError, PrecisionPolicy, Sign};
use crate::exactseries::CoefficientTable;
use crate::report::{Entry, Outcome, Witness};
use crate::VerifyError;

/// One certified sign determination, ready for a report.
#[derive(Clone, Debug)]
pub struct Probe {
    pub label: String,
    pub sign: Sign,
    pub precision: u32,
    pub enclosure: Option<Ball>,
    /// Set when evaluation hit a definite domain violation.
    pub error: Option<String>,
}

impl Probe {
    /// Outcome of the claim "this expression is strictly positive".
    pub fn positive(&self) -> Outcome {
        self.expect(Sign::StrictlyPositive)
    }

    pub fn expect(&self, want: Sign) -> Outcome {
        if self.error.is_some() {
            return Outcome::Fail;
        }
        match self.sign {
            Sign::Inconclusive => Outcome::Unresolved,
            s if s == want => Outcome::Pass,
            _ => Outcome::Fail,
        }
    }

    pub fn witness(&self) -> Witness {
        match (&self.enclosure, &self.error) {
            (_, Some(e)) => Witness::exact(&self.label, format!("error: {e}")),
            (Some(b), None) => Witness::ball(&self.label, b),
            (None, None) => Witness::exact(&self.label, "unavailable"),
        }
    }
}

/// Certifies the sign of `eval` at doubling precision.
pub fn probe<F>(label: &str, n: i64, policy: PrecisionPolicy, eval: F) -> Probe
where
    F: Fn(u32) -> Result<Ball, BallError>,
{
    match certify_sign(label, n, policy, eval) {
        Ok(c) => Probe {
            label: label.to_string(),
            sign: c.sign,
            precision: c.precision_used,
            enclosure: c.enclosure,
            error: None,
        },
        Err(e) => Probe {
            label: label.to_string(),
            sign: Sign::Inconclusive,
            precision: policy.start,
            enclosure: None,
            error: Some(e.to_string()),
        },
    }
}

/// Fail dominates unresolved, which dominates pass.
pub fn combine(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    let mut out = Outcome::Pass;
    for o in outcomes {
        match o {
            Outcome::Fail => return Outcome::Fail,
            Outcome::Unresolved => out = Outcome::Unresolved,
            Outcome::Pass => {}
        }
    }
    out
}

/// Entry for a positivity claim about a single probe.
pub fn positive_entry(n: i64, p: &Probe) -> Entry {
    let mut e = Entry::at(n, p.positive()).precision(p.precision).witness(p.witness());
    if let Some(err) = &p.error {
        e = e.note(err.clone());
    }
    e
}

/// Entry for a probe expected to have sign `want`.
pub fn sign_entry(n: i64, p: &Probe, want: Sign) -> Entry {
    Entry { outcome: p.expect(want), ..positive_entry(n, p) }
}

/// Entry claiming every probe is strictly positive.
pub fn all_positive_entry(n: i64, probes: &[Probe]) -> Entry {
    let outcome = combine(probes.iter().map(Probe::positive));
    let mut e = Entry::at(n, outcome);
    for p in probes {
        e = e.precision(p.precision).witness(p.witness());
    }
    let failing: Vec<String> = probes
        .iter()
        .filter(|p| p.positive() != Outcome::Pass)
        .map(|p| match &p.error {
            Some(err) => format!("{} ({err})", p.label),
            None => format!("{} {}", p.label, p.positive()),
        })
        .collect();
    if !failing.is_empty() {
        e = e.note(failing.join(", "));
    }
    e
}

/// Fails early when the table stops before `c(hi)`.
pub fn need(table: &CoefficientTable, hi: i64) -> Result<(), VerifyError> {
    if table.max_n() < hi {
        return Err(VerifyError::MissingCoefficient { n: hi, max: table.max_n() });
    }
    Ok(())
}

/// `c(n)`, which [`need`] has already checked is present.
pub fn coeff(table: &CoefficientTable, n: i64) -> &BigInt {
    table.get(n).expect("coefficient range checked")
}

/// Runs `f` for each `n` in parallel, keeping the order of `ns`.
pub fn par_map<T, F>(ns: impl IntoIterator<Item = i64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let ns: Vec<i64> = ns.into_iter().collect();
    ns.into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes_follow_signs() {
        let pol = PrecisionPolicy::new(64, 128);
        let pos = probe("one", 0, pol, |p| Ok(Ball::one(p)));
        let neg = probe("minus", 0, pol, |p| Ok(Ball::from_i64(-1, p)));
        let zero = probe("zero", 0, pol, |p| Ok(Ball::zero(p)));
        let err = probe("log", 0, pol, |p| Ball::from_i64(-1, p).log());
        assert_eq!(pos.positive(), Outcome::Pass);
        assert_eq!(neg.positive(), Outcome::Fail);
        assert_eq!(neg.expect(Sign::StrictlyNegative), Outcome::Pass);
        assert_eq!(zero.positive(), Outcome::Unresolved);
        assert_eq!(err.positive(), Outcome::Fail);
        assert_eq!(combine([Outcome::Pass, Outcome::Unresolved]), Outcome::Unresolved);
        assert_eq!(combine([Outcome::Unresolved, Outcome::Fail]), Outcome::Fail);
        assert_eq!(combine([]), Outcome::Pass);
    }

    #[test]
    fn par_map_keeps_order() {
        assert_eq!(par_map(0..100, |n| n * 2), (0..100).map(|n| n * 2).collect::<Vec<_>>());
    }
}
