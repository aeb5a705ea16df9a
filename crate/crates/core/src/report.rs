//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{Ball, SignCertificate};

pub const SCHEMA: &str = "jseq-report/1";

/// Significant digits used for witness midpoints.
/// Non-pass entries listed per check in the text digest.
const TEXT_LISTED: usize = 8;

pub const WITNESS_DIGITS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unresolved,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    /// `mid +/- rad` in scientific notation, or an exact integer.
    pub value: String,
}

impl Witness {
    pub fn ball(label: impl Into<String>, b: &Ball) -> Witness {
        Witness { label: label.into(), value: b.to_decimal_string(WITNESS_DIGITS) }
    }

    pub fn exact(label: impl Into<String>, value: impl fmt::Display) -> Witness {
        Witness { label: label.into(), value: value.to_string() }
    }

    pub fn certificate(label: impl Into<String>, c: &SignCertificate) -> Witness {
        Witness { label: label.into(), value: c.witness(WITNESS_DIGITS) }
    }
}

/// One verdict of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<i64>,
    /// Real interval `[lo, hi]` for entries not tied to a single index.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub range: Option<[String; 2]>,
    /// Label distinguishing several entries at the same `n`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub item: Option<String>,
    pub outcome: Outcome,
    /// `false` when the property is only recorded here, not claimed (e.g.
    /// below a bound's stated range of validity).
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision_used: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Entry {
    pub fn at(n: i64, outcome: Outcome) -> Entry {
        Entry {
            n: Some(n),
            range: None,
            item: None,
            outcome,
            asserted: true,
            precision_used: None,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn over(lo: impl Into<String>, hi: impl Into<String>, outcome: Outcome) -> Entry {
        Entry { n: None, range: Some([lo.into(), hi.into()]), ..Entry::at(0, outcome) }
    }

    pub fn item(mut self, item: impl Into<String>) -> Entry {
        self.item = Some(item.into());
        self
    }

    pub fn asserted(mut self, asserted: bool) -> Entry {
        self.asserted = asserted;
        self
    }

    pub fn precision(mut self, p: u32) -> Entry {
        self.precision_used = Some(self.precision_used.map_or(p, |q| q.max(p)));
        self
    }

    pub fn witness(mut self, w: Witness) -> Entry {
        self.witnesses.push(w);
        self
    }

    /// Appends to the note, separated by `"; "`.
    pub fn note(mut self, note: impl Into<String>) -> Entry {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }

    /// Identity of the entry inside its check.
    pub fn key(&self) -> String {
        let mut k = match (&self.n, &self.range) {
            (Some(n), _) => format!("n={n}"),
            (None, Some([lo, hi])) => format!("[{lo}, {hi}]"),
            (None, None) => "-".to_string(),
        };
        if let Some(item) = &self.item {
            k.push_str(&format!(" {item}"));
        }
        k
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub entries: usize,
    /// Asserted entries by outcome.
    pub pass: usize,
    pub fail: usize,
    pub unresolved: usize,
    /// Entries recorded without being claimed.
    pub not_asserted: usize,
}

impl Summary {
    pub fn tally<'a>(entries: impl IntoIterator<Item = &'a Entry>) -> Summary {
        let mut s = Summary::default();
        for e in entries {
            s.entries += 1;
            if !e.asserted {
                s.not_asserted += 1;
                continue;
            }
            match e.outcome {
                Outcome::Pass => s.pass += 1,
                Outcome::Fail => s.fail += 1,
                Outcome::Unresolved => s.unresolved += 1,
            }
        }
        s
    }

    pub fn merge(self, other: Summary) -> Summary {
        Summary {
            entries: self.entries + other.entries,
            pass: self.pass + other.pass,
            fail: self.fail + other.fail,
            unresolved: self.unresolved + other.unresolved,
            not_asserted: self.not_asserted + other.not_asserted,
        }
    }
}

/// All entries produced by one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub description: String,
    /// Scalar results that are not per-entry verdicts, such as a discovered threshold.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub findings: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, description: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            description: description.into(),
            findings: BTreeMap::new(),
            notes: Vec::new(),
            entries: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, es: impl IntoIterator<Item = Entry>) {
        self.entries.extend(es);
    }

    pub fn finding(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.findings.insert(key.into(), value.to_string());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Recomputes the summary; call after the last entry is added.
    pub fn finish(mut self) -> CheckReport {
        self.summary = Summary::tally(&self.entries);
        self
    }

    /// Asserted entries with the given outcome.
    pub fn asserted_with(&self, outcome: Outcome) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(move |e| e.asserted && e.outcome == outcome)
    }

    pub fn is_clean(&self) -> bool {
        self.summary.fail == 0 && self.summary.unresolved == 0
    }
}

/// Wall-clock data, kept in one place so reports diff cleanly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamp {
    pub started: String,
    pub elapsed_ms: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
    /// Set when any asserted entry is unresolved.
    pub unresolved_warning: bool,
    pub timestamp: Timestamp,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, parameters: BTreeMap<String, serde_json::Value>) -> VerificationReport {
        VerificationReport {
            schema: SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            parameters,
            checks: Vec::new(),
            summary: Summary::default(),
            unresolved_warning: false,
            timestamp: Timestamp::default(),
        }
    }

    pub fn push(&mut self, check: CheckReport) {
        self.checks.push(check);
        self.refresh();
    }

    fn refresh(&mut self) {
        self.summary = self
            .checks
            .iter()
            .map(|c| c.summary)
            .fold(Summary::default(), Summary::merge);
        self.unresolved_warning = self.summary.unresolved > 0;
    }

    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// JSON with the timestamp block cleared, for byte comparisons.
    pub fn to_json_without_timestamp(&self) -> String {
        let mut r = self.clone();
        r.timestamp = Timestamp::default();
        r.to_json()
    }

    pub fn from_json(text: &str) -> Result<VerificationReport, ReportError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(SCHEMA) => {}
            Some(other) => return Err(ReportError::Schema(other.to_string())),
            None => return Err(ReportError::Schema("<missing>".to_string())),
        }
        Ok(serde_json::from_value(value)?)
    }

    /// One line per entry: `check,key,outcome,asserted,precision_used,witnesses`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,n,range,item,outcome,asserted,precision_used,witnesses\n");
        for c in &self.checks {
            for e in &c.entries {
                let witnesses: Vec<String> =
                    e.witnesses.iter().map(|w| format!("{}={}", w.label, w.value)).collect();
                let fields = [
                    c.check.clone(),
                    e.n.map(|n| n.to_string()).unwrap_or_default(),
                    e.range.as_ref().map(|[a, b]| format!("{a}..{b}")).unwrap_or_default(),
                    e.item.clone().unwrap_or_default(),
                    e.outcome.to_string(),
                    e.asserted.to_string(),
                    e.precision_used.map(|p| p.to_string()).unwrap_or_default(),
                    witnesses.join("; "),
                ];
                let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        out
    }

    /// Human-readable digest: one line per check plus every non-pass entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let s = c.summary;
            out.push_str(&format!(
                "{:<28} pass {:>5}  fail {:>4}  unresolved {:>4}  not-asserted {:>4}\n",
                c.check, s.pass, s.fail, s.unresolved, s.not_asserted
            ));
            for (k, v) in &c.findings {
                out.push_str(&format!("    {k} = {v}\n"));
            }
            let bad: Vec<&Entry> = c.entries.iter().filter(|e| e.asserted && e.outcome != Outcome::Pass).collect();
            for e in bad.iter().take(TEXT_LISTED) {
                out.push_str(&format!("    {} {}", e.outcome, e.key()));
                if let Some(note) = &e.note {
                    out.push_str(&format!(": {note}"));
                }
                out.push('\n');
            }
            if bad.len() > TEXT_LISTED {
                let last = bad[bad.len() - 1];
                out.push_str(&format!("    ... {} more, the last at {}\n", bad.len() - TEXT_LISTED, last.key()));
            }
            for note in &c.notes {
                out.push_str(&format!("    note: {note}\n"));
            }
        }
        let s = self.summary;
        out.push_str(&format!(
            "total: {} entries, pass {}, fail {}, unresolved {}, not asserted {}\n",
            s.entries, s.pass, s.fail, s.unresolved, s.not_asserted
        ));
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported report schema {0:?}")]
    Schema(String),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffLine {
    OutcomeChanged { check: String, key: String, before: Outcome, after: Outcome },
    AssertionChanged { check: String, key: String, before: bool, after: bool },
    OnlyInFirst { check: String, key: String },
    OnlyInSecond { check: String, key: String },
    /// Informational: does not make the outcomes differ.
    PrecisionChanged { check: String, key: String, before: Option<u32>, after: Option<u32> },
}

impl DiffLine {
    pub fn is_outcome_difference(&self) -> bool {
        !matches!(self, DiffLine::PrecisionChanged { .. })
    }
}

impl fmt::Display for DiffLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |x: &Option<u32>| x.map_or("-".to_string(), |v| v.to_string());
        match self {
            DiffLine::OutcomeChanged { check, key, before, after } => {
                write!(f, "outcome {check} {key}: {before} -> {after}")
            }
            DiffLine::AssertionChanged { check, key, before, after } => {
                write!(f, "asserted {check} {key}: {before} -> {after}")
            }
            DiffLine::OnlyInFirst { check, key } => write!(f, "removed {check} {key}"),
            DiffLine::OnlyInSecond { check, key } => write!(f, "added {check} {key}"),
            DiffLine::PrecisionChanged { check, key, before, after } => {
                write!(f, "precision {check} {key}: {} -> {}", p(before), p(after))
            }
        }
    }
}

/// Entry-by-entry comparison keyed on check id and entry key.
pub fn diff(a: &VerificationReport, b: &VerificationReport) -> Vec<DiffLine> {
    type Key = (String, String);
    let index = |r: &VerificationReport| -> BTreeMap<Key, Entry> {
        r.checks
            .iter()
            .flat_map(|c| c.entries.iter().map(move |e| ((c.check.clone(), e.key()), e.clone())))
            .collect()
    };
    let (ia, ib) = (index(a), index(b));
    let mut out = Vec::new();
    for ((check, key), ea) in &ia {
        let Some(eb) = ib.get(&(check.clone(), key.clone())) else {
            out.push(DiffLine::OnlyInFirst { check: check.clone(), key: key.clone() });
            continue;
        };
        if ea.outcome != eb.outcome {
            out.push(DiffLine::OutcomeChanged {
                check: check.clone(),
                key: key.clone(),
                before: ea.outcome,
                after: eb.outcome,
            });
        }
        if ea.asserted != eb.asserted {
            out.push(DiffLine::AssertionChanged {
                check: check.clone(),
                key: key.clone(),
                before: ea.asserted,
                after: eb.asserted,
            });
        }
        if ea.precision_used != eb.precision_used {
            out.push(DiffLine::PrecisionChanged {
                check: check.clone(),
                key: key.clone(),
                before: ea.precision_used,
                after: eb.precision_used,
            });
        }
    }
    for (check, key) in ib.keys() {
        if !ia.contains_key(&(check.clone(), key.clone())) {
            out.push(DiffLine::OnlyInSecond { check: check.clone(), key: key.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut c = CheckReport::new("demo", "demo check");
        c.push(Entry::at(1, Outcome::Pass).precision(128));
        c.push(Entry::at(2, Outcome::Fail).asserted(false));
        c.push(Entry::at(3, Outcome::Unresolved).item("x"));
        c.finding("n_star", 16);
        let mut r = VerificationReport::new("verify", BTreeMap::new());
        r.push(c.finish());
        r
    }

    #[test]
    fn summary_matches_tallies() {
        let r = sample();
        let s = r.summary;
        assert_eq!((s.entries, s.pass, s.fail, s.unresolved, s.not_asserted), (3, 1, 0, 1, 1));
        assert!(r.unresolved_warning);
    }

    #[test]
    fn json_round_trip_and_schema_guard() {
        let r = sample();
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let wrong = r.to_json().replace(SCHEMA, "jseq-report/0");
        assert!(matches!(VerificationReport::from_json(&wrong), Err(ReportError::Schema(_))));
        assert!(VerificationReport::from_json("{").is_err());
    }

    #[test]
    fn diff_separates_outcomes_from_precision() {
        let a = sample();
        assert!(diff(&a, &a).is_empty());
        let mut b = a.clone();
        b.checks[0].entries[0].precision_used = Some(256);
        let d = diff(&a, &b);
        assert_eq!(d.len(), 1);
        assert!(!d[0].is_outcome_difference());
        b.checks[0].entries[2].outcome = Outcome::Pass;
        let d = diff(&a, &b);
        assert!(d.iter().any(|l| l.is_outcome_difference()));
        assert!(d.iter().any(|l| l.to_string().contains("n=3 x")));
    }

    #[test]
    fn csv_has_one_row_per_entry() {
        let csv = sample().to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("demo,2,,,fail,false,,"));
    }
}
