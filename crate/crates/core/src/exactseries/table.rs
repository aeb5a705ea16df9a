use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use serde::{Deserialize, Serialize};

use super::SeriesError;

/// Where a coefficient table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "eisenstein-E4")]
    EisensteinE4,
    #[serde(rename = "eisenstein-E6")]
    EisensteinE6,
    #[serde(rename = "cache")]
    Cache,
}

impl Route {
    pub fn tag(self) -> &'static str {
        match self {
            Route::EisensteinE4 => "eisenstein-E4",
            Route::EisensteinE6 => "eisenstein-E6",
            Route::Cache => "cache",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Route {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Route, SeriesError> {
        match s {
            "eisenstein-E4" => Ok(Route::EisensteinE4),
            "eisenstein-E6" => Ok(Route::EisensteinE6),
            "cache" => Ok(Route::Cache),
            other => Err(SeriesError::Domain(format!("unknown route tag {other:?}"))),
        }
    }
}

const KNOWN: [(i64, i64); 4] = [(-1, 1), (0, 744), (1, 196884), (2, 21493760)];

/// `c(-1), c(0), ..., c(count - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    values: Vec<BigInt>,
    source: Route,
}

impl CoefficientTable {
    /// `values[0]` is `c(-1)`. Rejects tables that contradict the known
    /// leading coefficients or contain a non-positive entry.
    pub fn new(values: Vec<BigInt>, source: Route) -> Result<CoefficientTable, SeriesError> {
        if values.is_empty() {
            return Err(SeriesError::Invariant("table has no c(-1) entry".into()));
        }
        for (n, expect) in KNOWN {
            if let Some(v) = values.get((n + 1) as usize) {
                if *v != BigInt::from(expect) {
                    return Err(SeriesError::Invariant(format!("c({n}) = {v}, expected {expect}")));
                }
            }
        }
        if let Some(i) = values.iter().position(|v| v.sign() != Sign::Plus) {
            return Err(SeriesError::Invariant(format!(
                "c({}) = {} is not positive",
                i as i64 - 1,
                values[i]
            )));
        }
        Ok(CoefficientTable { values, source })
    }

    pub fn source(&self) -> Route {
        self.source
    }

    pub fn with_source(mut self, source: Route) -> CoefficientTable {
        self.source = source;
        self
    }

    /// Number of entries with `n >= 0`.
    pub fn count(&self) -> usize {
        self.values.len() - 1
    }

    /// Largest `n` stored.
    pub fn max_n(&self) -> i64 {
        self.values.len() as i64 - 2
    }

    pub fn get(&self, n: i64) -> Option<&BigInt> {
        if n < -1 {
            return None;
        }
        self.values.get((n + 1) as usize)
    }

    /// `c(n)` for `n >= 0`, starting at `c(0)`.
    pub fn nonnegative(&self) -> &[BigInt] {
        &self.values[1..]
    }

    /// `(n, c(n))` from `n = -1` upward.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.values.iter().enumerate().map(|(i, v)| (i as i64 - 1, v))
    }

    /// Keeps `c(-1) ..= c(count - 1)`.
    pub fn prefix(&self, count: usize) -> CoefficientTable {
        let mut values = self.values.clone();
        values.truncate(count + 1);
        CoefficientTable { values, source: self.source }
    }

    /// First `n` where both tables are defined and differ, or where one of
    /// them stops early.
    pub fn first_difference(&self, other: &CoefficientTable) -> Option<i64> {
        let common = self.values.len().min(other.values.len());
        if let Some(i) = (0..common).find(|&i| self.values[i] != other.values[i]) {
            return Some(i as i64 - 1);
        }
        if self.values.len() != other.values.len() {
            return Some(common as i64 - 1);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(CoefficientTable::new(ints(&[1, 744, 196884]), Route::Cache).is_ok());
        assert!(CoefficientTable::new(ints(&[1, 745]), Route::Cache).is_err());
        assert!(CoefficientTable::new(ints(&[]), Route::Cache).is_err());
        let neg = ints(&[1, 744, 196884, 21493760, -5]);
        assert!(CoefficientTable::new(neg, Route::Cache).is_err());
    }

    #[test]
    fn indexing_from_minus_one() {
        let t = CoefficientTable::new(ints(&[1, 744, 196884]), Route::EisensteinE4).unwrap();
        assert_eq!(t.count(), 2);
        assert_eq!(t.max_n(), 1);
        assert_eq!(t.get(-2), None);
        assert_eq!(t.get(1), Some(&BigInt::from(196884)));
        assert_eq!(t.prefix(1).count(), 1);
        assert_eq!(t.first_difference(&t.prefix(1)), Some(1));
    }

    #[test]
    fn route_tags_round_trip() {
        for r in [Route::EisensteinE4, Route::EisensteinE6, Route::Cache] {
            assert_eq!(r.tag().parse::<Route>().unwrap(), r);
        }
        assert!("e4".parse::<Route>().is_err());
    }
}
