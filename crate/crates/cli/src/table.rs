//! Coefficient tables: from the cache when it covers the request,
//! otherwise computed along both routes and written back.

use std::path::Path;

use jseq_core::exactseries::{cache_load, cache_store, j_coefficients_checked};
use jseq_core::CoefficientTable;

use crate::CliError;

/// Where a table came from, for the diagnostics on stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Cache,
    Computed,
    /// The cache was unreadable or failed its integrity check and was replaced.
    Recomputed(String),
}

/// `c(-1) ..= c(count - 1)`.
pub fn obtain(count: usize, cache: Option<&Path>) -> Result<(CoefficientTable, Origin), CliError> {
    let mut origin = Origin::Computed;
    if let Some(path) = cache.filter(|p| p.exists()) {
        match cache_load(path) {
            Ok(t) if t.count() >= count => return Ok((t.prefix(count), Origin::Cache)),
            Ok(_) => {}
            Err(e) => origin = Origin::Recomputed(e.to_string()),
        }
    }
    let table = j_coefficients_checked(count.max(1))?;
    if let Some(path) = cache {
        cache_store(&table, path).map_err(|e| CliError::Runtime(format!("writing cache {}: {e}", path.display())))?;
    }
    Ok((table, origin))
}
