//! On-disk coefficient cache.
//!
//! ```text
//! jseq-cache v1 N=<count> route=<tag> sha256=<hex of payload>
//! -1	1
//! 0	744
//! ...
//! ```
//!
//! The payload is every byte after the header line. Writers take an
//! exclusive `<path>.lock` file and publish through an atomic rename, so
//! readers never see a partial file.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::table::{CoefficientTable, Route};

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cache integrity error: checksum {actual} does not match header {expected}")]
    Integrity { expected: String, actual: String },
    #[error("cache contents rejected: {0}")]
    Invalid(String),
    #[error("cache {path} is locked by another writer")]
    Locked { path: PathBuf },
    #[error("cache i/o error: {0}")]
    Io(#[from] io::Error),
}

const MAGIC: &str = "jseq-cache";
const VERSION: &str = "v1";

fn payload(table: &CoefficientTable) -> String {
    let mut out = String::new();
    for (n, v) in table.iter() {
        out.push_str(&format!("{n}\t{v}\n"));
    }
    out
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Renders a table in cache format.
pub fn encode(table: &CoefficientTable) -> String {
    let body = payload(table);
    format!(
        "{MAGIC} {VERSION} N={} route={} sha256={}\n{body}",
        table.count(),
        table.source().tag(),
        digest(body.as_bytes())
    )
}

fn parse_err(line: usize, message: impl Into<String>) -> CacheError {
    CacheError::Parse { line, message: message.into() }
}

struct Header {
    count: usize,
    route: Route,
    sha256: String,
}

fn parse_header(line: &str) -> Result<Header, CacheError> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 5 || fields[0] != MAGIC {
        return Err(parse_err(1, "missing or malformed header"));
    }
    if fields[1] != VERSION {
        return Err(parse_err(1, format!("unsupported version {}", fields[1])));
    }
    let value = |field: &str, key: &str| -> Result<String, CacheError> {
        field
            .strip_prefix(key)
            .map(str::to_string)
            .ok_or_else(|| parse_err(1, format!("expected {key}...")))
    };
    let count = value(fields[2], "N=")?
        .parse::<usize>()
        .map_err(|_| parse_err(1, "N is not a count"))?;
    let route = value(fields[3], "route=")?
        .parse::<Route>()
        .map_err(|e| parse_err(1, e.to_string()))?;
    let sha256 = value(fields[4], "sha256=")?;
    if sha256.len() != 64 || !sha256.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(parse_err(1, "sha256 is not 64 hex digits"));
    }
    Ok(Header { count, route, sha256: sha256.to_ascii_lowercase() })
}

fn canonical_integer(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
}

/// Parses cache text. The table keeps the route recorded in the header.
pub fn decode(text: &str) -> Result<CoefficientTable, CacheError> {
    let (header_line, body) = match text.split_once('\n') {
        Some(parts) => parts,
        None if text.is_empty() => return Err(parse_err(1, "empty file")),
        None => return Err(parse_err(1, "header is not terminated")),
    };
    let header = parse_header(header_line)?;
    let mut values = Vec::with_capacity(header.count + 1);
    let mut lines = body.split('\n').enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        let lineno = i + 2;
        if line.is_empty() && lines.peek().is_none() {
            break;
        }
        let (n, v) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(lineno, "expected <n><TAB><value>"))?;
        let expect_n = values.len() as i64 - 1;
        if n.parse::<i64>().ok() != Some(expect_n) || !canonical_integer(n) {
            return Err(parse_err(lineno, format!("expected index {expect_n}, found {n:?}")));
        }
        if !canonical_integer(v) || v.starts_with('-') {
            return Err(parse_err(lineno, format!("malformed coefficient {v:?}")));
        }
        values.push(v.parse::<BigInt>().map_err(|e| parse_err(lineno, e.to_string()))?);
    }
    if !body.is_empty() && !body.ends_with('\n') {
        return Err(parse_err(values.len() + 1, "last line is not terminated"));
    }
    if values.len() != header.count + 1 {
        return Err(parse_err(
            values.len() + 2,
            format!("header declares N={} but {} entries follow", header.count, values.len()),
        ));
    }
    let actual = digest(body.as_bytes());
    if actual != header.sha256 {
        return Err(CacheError::Integrity { expected: header.sha256, actual });
    }
    CoefficientTable::new(values, header.route).map_err(|e| CacheError::Invalid(e.to_string()))
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

pub fn lock_path(path: &Path) -> PathBuf {
    sibling(path, ".lock")
}

/// Writes `table` to `path`. Fails with [`CacheError::Locked`] if another
/// writer holds the lock.
pub fn cache_store(table: &CoefficientTable, path: &Path) -> Result<(), CacheError> {
    let lock = lock_path(path);
    match OpenOptions::new().write(true).create_new(true).open(&lock) {
        Ok(mut f) => {
            let _ = writeln!(f, "{}", std::process::id());
        }
        Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
            return Err(CacheError::Locked { path: path.to_path_buf() });
        }
        Err(e) => return Err(e.into()),
    }
    let _guard = LockGuard(lock);
    let tmp = sibling(path, ".tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(encode(table).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a cache file. The returned table is tagged [`Route::Cache`].
pub fn cache_load(path: &Path) -> Result<CoefficientTable, CacheError> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let line = 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        parse_err(line, "invalid UTF-8")
    })?;
    Ok(decode(&text)?.with_source(Route::Cache))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::j_coefficients;

    fn table(n: usize) -> CoefficientTable {
        j_coefficients(n, Route::EisensteinE4).unwrap()
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cache");
        let t = table(100);
        cache_store(&t, &path).unwrap();
        let back = cache_load(&path).unwrap();
        assert_eq!(back.first_difference(&t), None);
        assert_eq!(back.source(), Route::Cache);
        assert!(!lock_path(&path).exists());
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("jseq-cache v1 N=100 route=eisenstein-E4 sha256="));
        assert!(text.contains("\n-1\t1\n0\t744\n1\t196884\n2\t21493760\n"));
    }

    #[test]
    fn altered_digit_is_an_integrity_error() {
        let text = encode(&table(10)).replace("196884", "196885");
        assert!(matches!(decode(&text), Err(CacheError::Integrity { .. })));
    }

    #[test]
    fn empty_and_truncated_files_are_parse_errors() {
        assert!(matches!(decode(""), Err(CacheError::Parse { line: 1, .. })));
        let text = encode(&table(10));
        let cut: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(decode(&cut), Err(CacheError::Parse { .. })));
        let garbled = text.replacen("0\t744", "0 744", 1);
        assert!(matches!(decode(&garbled), Err(CacheError::Parse { line: 3, .. })));
        let leading_zero = text.replacen("0\t744", "0\t0744", 1);
        assert!(matches!(decode(&leading_zero), Err(CacheError::Parse { line: 3, .. })));
    }

    #[test]
    fn consistent_but_wrong_values_are_rejected() {
        let t = CoefficientTable::new(vec![1.into(), 744.into(), 196884.into()], Route::Cache).unwrap();
        let text = encode(&t);
        let body_start = text.find('\n').unwrap() + 1;
        let body = text[body_start..].replace("744", "745");
        let forged = format!(
            "jseq-cache v1 N=2 route=cache sha256={}\n{body}",
            digest(body.as_bytes())
        );
        assert!(matches!(decode(&forged), Err(CacheError::Invalid(_))));
    }

    #[test]
    fn held_lock_blocks_writers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cache");
        fs::write(lock_path(&path), "other").unwrap();
        assert!(matches!(cache_store(&table(3), &path), Err(CacheError::Locked { .. })));
        fs::remove_file(lock_path(&path)).unwrap();
        cache_store(&table(3), &path).unwrap();
    }
}
