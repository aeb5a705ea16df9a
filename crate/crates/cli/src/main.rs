//! `jseq`: compute Fourier coefficients of the j-invariant and verify
//! bounds and inequalities they satisfy.

mod table;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use jseq_core::report::{diff, ReportError};
use jseq_core::suite::{parse_selection, run_check, table_count, CheckId};
use jseq_core::{PrecisionPolicy, SeriesError, VerificationReport, VerifyError};

use table::Origin;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> CliError {
        match e {
            VerifyError::Usage(s) => CliError::Usage(s),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "jseq", version)]
#[command(about = "exact j-invariant coefficients with certified inequality checks")]
struct Cli {
    /// Coefficient cache file.
    #[arg(long, global = true, env = "JSEQ_CACHE")]
    cache: Option<PathBuf>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute c(n) along both routes and print it
    Compute {
        /// Print only c(n).
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,

        /// Compute the table through c(n_max) and print it.
        #[arg(long)]
        n_max: Option<i64>,
    },

    /// Run checks and print a report
    Verify {
        /// Check id, comma-separated ids, or `all`.
        #[arg(long, default_value = "all")]
        check: String,

        #[arg(long, default_value_t = 200)]
        n_max: i64,

        #[arg(long, default_value_t = 128)]
        precision_start: u32,

        #[arg(long, default_value_t = 4096)]
        precision_max: u32,

        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,

        /// Also write the report here.
        #[arg(long)]
        output: Option<PathBuf>,

        /// Treat unresolved entries as failures.
        #[arg(long)]
        strict: bool,
    },

    /// Compare the outcomes of two JSON reports
    ReportDiff { first: PathBuf, second: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Validated settings of one `verify` run.
#[derive(Debug, Clone)]
struct RunConfig {
    n_max: i64,
    policy: PrecisionPolicy,
    checks: Vec<CheckId>,
    selection: String,
    strict: bool,
}

impl RunConfig {
    fn new(check: &str, n_max: i64, p0: u32, pmax: u32, strict: bool) -> Result<RunConfig, CliError> {
        if n_max < 1 {
            return Err(CliError::Usage(format!("--n-max must be at least 1, got {n_max}")));
        }
        if p0 < 16 {
            return Err(CliError::Usage(format!("--precision-start must be at least 16 bits, got {p0}")));
        }
        if p0 > pmax {
            return Err(CliError::Usage(format!("--precision-start {p0} exceeds --precision-max {pmax}")));
        }
        let checks = parse_selection(check)?;
        for c in &checks {
            if n_max < c.min_n_max() {
                return Err(CliError::Usage(format!(
                    "{c} is only claimed for n >= {}; --n-max {n_max} is below valid_from",
                    c.min_n_max()
                )));
            }
        }
        Ok(RunConfig { n_max, policy: PrecisionPolicy::new(p0, pmax), checks, selection: check.to_string(), strict })
    }

    fn parameters(&self) -> BTreeMap<String, serde_json::Value> {
        let mut p = BTreeMap::new();
        p.insert("check".into(), self.selection.clone().into());
        p.insert("n_max".into(), self.n_max.into());
        p.insert("precision_start".into(), self.policy.start.into());
        p.insert("precision_max".into(), self.policy.max.into());
        p.insert("strict".into(), self.strict.into());
        p
    }
}

fn note_origin(origin: &Origin, count: usize) {
    match origin {
        Origin::Cache => eprintln!("loaded {count} coefficients from cache"),
        Origin::Computed => eprintln!("computed {count} coefficients along both routes"),
        Origin::Recomputed(why) => eprintln!("warning: cache rejected ({why}); recomputed {count} coefficients"),
    }
}

fn compute(n: Option<i64>, n_max: Option<i64>, cache: Option<PathBuf>) -> Result<u8, CliError> {
    if n.is_none() && n_max.is_none() {
        return Err(CliError::Usage("compute needs --n or --n-max".into()));
    }
    if let Some(n) = n.filter(|&n| n < -1) {
        return Err(CliError::Usage(format!("c(n) is zero below n = -1, got {n}")));
    }
    if let Some(m) = n_max.filter(|&m| m < 0) {
        return Err(CliError::Usage(format!("--n-max must be nonnegative, got {m}")));
    }
    let top = n.unwrap_or(0).max(n_max.unwrap_or(0));
    let count = (top + 1) as usize;
    let (t, origin) = table::obtain(count, cache.as_deref())?;
    note_origin(&origin, count);
    match n {
        Some(n) => println!("{}", t.get(n).expect("table covers the request")),
        None => {
            let mut out = String::new();
            for (k, v) in t.iter().filter(|(k, _)| *k >= 0 && *k <= top) {
                out.push_str(&format!("{k}\t{v}\n"));
            }
            print!("{out}");
        }
    }
    Ok(0)
}

fn verify(cfg: RunConfig, format: Format, output: Option<PathBuf>, cache: Option<PathBuf>) -> Result<u8, CliError> {
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let mut report = VerificationReport::new("verify", cfg.parameters());
    report.timestamp.started = started;

    let count = table_count(&cfg.checks, cfg.n_max);
    let clock = Instant::now();
    let (table, origin) = table::obtain(count.max(3), cache.as_deref())?;
    note_origin(&origin, count.max(3));
    report.timestamp.elapsed_ms.insert("coefficients-table".into(), clock.elapsed().as_millis() as u64);

    for id in &cfg.checks {
        let clock = Instant::now();
        for r in run_check(*id, &table, cfg.n_max, cfg.policy)? {
            report.push(r);
        }
        report.timestamp.elapsed_ms.insert(id.id(), clock.elapsed().as_millis() as u64);
    }

    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    if let Some(path) = &output {
        fs::write(path, &text).map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
    }
    print!("{text}");

    let s = report.summary;
    if s.unresolved > 0 {
        eprintln!("warning: {} unresolved entries", s.unresolved);
    }
    eprintln!("pass {}, fail {}, unresolved {}, not asserted {}", s.pass, s.fail, s.unresolved, s.not_asserted);
    Ok(if s.fail > 0 || (cfg.strict && s.unresolved > 0) { 1 } else { 0 })
}

fn report_diff(first: PathBuf, second: PathBuf) -> Result<u8, CliError> {
    let read = |p: &PathBuf| -> Result<VerificationReport, CliError> {
        let text = fs::read_to_string(p).map_err(|e| CliError::Runtime(format!("reading {}: {e}", p.display())))?;
        VerificationReport::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
    };
    let (a, b) = (read(&first)?, read(&second)?);
    let lines = diff(&a, &b);
    for l in &lines {
        println!("{l}");
    }
    Ok(if lines.iter().any(|l| l.is_outcome_difference()) { 1 } else { 0 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(k) = cli.jobs {
        if k == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Compute { n, n_max } => compute(n, n_max, cli.cache),
        Command::Verify { check, n_max, precision_start, precision_max, format, output, strict } => {
            let cfg = RunConfig::new(&check, n_max, precision_start, precision_max, strict)?;
            verify(cfg, format, output, cli.cache)
        }
        Command::ReportDiff { first, second } => report_diff(first, second),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
