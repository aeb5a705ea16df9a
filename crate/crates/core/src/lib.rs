//! Exact coefficients of the j-invariant and certified checks of bounds
//! and inequalities they satisfy.

pub mod ball;
pub mod bounds;
pub mod certify;
pub mod checkers;
pub mod criteria;
pub mod exactseries;
pub mod report;
pub mod suite;

use thiserror::Error;

pub use ball::{Ball, BallError, PrecisionPolicy, Sign, SignCertificate};
pub use exactseries::{CoefficientTable, ExactSeries, Route, SeriesError};
pub use report::{CheckReport, Entry, Outcome, VerificationReport};
pub use suite::CheckId;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("coefficient c({n}) is not available (table ends at c({max}))")]
    MissingCoefficient { n: i64, max: i64 },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Checker(#[from] checkers::CheckerError),
    #[error(transparent)]
    Cache(#[from] exactseries::CacheError),
}
