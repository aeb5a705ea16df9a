//! Exact q-series for the j-invariant and its Fourier coefficients.

mod cache;
mod modular;
mod series;
mod table;

use thiserror::Error;

pub use cache::{cache_load, cache_store, decode as decode_cache, encode as encode_cache, lock_path, CacheError};
pub use modular::{
    discriminant_delta, eisenstein_e4, eisenstein_e6, euler_product, j_coefficients,
    j_coefficients_checked, j_series, sigma3, sigma5,
};
pub use series::{mul_dense, series_inv, series_mul, series_pow, ExactSeries, KARATSUBA_THRESHOLD};
pub use table::{CoefficientTable, Route};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("routes disagree at c({n})")]
    RouteMismatch { n: i64 },
    #[error("coefficient table invariant violated: {0}")]
    Invariant(String),
}
