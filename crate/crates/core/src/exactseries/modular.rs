//! Eisenstein series, the discriminant and the j-invariant.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::{series_inv, series_mul, series_pow, ExactSeries};
use super::table::{CoefficientTable, Route};
use super::SeriesError;

fn divisor_power_sum(n: i64, k: u32) -> Result<BigInt, SeriesError> {
    if n <= 0 {
        return Err(SeriesError::Domain(format!("divisor sum needs n >= 1, got {n}")));
    }
    let mut total = BigInt::zero();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            total += num_traits::pow(BigInt::from(d), k as usize);
            let e = n / d;
            if e != d {
                total += num_traits::pow(BigInt::from(e), k as usize);
            }
        }
        d += 1;
    }
    Ok(total)
}

pub fn sigma3(n: i64) -> Result<BigInt, SeriesError> {
    divisor_power_sum(n, 3)
}

pub fn sigma5(n: i64) -> Result<BigInt, SeriesError> {
    divisor_power_sum(n, 5)
}

/// `sigma_k(n)` for `0 <= n < len` by sieving; entry 0 is zero.
fn sigma_table(len: usize, k: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let dk = num_traits::pow(BigInt::from(d), k as usize);
        for m in (d..len).step_by(d) {
            out[m] += &dk;
        }
    }
    out
}

fn eisenstein(n_trunc: i64, k: u32, scale: i64) -> Result<ExactSeries, SeriesError> {
    if n_trunc < 1 {
        return Err(SeriesError::Domain(format!("truncation must be >= 1, got {n_trunc}")));
    }
    let len = n_trunc as usize;
    let scale = BigInt::from(scale);
    let mut coeffs = sigma_table(len, k);
    coeffs[0] = BigInt::one();
    for c in coeffs.iter_mut().skip(1) {
        *c *= &scale;
    }
    Ok(ExactSeries::new(0, coeffs))
}

/// `1 + 240 sum sigma_3(n) q^n`, exponents below `n_trunc`.
pub fn eisenstein_e4(n_trunc: i64) -> Result<ExactSeries, SeriesError> {
    eisenstein(n_trunc, 3, 240)
}

/// `1 - 504 sum sigma_5(n) q^n`, exponents below `n_trunc`.
pub fn eisenstein_e6(n_trunc: i64) -> Result<ExactSeries, SeriesError> {
    eisenstein(n_trunc, 5, -504)
}

/// `prod (1 - q^n)` with exponents below `len`, from the pentagonal number
/// theorem: the only nonzero coefficients sit at `m(3m-1)/2` with sign `(-1)^m`.
pub fn euler_product(len: usize) -> ExactSeries {
    let mut coeffs = vec![BigInt::zero(); len];
    let mut put = |e: i64, sign: i64| {
        if e >= 0 && (e as usize) < len {
            coeffs[e as usize] = BigInt::from(sign);
        }
    };
    put(0, 1);
    let mut m = 1i64;
    loop {
        let e1 = m * (3 * m - 1) / 2;
        if e1 as usize >= len {
            break;
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        put(e1, sign);
        put(m * (3 * m + 1) / 2, sign);
        m += 1;
    }
    ExactSeries::new(0, coeffs)
}

/// `q prod (1 - q^n)^24`, exponents below `n_trunc` (offset 1).
pub fn discriminant_delta(n_trunc: i64) -> Result<ExactSeries, SeriesError> {
    if n_trunc < 2 {
        return Err(SeriesError::Domain(format!("truncation must be >= 2, got {n_trunc}")));
    }
    let eta = euler_product((n_trunc - 1) as usize);
    Ok(series_pow(&eta, 24)?.shift(1))
}

/// `j` as a Laurent series with exponents `-1 ..= count - 1`.
pub fn j_series(count: usize, route: Route) -> Result<ExactSeries, SeriesError> {
    if count < 1 {
        return Err(SeriesError::Domain("need at least one coefficient".into()));
    }
    let n = count as i64;
    let inv_delta = series_inv(&discriminant_delta(n + 2)?)?;
    match route {
        Route::EisensteinE4 => {
            let e4 = eisenstein_e4(n + 1)?;
            let e4_cubed = series_pow(&e4, 3)?;
            Ok(series_mul(&e4_cubed, &inv_delta))
        }
        Route::EisensteinE6 => {
            let e6 = eisenstein_e6(n + 1)?;
            let e6_sq = series_mul(&e6, &e6);
            let mut j = series_mul(&e6_sq, &inv_delta).into_coeffs();
            j[1] += 1728;
            Ok(ExactSeries::new(-1, j))
        }
        Route::Cache => Err(SeriesError::Domain("the cache is not a computation route".into())),
    }
}

/// `c(-1) ..= c(count - 1)` along one route.
pub fn j_coefficients(count: usize, route: Route) -> Result<CoefficientTable, SeriesError> {
    let series = j_series(count, route)?;
    CoefficientTable::new(series.into_coeffs(), route)
}

/// Computes both routes concurrently and fails on the first disagreement.
pub fn j_coefficients_checked(count: usize) -> Result<CoefficientTable, SeriesError> {
    let (a, b) = rayon::join(
        || j_coefficients(count, Route::EisensteinE4),
        || j_coefficients(count, Route::EisensteinE6),
    );
    let (a, b) = (a?, b?);
    if let Some(n) = a.first_difference(&b) {
        return Err(SeriesError::RouteMismatch { n });
    }
    Ok(a)
}
