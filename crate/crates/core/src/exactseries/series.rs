//! Truncated Laurent series with big-integer coefficients.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::SeriesError;

/// Below this many terms a product is computed by schoolbook convolution;
/// above it the product splits Karatsuba-style.
pub const KARATSUBA_THRESHOLD: usize = 64;

/// `sum_{i} coeffs[i] q^(offset + i)`, known exactly for exponents below
/// `offset + coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSeries {
    offset: i64,
    coeffs: Vec<BigInt>,
}

impl ExactSeries {
    pub fn new(offset: i64, coeffs: Vec<BigInt>) -> ExactSeries {
        ExactSeries { offset, coeffs }
    }

    pub fn from_i64s(offset: i64, coeffs: &[i64]) -> ExactSeries {
        ExactSeries::new(offset, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The constant series 1 with the given truncation.
    pub fn one(truncation: i64) -> ExactSeries {
        let len = truncation.max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        if let Some(c) = coeffs.first_mut() {
            *c = BigInt::one();
        }
        ExactSeries::new(0, coeffs)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// First exponent whose coefficient is not known.
    pub fn truncation(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^exp`, if it lies within the known range.
    pub fn coeff(&self, exp: i64) -> Option<&BigInt> {
        if exp < self.offset {
            return None;
        }
        self.coeffs.get((exp - self.offset) as usize)
    }

    /// Drops every coefficient at or beyond `truncation`.
    pub fn truncate(mut self, truncation: i64) -> ExactSeries {
        let keep = (truncation - self.offset).clamp(0, self.coeffs.len() as i64) as usize;
        self.coeffs.truncate(keep);
        self
    }

    /// Multiplies by `q^k`.
    pub fn shift(mut self, k: i64) -> ExactSeries {
        self.offset += k;
        self
    }

    pub fn scale(&self, k: &BigInt) -> ExactSeries {
        ExactSeries::new(self.offset, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Sum truncated at the smaller truncation of the two inputs.
    pub fn add(&self, other: &ExactSeries) -> ExactSeries {
        let offset = self.offset.min(other.offset);
        let trunc = self.truncation().min(other.truncation());
        let len = (trunc - offset).max(0) as usize;
        let coeffs = (0..len)
            .map(|i| {
                let e = offset + i as i64;
                let zero = BigInt::zero();
                // Exponents below a series' offset are zero in that series.
                let a = if e < self.offset { &zero } else { self.coeff(e).unwrap_or(&zero) };
                let b = if e < other.offset { &zero } else { other.coeff(e).unwrap_or(&zero) };
                a + b
            })
            .collect();
        ExactSeries::new(offset, coeffs)
    }

    pub fn neg(&self) -> ExactSeries {
        ExactSeries::new(self.offset, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &ExactSeries) -> ExactSeries {
        self.add(&other.neg())
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn add_into(dst: &mut [BigInt], src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn sum_halves(lo: &[BigInt], hi: &[BigInt]) -> Vec<BigInt> {
    let n = lo.len().max(hi.len());
    (0..n)
        .map(|i| match (lo.get(i), hi.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => BigInt::zero(),
        })
        .collect()
}

/// Full polynomial product (length `a.len() + b.len() - 1`).
pub fn mul_dense(a: &[BigInt], b: &[BigInt], threshold: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let threshold = threshold.max(1);
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() <= threshold {
        return schoolbook(a, b);
    }
    let half = long.len().div_ceil(2);
    if short.len() <= half {
        // Unbalanced: cut the longer operand into blocks the size of the shorter.
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (k, block) in long.chunks(short.len()).enumerate() {
            let p = mul_dense(short, block, threshold);
            add_into(&mut out[k * short.len()..], &p);
        }
        return out;
    }
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = mul_dense(a0, b0, threshold);
    let z2 = mul_dense(a1, b1, threshold);
    let mut z1 = mul_dense(&sum_halves(a0, a1), &sum_halves(b0, b1), threshold);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    add_into(&mut out, &z0);
    add_into(&mut out[half..], &z1);
    add_into(&mut out[2 * half..], &z2);
    out
}

/// Product truncated at the attainable minimum: exponents below
/// `min(trunc(a) + off(b), trunc(b) + off(a))`.
pub fn series_mul(a: &ExactSeries, b: &ExactSeries) -> ExactSeries {
    let len = a.len().min(b.len());
    let mut coeffs = mul_dense(&a.coeffs[..len], &b.coeffs[..len], KARATSUBA_THRESHOLD);
    coeffs.truncate(len);
    ExactSeries::new(a.offset + b.offset, coeffs)
}

/// `a^k` for `k >= 1` by binary exponentiation.
pub fn series_pow(a: &ExactSeries, k: u32) -> Result<ExactSeries, SeriesError> {
    if k == 0 {
        return Err(SeriesError::Domain("series_pow needs a positive exponent".into()));
    }
    let mut result: Option<ExactSeries> = None;
    let mut base = a.clone();
    let mut e = k;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => series_mul(&r, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = series_mul(&base, &base);
    }
    Ok(result.unwrap_or(base))
}

/// Multiplicative inverse by Newton iteration. The leading coefficient
/// (at the offset) must be a unit, i.e. `±1`.
pub fn series_inv(a: &ExactSeries) -> Result<ExactSeries, SeriesError> {
    let lead = a
        .coeffs
        .first()
        .ok_or_else(|| SeriesError::Domain("cannot invert an empty series".into()))?;
    if lead.abs() != BigInt::one() {
        return Err(SeriesError::Domain(format!(
            "leading coefficient {lead} is not a unit"
        )));
    }
    let n = a.len();
    let unit = ExactSeries::new(0, a.coeffs.clone());
    let mut inv = ExactSeries::new(0, vec![lead.clone()]);
    let mut have = 1usize;
    while have < n {
        let next = (2 * have).min(n);
        // inv <- inv + inv (1 - a inv), all modulo q^next.
        let a_part = unit.clone().truncate(next as i64);
        let mut widened = inv.coeffs.clone();
        widened.resize(next, BigInt::zero());
        let inv_wide = ExactSeries::new(0, widened);
        let residual = ExactSeries::one(next as i64).sub(&series_mul(&a_part, &inv_wide));
        let correction = series_mul(&inv_wide, &residual);
        inv = inv_wide.add(&correction);
        have = next;
    }
    Ok(ExactSeries::new(-a.offset, inv.coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(offset: i64, c: &[i64]) -> ExactSeries {
        ExactSeries::from_i64s(offset, c)
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(series_inv(&s(0, &[1])).unwrap(), s(0, &[1]));
        assert_eq!(series_inv(&s(0, &[1, -24])).unwrap(), s(0, &[1, 24]));
        let inv = series_inv(&s(1, &[1, -24, 252])).unwrap();
        assert_eq!(inv.offset(), -1);
        assert_eq!(inv, s(-1, &[1, 24, 324]));
        assert!(series_inv(&s(0, &[2, 1])).is_err());
        assert!(series_inv(&s(0, &[])).is_err());
    }

    #[test]
    fn product_examples() {
        let p = series_mul(&s(0, &[1, 1]), &s(0, &[1, -1]));
        assert_eq!(p, s(0, &[1, 0]));
        assert_eq!(p.truncation(), 2);
        let q = series_mul(&s(-1, &[1, 2, 3]), &s(1, &[1, 1, 1, 1]));
        assert_eq!(q, s(0, &[1, 3, 6]));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = s(0, &[1, -1, 0, 0, 0, 0, 0, 0]);
        let p = series_pow(&a, 5).unwrap();
        assert_eq!(p, s(0, &[1, -5, 10, -10, 5, -1, 0, 0]));
        assert!(series_pow(&a, 0).is_err());
    }

    #[test]
    fn add_respects_truncation_and_offsets() {
        let a = s(-1, &[1, 2, 3]);
        let b = s(0, &[10, 20, 30, 40]);
        assert_eq!(a.add(&b), s(-1, &[1, 12, 23]));
    }

    fn big_series(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-1_000_000i64..1_000_000, 1..max_len)
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(a in big_series(300), b in big_series(300), th in 1usize..40) {
            let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(mul_dense(&a, &b, th), schoolbook(&a, &b));
        }

        #[test]
        fn inverse_is_a_right_inverse(tail in big_series(200), negate in any::<bool>(), offset in -3i64..3) {
            let mut c = vec![if negate { -1 } else { 1 }];
            c.extend(tail);
            let a = s(offset, &c);
            let inv = series_inv(&a).unwrap();
            let prod = series_mul(&a, &inv);
            prop_assert_eq!(prod, ExactSeries::one(a.len() as i64));
        }

        #[test]
        fn pow_is_repeated_mul(c in big_series(40), k in 1u32..7) {
            let a = s(0, &c);
            let mut expect = a.clone();
            for _ in 1..k {
                expect = series_mul(&expect, &a);
            }
            prop_assert_eq!(series_pow(&a, k).unwrap(), expect);
        }
    }
}
