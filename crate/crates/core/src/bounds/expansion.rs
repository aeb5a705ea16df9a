//! The asymptotic expansion of `c(n)` and its remainder bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::Arg;
use crate::ball::{certify_sign, Ball, BallError, PrecisionPolicy, Sign};

/// `(1,k) = prod_{j<k} (4 - (2j+1)^2) / (4^k k!)`
pub fn expansion_coeff(k: u32) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= 4 - (2 * j + 1) * (2 * j + 1);
        den *= 4 * (j + 1);
    }
    BigRational::new(num, den)
}

/// Main term of the `p`-term expansion at a real argument.
pub fn truncated_main_real(x: &Ball, p: u32) -> Result<Ball, BallError> {
    let arg = Arg::new(x)?;
    Ok(arg.prefactor()?.mul_ball(&arg.series(p)?))
}

pub fn truncated_main(n: i64, p: u32, prec: u32) -> Result<Ball, BallError> {
    if n < 1 || p < 1 {
        return Err(BallError::DomainViolation { op: "truncated_main needs n >= 1, p >= 1" });
    }
    truncated_main_real(&Ball::from_i64(n, prec), p)
}

/// `|(1,p)| / (sqrt 2 (4 pi)^p) + 62 sqrt 2 e^{-2 pi sqrt x} x^{p/2}`
pub fn remainder_bound_real(x: &Ball, p: u32) -> Result<Ball, BallError> {
    let arg = Arg::new(x)?;
    let prec = arg.prec;
    let coeff = Ball::from_rational(&expansion_coeff(p).abs(), prec)?;
    let four_pi_p = arg.pi.mul_2exp(2).powi(p as i64)?;
    let first = coeff.div_ball(&arg.sqrt2.mul_ball(&four_pi_p))?;
    let decay = arg.pi.mul_2exp(1).mul_ball(&arg.s).neg_ball().exp()?;
    let second = arg
        .sqrt2
        .mul_i64(62)
        .mul_ball(&decay)
        .mul_ball(&arg.s.powi(p as i64)?);
    Ok(first.add_ball(&second))
}

pub fn remainder_bound(n: i64, p: u32, prec: u32) -> Result<Ball, BallError> {
    if n < 1 || p < 1 {
        return Err(BallError::DomainViolation { op: "remainder_bound needs n >= 1, p >= 1" });
    }
    remainder_bound_real(&Ball::from_i64(n, prec), p)
}

/// Where the remainder bound drops below a uniform constant for good.
#[derive(Clone, Debug)]
pub struct RemainderSearch {
    pub p: u32,
    pub constant: String,
    /// The bound is decreasing in `n` from here on: its second summand has
    /// negative logarithmic derivative once `sqrt n > p / (2 pi)`.
    pub decreasing_from: i64,
    /// Smallest `n >= decreasing_from` with the bound certified below the
    /// constant; the inequality then holds for every larger `n`.
    pub n_star: Option<i64>,
    /// `(n, bound(n) - constant)` sign certificates for `1 ..= search_max`.
    pub signs: Vec<(i64, Sign, u32, Option<Ball>)>,
    /// Enclosure of the `n -> infinity` limit (the first summand).
    pub limit: Ball,
}

/// Evaluates the remainder bound for `n` in `1 ..= search_max` against
/// the decimal constant and locates the threshold beyond which it stays below.
pub fn remainder_threshold(
    p: u32,
    constant: &str,
    search_max: i64,
    policy: PrecisionPolicy,
) -> Result<RemainderSearch, BallError> {
    let prec = policy.start;
    let pi = Ball::pi(prec);
    let crossover = Ball::from_i64((p * p) as i64, prec).div_ball(&pi.sqr().mul_2exp(2))?;
    let decreasing_from = crossover
        .upper()
        .floor()
        .to_i64()
        .ok_or(BallError::Overflow { op: "remainder crossover" })?
        .max(0)
        + 1;
    let sqrt2 = Ball::from_i64(2, prec).sqrt()?;
    let limit = Ball::from_rational(&expansion_coeff(p).abs(), prec)?
        .div_ball(&sqrt2.mul_ball(&pi.mul_2exp(2).powi(p as i64)?))?;

    let signs: Vec<(i64, Sign, u32, Option<Ball>)> = {
        use rayon::prelude::*;
        (1..=search_max)
            .into_par_iter()
            .map(|n| {
                let cert = certify_sign("remainder-minus-constant", n, policy, |q| {
                    Ok(remainder_bound(n, p, q)?.sub_ball(&Ball::from_decimal(constant, q)?))
                })?;
                Ok((n, cert.sign, cert.precision_used, cert.enclosure))
            })
            .collect::<Result<_, BallError>>()?
    };
    let n_star = signs
        .iter()
        .filter(|(n, ..)| *n >= decreasing_from)
        .find(|(_, s, ..)| *s == Sign::StrictlyNegative)
        .map(|(n, ..)| *n);
    Ok(RemainderSearch {
        p,
        constant: constant.to_string(),
        decreasing_from,
        n_star,
        signs,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{j_coefficients, Route};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn coefficients() {
        assert_eq!(expansion_coeff(0), q(1, 1));
        assert_eq!(expansion_coeff(1), q(3, 4));
        assert_eq!(expansion_coeff(2), q(-15, 32));
        assert_eq!(expansion_coeff(3), q(105, 128));
        assert_eq!(expansion_coeff(4), q(-4725, 2048));
        assert_eq!(expansion_coeff(5), q(72765, 8192));
    }

    #[test]
    fn main_term_examples() {
        let pi = std::f64::consts::PI;
        let one = truncated_main(1, 1, 128).unwrap().to_f64();
        assert!((one / ((4.0 * pi).exp() / 2f64.sqrt()) - 1.0).abs() < 1e-14);
        let four = truncated_main(4, 2, 128).unwrap().to_f64();
        let expect = (8.0 * pi).exp() / (2f64.sqrt() * 4f64.powf(0.75)) * (1.0 - 3.0 / (64.0 * pi));
        assert!((four / expect - 1.0).abs() < 1e-13);
    }

    #[test]
    fn main_term_tracks_exact_coefficient() {
        let t = j_coefficients(101, Route::EisensteinE4).unwrap();
        let c = Ball::from_bigint(t.get(100).unwrap(), 128);
        let m = truncated_main(100, 5, 128).unwrap();
        let rel = c.sub_ball(&m).div_ball(&c).unwrap().to_f64().abs();
        assert!(rel < 1e-4, "{rel}");
    }

    #[test]
    fn remainder_examples() {
        let r15 = remainder_bound(15, 5, 128).unwrap().to_f64();
        assert!((r15 - 2.21e-5).abs() < 1e-7, "{r15}");
        // Second summand at n = 10^6: 62 sqrt 2 e^{-2000 pi} 10^15.
        let prec = 256;
        let decay = Ball::pi(prec).mul_i64(-2000).exp().unwrap();
        let second = decay
            .mul_ball(&Ball::from_i64(2, prec).sqrt().unwrap().mul_i64(62))
            .mul_ball(&Ball::from_i64(10i64.pow(15), prec));
        assert!(second.mag_upper() < crate::ball::Mag::pow2(-6644));
        let far = remainder_bound(1_000_000, 5, prec).unwrap();
        let limit = remainder_threshold(5, "2.21073e-5", 1, PrecisionPolicy::new(prec, prec)).unwrap().limit;
        assert!(far.overlaps(&limit));
    }

    #[test]
    fn thresholds() {
        let s5 = remainder_threshold(5, "2.21073e-5", 30, PrecisionPolicy::default()).unwrap();
        assert_eq!(s5.decreasing_from, 1);
        assert_eq!(s5.n_star, Some(16));
        let s6 = remainder_threshold(6, "1.57696e-5", 30, PrecisionPolicy::default()).unwrap();
        assert_eq!(s6.n_star, Some(16));
    }
}
