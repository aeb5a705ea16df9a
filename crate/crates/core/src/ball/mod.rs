//! Midpoint–radius real enclosures at arbitrary binary precision.
//!
//! A [`Ball`] is an exact binary midpoint together with a nonnegative radius
//! bound. Every operation returns a ball containing the image of every
//! point of its inputs; nothing is ever rounded to nearest without the
//! rounding error being added to the radius.

mod decimal;
mod dyadic;
mod elementary;
mod mag;
mod sign;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use decimal::parse_decimal;
pub use dyadic::Dyadic;
pub use mag::Mag;
pub use sign::{certify_sign, PrecisionPolicy, Sign, SignCertificate};

/// Default starting precision for sign certification, in bits.
pub const DEFAULT_PRECISION_START: u32 = 128;
/// Default precision cap for sign certification, in bits.
pub const DEFAULT_PRECISION_MAX: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BallError {
    /// The enclosure lies entirely outside the operation's domain.
    #[error("{op}: argument outside domain")]
    DomainViolation { op: &'static str },
    /// The enclosure straddles the domain boundary; more precision may help.
    #[error("{op}: enclosure not strictly inside domain")]
    Indeterminate { op: &'static str },
    #[error("division by an enclosure containing zero")]
    DivisionByZero,
    #[error("exponent too large for {op}")]
    Overflow { op: &'static str },
    #[error("malformed decimal literal {literal:?}")]
    Parse { literal: String },
}

impl BallError {
    /// Whether evaluating again at higher precision could succeed.
    pub fn is_precision_limited(&self) -> bool {
        matches!(
            self,
            BallError::Indeterminate { .. } | BallError::DivisionByZero
        )
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball {
            mid: Dyadic::zero(),
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        Ball::from_bigint(&BigInt::from(v), prec)
    }

    /// Encloses an integer; exact when it fits in `prec` bits.
    pub fn from_bigint(v: &BigInt, prec: u32) -> Ball {
        let (mid, rad) = Dyadic::from_int(v.clone()).round(prec);
        Ball { mid, rad, prec }
    }

    pub fn from_dyadic(mid: Dyadic, prec: u32) -> Ball {
        let (mid, rad) = mid.round(prec);
        Ball { mid, rad, prec }
    }

    /// Encloses `num / den` with a radius of at most one unit in the last
    /// place at `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Ball, BallError> {
        if den.is_zero() {
            return Err(BallError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Ball::zero(prec));
        }
        let negative = num.is_negative() != den.is_negative();
        let (n, d) = (num.abs(), den.abs());
        // Pick a shift so that the quotient has prec or prec + 1 bits.
        let shift = prec as i64 + d.bits() as i64 - n.bits() as i64;
        let (scaled_n, scaled_d) = if shift >= 0 {
            (n << shift as usize, d)
        } else {
            (n, d << (-shift) as usize)
        };
        let q = &scaled_n / &scaled_d;
        let exact = (&q * &scaled_d) == scaled_n;
        let (mid, round_err) = Dyadic::new(q, -shift).round(prec);
        // Truncation and rounding both go toward zero; together they stay
        // below one unit of the rounded significand.
        let rad = if exact && round_err.is_zero() {
            Mag::ZERO
        } else {
            Mag::pow2(mid.exp)
        };
        let mid = if negative { mid.neg() } else { mid };
        Ok(Ball { mid, rad, prec })
    }

    pub fn from_rational(v: &BigRational, prec: u32) -> Result<Ball, BallError> {
        Ball::from_ratio(v.numer(), v.denom(), prec)
    }

    /// Encloses the exact value of a finite decimal literal such as
    /// `"2.21073e-5"`, parsed to a rational first.
    pub fn from_decimal(literal: &str, prec: u32) -> Result<Ball, BallError> {
        let q = parse_decimal(literal)?;
        Ball::from_rational(&q, prec)
    }

    /// Smallest ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Ball {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mid = lo.add(hi).mul_2exp(-1);
        let half_width = hi.sub(lo).mul_2exp(-1).mag_up();
        let (mid, err) = mid.round(prec);
        Ball {
            mid,
            rad: half_width.add_up(err),
            prec,
        }
    }

    pub fn with_radius(mut self, extra: Mag) -> Ball {
        self.rad = self.rad.add_up(extra);
        self
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same enclosure, relabelled to compute subsequent results at `prec`.
    pub fn at_precision(&self, prec: u32) -> Ball {
        let (mid, err) = self.mid.round(prec);
        Ball {
            mid,
            rad: self.rad.add_up(err),
            prec,
        }
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&Dyadic::from_mag(self.rad))
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&Dyadic::from_mag(self.rad))
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Certified: every point of the ball is `> 0`.
    pub fn is_positive(&self) -> bool {
        self.mid.sign() == BigSign::Plus && Dyadic::from_mag(self.rad) < self.mid
    }

    /// Certified: every point of the ball is `< 0`.
    pub fn is_negative(&self) -> bool {
        self.mid.sign() == BigSign::Minus && Dyadic::from_mag(self.rad) < self.mid.abs()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    /// Whether the exact rational `x` lies in the ball.
    pub fn contains_rational(&self, x: &BigRational) -> bool {
        // Compare x * 2^k against integer endpoints scaled by the same factor.
        let lo = self.lower();
        let hi = self.upper();
        let e = lo.exp.min(hi.exp).min(0);
        let scale = |d: &Dyadic| -> BigInt { &d.man << (d.exp - e) as usize };
        let lo_i = scale(&lo);
        let hi_i = scale(&hi);
        let sh = (-e) as usize;
        let x_num = x.numer() << sh;
        let den = x.denom();
        &lo_i * den <= x_num && x_num <= &hi_i * den
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        self.mid.mag_up().add_up(self.rad)
    }

    /// Lower bound on `|x|` over the ball (zero if the ball meets zero).
    pub fn mag_lower(&self) -> Mag {
        self.mid.mag_down().sub_down(self.rad)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    fn finish(mid: Dyadic, rad: Mag, prec: u32) -> Ball {
        let (mid, err) = mid.round(prec);
        Ball {
            mid,
            rad: rad.add_up(err),
            prec,
        }
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let rad = self.rad.add_up(other.rad);
        if self.mid.is_zero() {
            return Ball::finish(other.mid.clone(), rad, prec);
        }
        if other.mid.is_zero() {
            return Ball::finish(self.mid.clone(), rad, prec);
        }
        // When one midpoint sits far below the other's last kept bit, fold it
        // into the radius instead of building a huge exact sum.
        let (big, small) = if self.mid.top() >= other.mid.top() {
            (&self.mid, &other.mid)
        } else {
            (&other.mid, &self.mid)
        };
        if big.top() - small.top() > prec as i64 + 64 {
            return Ball::finish(big.clone(), rad.add_up(small.mag_up()), prec);
        }
        Ball::finish(self.mid.add(&other.mid), rad, prec)
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        self.add_ball(&other.neg_ball())
    }

    pub fn neg_ball(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Ball {
        if self.mid.sign() == BigSign::Minus {
            self.neg_ball()
        } else {
            self.clone()
        }
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .mag_up()
            .mul_up(other.rad)
            .add_up(other.mid.mag_up().mul_up(self.rad))
            .add_up(self.rad.mul_up(other.rad));
        Ball::finish(mid, rad, prec)
    }

    pub fn sqr(&self) -> Ball {
        self.mul_ball(self)
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul_ball(&Ball::from_i64(k, self.prec))
    }

    /// Exact scaling by `2^e`.
    pub fn mul_2exp(&self, e: i64) -> Ball {
        Ball {
            mid: self.mid.mul_2exp(e),
            rad: self.rad.mul_2exp(e),
            prec: self.prec,
        }
    }

    pub fn div_ball(&self, other: &Ball) -> Result<Ball, BallError> {
        let prec = self.prec.max(other.prec);
        if other.contains_zero() {
            return Err(BallError::DivisionByZero);
        }
        let bm = &other.mid;
        let (q, q_err) = if self.mid.is_zero() {
            (Dyadic::zero(), Mag::ZERO)
        } else {
            let shift = prec as i64 + 2 + bm.bits() as i64 - self.mid.bits() as i64;
            let shift = shift.max(0);
            let num = &self.mid.man << shift as usize;
            let quo = &num / &bm.man;
            let exact = (&quo * &bm.man) == num;
            let q = Dyadic::new(quo, self.mid.exp - shift - bm.exp);
            let err = if exact { Mag::ZERO } else { Mag::pow2(q.exp) };
            (q, err)
        };
        // |a/b - am/bm| <= (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
        let prop = if self.rad.is_zero() && other.rad.is_zero() {
            Mag::ZERO
        } else {
            let bm_lo = bm.mag_down();
            let num = self
                .mid
                .mag_up()
                .mul_up(other.rad)
                .add_up(bm.mag_up().mul_up(self.rad));
            let den = bm_lo.mul_down(bm_lo.sub_down(other.rad));
            num.div_up(den).ok_or(BallError::DivisionByZero)?
        };
        Ok(Ball::finish(q, prop.add_up(q_err), prec))
    }

    pub fn div_i64(&self, k: i64) -> Result<Ball, BallError> {
        self.div_ball(&Ball::from_i64(k, self.prec))
    }

    pub fn recip(&self) -> Result<Ball, BallError> {
        Ball::one(self.prec).div_ball(self)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, k: i64) -> Result<Ball, BallError> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let mut result = Ball::one(self.prec);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    /// Union hull of two enclosures.
    pub fn union(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Whether the two enclosures intersect.
    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Decimal rendering `mid +/- rad` with `digits` significant digits in
    /// the midpoint; the radius is rounded upward.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        decimal::render_ball(self, digits)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(20))
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ball);
forward_binop!(Sub, sub, sub_ball);
forward_binop!(Mul, mul, mul_ball);

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integers_are_exact() {
        let b = Ball::from_i64(-12345, 64);
        assert!(b.is_exact());
        assert!(b.is_negative());
        assert_eq!(b.to_f64(), -12345.0);
    }

    #[test]
    fn large_integers_are_rounded_with_radius() {
        let v = (BigInt::from(1) << 200usize) + 12345;
        let b = Ball::from_bigint(&v, 64);
        assert!(!b.is_exact());
        assert!(b.contains_dyadic(&Dyadic::from_int(v)));
    }

    #[test]
    fn ratio_has_one_ulp_radius() {
        let b = Ball::from_ratio(&BigInt::from(1), &BigInt::from(3), 64).unwrap();
        assert!(b.contains_rational(&rat(1, 3)));
        assert_eq!(b.rad(), Mag::pow2(b.mid().exp));
        let third = Ball::from_ratio(&BigInt::from(-7), &BigInt::from(3), 80).unwrap();
        assert!(third.contains_rational(&rat(-7, 3)));
        assert!(!third.contains_rational(&rat(-233, 100)));
    }

    #[test]
    fn division_by_zero_enclosure_fails() {
        let a = Ball::one(64);
        let z = Ball::zero(64).with_radius(Mag::pow2(-10));
        assert_eq!(a.div_ball(&z).unwrap_err(), BallError::DivisionByZero);
    }

    #[test]
    fn addition_folds_negligible_terms() {
        let big = Ball::from_bigint(&(BigInt::from(1) << 4000usize), 64);
        let tiny = Ball::from_ratio(&BigInt::from(1), &BigInt::from(7), 64).unwrap();
        let s = &big + &tiny;
        assert!(s.is_positive());
        assert!(s.mid().bits() <= 64);
    }

    fn small_rational() -> impl Strategy<Value = (i64, i64)> {
        (-10_000i64..10_000, 1i64..2_000)
    }

    proptest! {
        #[test]
        fn arithmetic_contains_exact_rational_results(
            (an, ad) in small_rational(),
            (bn, bd) in small_rational(),
            prec in 24u32..200,
        ) {
            let (qa, qb) = (rat(an, ad), rat(bn, bd));
            let a = Ball::from_rational(&qa, prec).unwrap();
            let b = Ball::from_rational(&qb, prec).unwrap();
            prop_assert!((&a + &b).contains_rational(&(&qa + &qb)));
            prop_assert!((&a - &b).contains_rational(&(&qa - &qb)));
            prop_assert!((&a * &b).contains_rational(&(&qa * &qb)));
            if !qb.is_zero() {
                if let Ok(q) = a.div_ball(&b) {
                    prop_assert!(q.contains_rational(&(&qa / &qb)));
                }
            }
            let k = (an.rem_euclid(7)) as i32;
            let p = a.powi(k as i64).unwrap();
            prop_assert!(p.contains_rational(&num_traits::pow::Pow::pow(&qa, k)));
        }

        #[test]
        fn wide_inputs_still_enclose(
            (an, ad) in small_rational(),
            (bn, bd) in small_rational(),
            shift in 1i64..30,
        ) {
            let (qa, qb) = (rat(an, ad), rat(bn, bd));
            let widen = Mag::pow2(-shift);
            let a = Ball::from_rational(&qa, 53).unwrap().with_radius(widen);
            let b = Ball::from_rational(&qb, 53).unwrap().with_radius(widen);
            prop_assert!((&a * &b).contains_rational(&(&qa * &qb)));
            if let Ok(q) = a.div_ball(&b) {
                prop_assert!(q.contains_rational(&(&qa / &qb)));
            }
        }
    }
}
