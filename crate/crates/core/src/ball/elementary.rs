//! Certified elementary functions on balls: π, ln 2, sqrt, exp, log, powers.
//!
//! Series are truncated with explicit remainder bounds that are added to
//! the radius. Arguments are reduced first (by ln 2 multiples and repeated
//! halving for exp, by powers of two and repeated square roots for log) so
//! that the series converge quickly at high precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use super::dyadic::Dyadic;
use super::mag::Mag;
use super::{Ball, BallError};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Pi,
    Ln2,
}

fn cached(c: Constant, prec: u32, compute: fn(u32) -> Ball) -> Ball {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), Ball>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().ok().and_then(|m| m.get(&(c, prec)).cloned()) {
        return b;
    }
    let b = compute(prec);
    if let Ok(mut m) = cache.lock() {
        m.insert((c, prec), b.clone());
    }
    b
}

/// `sum_i (-1)^i / ((2i+1) q^(2i+1))` if `alternating`, else the same series
/// with all signs positive (atan and atanh of `1/q`).
fn arctan_recip(q: u64, alternating: bool, wp: u32) -> Ball {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut power = q.clone();
    let mut sum = Ball::zero(wp);
    let mut i: u64 = 0;
    loop {
        let den = &power * BigInt::from(2 * i + 1);
        let term = Ball::from_ratio(&BigInt::one(), &den, wp).unwrap_or_else(|_| Ball::zero(wp));
        sum = if alternating && i % 2 == 1 {
            &sum - &term
        } else {
            &sum + &term
        };
        power = &power * &q2;
        i += 1;
        if power.bits() > wp as u64 + 8 {
            break;
        }
    }
    // First omitted term is below 1 / power <= 2^(1 - bits); the positive
    // series tail is at most twice that since q >= 2.
    let tail = Mag::pow2(2 - power.bits() as i64);
    sum.with_radius(tail)
}

fn compute_pi(prec: u32) -> Ball {
    let wp = prec + 16;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
    let a = arctan_recip(5, true, wp).mul_i64(16);
    let b = arctan_recip(239, true, wp).mul_i64(4);
    (&a - &b).at_precision(prec)
}

fn compute_ln2(prec: u32) -> Ball {
    let wp = prec + 16;
    // ln 2 = 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749).
    let a = arctan_recip(26, false, wp).mul_i64(18);
    let b = arctan_recip(4801, false, wp).mul_i64(2);
    let c = arctan_recip(8749, false, wp).mul_i64(8);
    (&(&a - &b) + &c).at_precision(prec)
}

fn reduction_steps(wp: u32) -> u32 {
    ((wp as f64).sqrt() as u32) / 2 + 2
}

fn bit_width(k: i64) -> u32 {
    64 - k.unsigned_abs().leading_zeros()
}

fn exp_dyadic(m: &Dyadic, prec: u32) -> Result<Ball, BallError> {
    if m.is_zero() {
        return Ok(Ball::one(prec));
    }
    let approx = m.to_f64();
    if !approx.is_finite() || approx.abs() > (1u64 << 40) as f64 {
        return Err(BallError::Overflow { op: "exp" });
    }
    let k = (approx / std::f64::consts::LN_2).round() as i64;
    let s = reduction_steps(prec);
    let wp = prec + 24 + s + bit_width(k);

    let x = Ball::from_dyadic(m.clone(), wp);
    let r = (&x - &Ball::ln2(wp).mul_i64(k)).mul_2exp(-(s as i64));
    let r_mag = r.mag_upper();

    let mut sum = Ball::one(wp);
    let mut term = Ball::one(wp);
    let target = Mag::pow2(-(wp as i64) - 4);
    let mut i: i64 = 1;
    loop {
        term = (&term * &r).div_i64(i)?;
        sum = &sum + &term;
        let term_mag = term.mag_upper();
        if term_mag < target {
            // Tail after term i: at most 2 |r|^(i+1) / (i+1)!.
            let tail = term_mag
                .mul_up(r_mag)
                .div_up(Mag::from_u64_up(i as u64 + 1, 0))
                .unwrap_or(term_mag)
                .mul_2exp(1);
            sum = sum.with_radius(tail);
            break;
        }
        i += 1;
    }
    for _ in 0..s {
        sum = sum.sqr();
    }
    Ok(sum.mul_2exp(k).at_precision(prec))
}

fn log_dyadic(m: &Dyadic, prec: u32) -> Result<Ball, BallError> {
    let b = m.man.bits() as i64;
    // m = y * 2^k with y in [1/sqrt 2, sqrt 2).
    let mut y = Dyadic::new(m.man.clone(), -b);
    let mut k = m.exp + b;
    let man_sq = &m.man * &m.man;
    if (man_sq << 1usize) < (BigInt::one() << (2 * b) as usize) {
        y = y.mul_2exp(1);
        k -= 1;
    }
    let y_is_one = y == Dyadic::from_int(1);
    let s = reduction_steps(prec);
    let wp = prec + 24 + s + bit_width(k);
    let k_ln2 = if k == 0 {
        Ball::zero(wp)
    } else {
        Ball::ln2(wp).mul_i64(k)
    };
    if y_is_one {
        return Ok(k_ln2.at_precision(prec));
    }

    let mut yb = Ball::from_dyadic(y, wp);
    for _ in 0..s {
        yb = yb.sqrt()?;
    }
    let one = Ball::one(wp);
    let z = (&yb - &one).div_ball(&(&yb + &one))?;
    let z2 = z.sqr();
    let z2_mag = z2.mag_upper();
    let target = Mag::pow2(-(wp as i64) - 4);
    let mut sum = z.clone();
    let mut zpow = z;
    let mut i: i64 = 1;
    loop {
        zpow = &zpow * &z2;
        sum = &sum + &zpow.div_i64(2 * i + 1)?;
        let zpow_mag = zpow.mag_upper();
        if zpow_mag < target {
            // Remaining terms are bounded by |z|^(2i+3) / (1 - z^2) <= 2 |z|^(2i+3).
            sum = sum.with_radius(zpow_mag.mul_up(z2_mag).mul_2exp(1));
            break;
        }
        i += 1;
    }
    let log_y = sum.mul_2exp(s as i64 + 1);
    Ok((&k_ln2 + &log_y).at_precision(prec))
}

impl Ball {
    /// Enclosure of π at `prec` bits.
    pub fn pi(prec: u32) -> Ball {
        cached(Constant::Pi, prec, compute_pi)
    }

    /// Enclosure of ln 2 at `prec` bits.
    pub fn ln2(prec: u32) -> Ball {
        cached(Constant::Ln2, prec, compute_ln2)
    }

    pub fn sqrt(&self) -> Result<Ball, BallError> {
        let prec = self.prec;
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(Ball::zero(prec));
        }
        if self.upper() < Dyadic::zero() {
            return Err(BallError::DomainViolation { op: "sqrt" });
        }
        if !self.is_positive() {
            return Err(BallError::Indeterminate { op: "sqrt" });
        }
        let man = &self.mid.man;
        let target_bits = 2 * (prec as i64 + 2);
        let mut sh = (target_bits - man.bits() as i64).max(0);
        if (self.mid.exp - sh).rem_euclid(2) != 0 {
            sh += 1;
        }
        let scaled: BigInt = man << sh as usize;
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let root_exp = (self.mid.exp - sh) / 2;
        let mid = Dyadic::new(root, root_exp);
        let mut rad = if exact { Mag::ZERO } else { Mag::pow2(root_exp) };
        if !self.rad.is_zero() {
            // |sqrt x - sqrt m| <= r / (sqrt x + sqrt m) <= r / (2 sqrt lo)
            let lo = self.lower().mag_down().sqrt_down().mul_2exp(1);
            let prop = self
                .rad
                .div_up(lo)
                .ok_or(BallError::Indeterminate { op: "sqrt" })?;
            rad = rad.add_up(prop);
        }
        Ok(Ball::finish(mid, rad, prec))
    }

    pub fn exp(&self) -> Result<Ball, BallError> {
        let prec = self.prec;
        if self.rad.is_zero() {
            return exp_dyadic(&self.mid, prec);
        }
        if self.rad < Mag::pow2(-1) {
            let centre = exp_dyadic(&self.mid, prec)?;
            // exp(m + t) = exp(m) exp(t) with |exp(t) - 1| <= r + r^2 for |t| <= r <= 1/2.
            let spread = self.rad.add_up(self.rad.mul_up(self.rad));
            let factor = Ball::one(prec).with_radius(spread);
            return Ok(&centre * &factor);
        }
        let lo = exp_dyadic(&self.lower(), prec)?;
        let hi = exp_dyadic(&self.upper(), prec)?;
        Ok(Ball::from_endpoints(&lo.lower(), &hi.upper(), prec))
    }

    pub fn log(&self) -> Result<Ball, BallError> {
        if self.upper() <= Dyadic::zero() {
            return Err(BallError::DomainViolation { op: "log" });
        }
        if !self.is_positive() {
            return Err(BallError::Indeterminate { op: "log" });
        }
        let centre = log_dyadic(&self.mid, self.prec)?;
        if self.rad.is_zero() {
            return Ok(centre);
        }
        // Mean value bound: |log x - log m| <= r / lo.
        let lo = self.lower().mag_down();
        let prop = self
            .rad
            .div_up(lo)
            .ok_or(BallError::Indeterminate { op: "log" })?;
        Ok(centre.with_radius(prop))
    }

    /// `self^(num/den)` for positive `self`; integer exponents allow any sign
    /// of the base.
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Ball, BallError> {
        if den == 0 {
            return Err(BallError::DivisionByZero);
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num_integer::gcd(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match den {
            1 => self.powi(num),
            2 => self.sqrt()?.powi(num),
            4 => self.sqrt()?.sqrt()?.powi(num),
            _ => {
                let e = Ball::from_ratio(&BigInt::from(num), &BigInt::from(den), self.prec)?;
                self.pow(&e)
            }
        }
    }

    /// `self^exponent` for positive `self`, as `exp(exponent * log self)`.
    pub fn pow(&self, exponent: &Ball) -> Result<Ball, BallError> {
        if exponent.is_exact() && exponent.mid.is_zero() {
            return Ok(Ball::one(self.prec));
        }
        (exponent * &self.log()?).exp()
    }
}
