//! Exact binary floating-point values `man * 2^exp`.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use super::mag::Mag;

#[derive(Clone, Debug)]
pub struct Dyadic {
    pub(crate) man: BigInt,
    pub(crate) exp: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(man: BigInt, exp: i64) -> Dyadic {
        if man.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man, exp }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Position of the leading bit: `2^(top-1) <= |self| < 2^top`.
    pub fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_2exp(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + e,
        }
    }

    pub fn mag_up(&self) -> Mag {
        Mag::from_bigint_up(&self.man, self.exp)
    }

    pub fn mag_down(&self) -> Mag {
        Mag::from_bigint_down(&self.man, self.exp)
    }

    pub fn from_mag(m: Mag) -> Dyadic {
        let (man, exp) = m.to_parts();
        Dyadic::new(man, exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    /// Truncates the significand to at most `prec` bits, returning the
    /// rounded value and an upper bound on the discarded part.
    pub fn round(&self, prec: u32) -> (Dyadic, Mag) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), Mag::ZERO);
        }
        let shift = bits - prec as u64;
        let exact = self
            .man
            .magnitude()
            .trailing_zeros()
            .is_none_or(|tz| tz >= shift);
        // Truncate toward zero on the magnitude so the error bound is symmetric.
        let mag = self.man.magnitude() >> shift;
        let man = BigInt::from_biguint(self.man.sign(), mag);
        let exp = self.exp + shift as i64;
        let err = if exact { Mag::ZERO } else { Mag::pow2(exp) };
        (Dyadic::new(man, exp), err)
    }

    /// Approximate conversion, for diagnostics and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.man >> shift as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 4000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -4000 {
            return 0.0;
        }
        // Split the scaling so intermediate powers stay finite.
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            let sh = (-self.exp) as usize;
            // Arithmetic shift of a negative BigInt rounds toward -inf.
            &self.man >> sh
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.man.sign();
        let sb = other.man.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let ord = ta.cmp(&tb);
            return if sa == Sign::Minus { ord.reverse() } else { ord };
        }
        self.sub(other).man.sign().cmp(&Sign::NoSign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_reports_error() {
        let d = Dyadic::from_int(0b1011_0111);
        let (r, err) = d.round(4);
        assert_eq!(r, Dyadic::new(BigInt::from(0b1011), 4));
        assert_eq!(err, Mag::pow2(4));
        let (r, err) = Dyadic::from_int(0b1100_0000).round(4);
        assert_eq!(r.to_f64(), 192.0);
        assert!(err.is_zero());
        let (r, _) = Dyadic::from_int(-0b1011_0111).round(4);
        assert_eq!(r.to_f64(), -176.0);
    }

    #[test]
    fn ordering_is_exact() {
        let a = Dyadic::new(BigInt::from(3), -1);
        let b = Dyadic::new(BigInt::from(1), 0);
        assert!(a > b);
        assert!(a.neg() < b.neg());
        assert_eq!(Dyadic::new(BigInt::from(4), -2).cmp(&b), Ordering::Equal);
        assert_eq!(Dyadic::new(BigInt::from(-5), -1).floor(), BigInt::from(-3));
    }
}
