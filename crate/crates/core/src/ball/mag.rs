//! Low-precision magnitudes with directed rounding, used for ball radii.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};

/// Significand width kept after every operation.
const MAG_BITS: u32 = 30;

/// A nonnegative number `man * 2^exp` with a short significand.
///
/// Operations come in `_up` and `_down` flavours; the result is an upper
/// (resp. lower) bound of the exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

fn bit_len(v: u128) -> u32 {
    128 - v.leading_zeros()
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// `2^exp` exactly.
    pub fn pow2(exp: i64) -> Mag {
        Mag { man: 1, exp }
    }

    fn normalize(man: u128, exp: i64, up: bool) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = bit_len(man);
        if bits <= MAG_BITS {
            return Mag { man: man as u64, exp };
        }
        let shift = bits - MAG_BITS;
        let mut m = man >> shift;
        if up && (m << shift) != man {
            m += 1;
        }
        // m may have overflowed into MAG_BITS + 1 bits; that is still exact.
        Mag {
            man: m as u64,
            exp: exp + shift as i64,
        }
    }

    pub fn from_u64_up(man: u64, exp: i64) -> Mag {
        Mag::normalize(man as u128, exp, true)
    }

    fn from_biguint(man: &BigUint, exp: i64, up: bool) -> Mag {
        let bits = man.bits();
        if bits <= 64 {
            let v: u64 = u64::try_from(man).unwrap_or(u64::MAX);
            return Mag::normalize(v as u128, exp, up);
        }
        let shift = bits - 64;
        let top = man >> shift;
        let v: u64 = u64::try_from(&top).unwrap_or(u64::MAX);
        let inexact = up && man.trailing_zeros().is_some_and(|tz| tz < shift);
        let r = Mag::normalize(v as u128, exp + shift as i64, up);
        if inexact {
            r.bump()
        } else {
            r
        }
    }

    /// Upper bound of `|man| * 2^exp`.
    pub fn from_bigint_up(man: &BigInt, exp: i64) -> Mag {
        Mag::from_biguint(man.magnitude(), exp, true)
    }

    /// Lower bound of `|man| * 2^exp`.
    pub fn from_bigint_down(man: &BigInt, exp: i64) -> Mag {
        Mag::from_biguint(man.magnitude(), exp, false)
    }

    /// Smallest representable step above `self`.
    fn bump(self) -> Mag {
        if self.man == 0 {
            return self;
        }
        Mag::normalize(self.man as u128 + 1, self.exp, true)
    }

    pub fn add_up(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.exp - lo.exp;
        if diff > 90 {
            // lo is below one unit of hi's last place.
            return Mag::normalize((hi.man as u128) << 1 | 1, hi.exp - 1, true);
        }
        let sum = ((hi.man as u128) << diff) + lo.man as u128;
        Mag::normalize(sum, lo.exp, true)
    }

    /// Lower bound of `max(self - other, 0)`.
    pub fn sub_down(self, other: Mag) -> Mag {
        if other.is_zero() {
            return self;
        }
        if self <= other {
            return Mag::ZERO;
        }
        let diff = self.exp - other.exp;
        if diff > 90 {
            // other is tiny; remove one unit in the last place of self.
            return Mag::normalize(((self.man as u128) << 1) - 1, self.exp - 1, false);
        }
        if diff >= 0 {
            let a = (self.man as u128) << diff;
            Mag::normalize(a - other.man as u128, other.exp, false)
        } else {
            let b = (other.man as u128) << (-diff);
            Mag::normalize(self.man as u128 - b, self.exp, false)
        }
    }

    pub fn mul_up(self, other: Mag) -> Mag {
        Mag::normalize(
            self.man as u128 * other.man as u128,
            self.exp + other.exp,
            true,
        )
    }

    pub fn mul_down(self, other: Mag) -> Mag {
        Mag::normalize(
            self.man as u128 * other.man as u128,
            self.exp + other.exp,
            false,
        )
    }

    /// Upper bound of `self / other`; `None` when `other` is zero.
    pub fn div_up(self, other: Mag) -> Option<Mag> {
        if other.is_zero() {
            return None;
        }
        let num = (self.man as u128) << 64;
        let den = other.man as u128;
        let mut q = num / den;
        if q * den != num {
            q += 1;
        }
        Some(Mag::normalize(q, self.exp - other.exp - 64, true))
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag {
            man: self.man,
            exp: self.exp + e,
        }
    }

    /// Lower bound of the square root.
    pub fn sqrt_down(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let (mut m, mut e) = (self.man as u128, self.exp);
        if e.rem_euclid(2) != 0 {
            m <<= 1;
            e -= 1;
        }
        m <<= 64;
        e -= 64;
        Mag::normalize(isqrt_u128(m), e / 2, false)
    }

    /// Exact value as a dyadic pair `(man, exp)`.
    pub fn to_parts(self) -> (BigInt, i64) {
        (BigInt::from(self.man), self.exp)
    }

    /// `floor(log2(self))`, or `None` for zero.
    pub fn log2_floor(self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + 63 - self.man.leading_zeros() as i64)
        }
    }

    /// Upper bound of `self^k`.
    pub fn pow_up(self, k: u32) -> Mag {
        let mut acc = Mag::from_u64_up(1, 0);
        for _ in 0..k {
            acc = acc.mul_up(self);
        }
        acc
    }

    pub fn to_f64(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        (self.man as f64) * 2f64.powi(e)
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let la = self.log2_floor().unwrap_or(0);
        let lb = other.log2_floor().unwrap_or(0);
        if la != lb {
            return la.cmp(&lb);
        }
        let e = self.exp.min(other.exp);
        let a = BigUint::from(self.man) << (self.exp - e) as usize;
        let b = BigUint::from(other.man) << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

pub(crate) fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as u128;
    // Correct the float estimate in both directions.
    while x.checked_mul(x).is_none_or(|sq| sq > v) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= v) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_rounding_brackets_the_exact_value() {
        let a = Mag::from_u64_up((1 << 40) + 1, 0);
        // 2^40 + 1 cannot be held in 30 bits, so it rounds up.
        assert!(a.to_f64() > (1u64 << 40) as f64);
        let b = Mag::from_bigint_down(&BigInt::from((1u64 << 40) + 1), 0);
        assert!(b.to_f64() <= ((1u64 << 40) + 1) as f64);
    }

    #[test]
    fn arithmetic_is_directed() {
        let third = Mag::from_u64_up(1, 0).div_up(Mag::from_u64_up(3, 0)).unwrap();
        assert!(third.to_f64() >= 1.0 / 3.0);
        let s = Mag::from_u64_up(2, 0).sqrt_down();
        assert!(s.to_f64() <= std::f64::consts::SQRT_2);
        assert!(s.to_f64() > 1.414);
        let d = Mag::from_u64_up(5, 0).sub_down(Mag::from_u64_up(3, 0));
        assert_eq!(d.to_f64(), 2.0);
        assert_eq!(Mag::from_u64_up(3, 0).sub_down(Mag::from_u64_up(5, 0)), Mag::ZERO);
        let tiny = Mag::from_u64_up(1, -200);
        assert!(Mag::from_u64_up(1, 0).add_up(tiny) > Mag::from_u64_up(1, 0));
    }

    #[test]
    fn ordering_ignores_representation() {
        assert_eq!(Mag::from_u64_up(4, 0).cmp(&Mag::pow2(2)), Ordering::Equal);
        assert!(Mag::pow2(-3) < Mag::from_u64_up(3, -3));
    }
}
