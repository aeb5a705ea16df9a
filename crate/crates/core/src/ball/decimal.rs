//! Exact decimal parsing and audit-friendly decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::mag::Mag;
use super::{Ball, BallError};

/// Parses a finite decimal literal (`-12.5`, `2.21073e-5`, `1E3`) into an
/// exact rational. No binary floating point is involved.
pub fn parse_decimal(literal: &str) -> Result<BigRational, BallError> {
    let err = || BallError::Parse {
        literal: literal.to_string(),
    };
    let s = literal.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| err())?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Digits of `|num/den|` in scientific form with `digits` significant
/// digits, rounded to nearest (`up == false`) or upward (`up == true`).
fn scientific(num: &BigInt, den: &BigInt, digits: usize, up: bool) -> String {
    if num.is_zero() {
        return "0".to_string();
    }
    let num = num.abs();
    let den = den.abs();
    let ten = BigInt::from(10);
    // Estimate the decimal exponent, then correct it.
    let approx = (num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2;
    let mut e10 = approx.floor() as i64;
    loop {
        let shift = digits as i64 - 1 - e10;
        let (n, d) = if shift >= 0 {
            (&num * num_traits::pow(ten.clone(), shift as usize), den.clone())
        } else {
            (num.clone(), &den * num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let (q, r) = n.div_rem(&d);
        let q = if up {
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        } else if (&r << 1usize) >= d {
            q + 1
        } else {
            q
        };
        let s = q.to_string();
        if s.len() > digits {
            e10 += 1;
            continue;
        }
        if s.len() < digits {
            e10 -= 1;
            continue;
        }
        let (head, tail) = s.split_at(1);
        return if tail.is_empty() {
            format!("{head}e{e10:+}")
        } else {
            format!("{head}.{tail}e{e10:+}")
        };
    }
}

fn dyadic_parts(d: &Dyadic) -> (BigInt, BigInt) {
    if d.exp >= 0 {
        (&d.man << d.exp as usize, BigInt::one())
    } else {
        (d.man.clone(), BigInt::one() << (-d.exp) as usize)
    }
}

pub(crate) fn render_dyadic(d: &Dyadic, digits: usize) -> String {
    let (n, den) = dyadic_parts(d);
    let body = scientific(&n, &den, digits, false);
    if d.sign() == num_bigint::Sign::Minus {
        format!("-{body}")
    } else {
        body
    }
}

pub(crate) fn render_mag_up(m: Mag) -> String {
    let (n, den) = dyadic_parts(&Dyadic::from_mag(m));
    scientific(&n, &den, 3, true)
}

pub(crate) fn render_ball(b: &Ball, digits: usize) -> String {
    format!("{} +/- {}", render_dyadic(b.mid(), digits), render_mag_up(b.rad()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_scientific_constants() {
        assert_eq!(
            parse_decimal("2.21073e-5").unwrap(),
            q(221073, 10_000_000_000)
        );
        assert_eq!(parse_decimal("25.9592").unwrap(), q(259592, 10000));
        assert_eq!(parse_decimal("0").unwrap(), q(0, 1));
        assert_eq!(parse_decimal("-1.5E2").unwrap(), q(-150, 1));
        assert_eq!(parse_decimal(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "abc", "1.2.3", "1e", "e5", "--1", "1,5", "."] {
            assert!(parse_decimal(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn decimal_ball_encloses_exact_value() {
        let b = Ball::from_decimal("2.21073e-5", 128).unwrap();
        assert!(b.contains_rational(&q(221073, 10_000_000_000)));
        assert!(b.rad() <= Mag::pow2(b.mid().exp));
        let z = Ball::from_decimal("0", 64).unwrap();
        assert!(z.is_exact() && z.mid().is_zero());
    }

    #[test]
    fn renders_scientific_digits() {
        let b = Ball::from_i64(196884, 64);
        assert_eq!(b.to_decimal_string(6), "1.96884e+5 +/- 0");
        let third = Ball::from_ratio(&BigInt::from(-1), &BigInt::from(3), 64).unwrap();
        let s = third.to_decimal_string(5);
        assert!(s.starts_with("-3.3333e-1 +/- "), "{s}");
        assert_eq!(render_mag_up(Mag::from_u64_up(1, -1)), "5.00e-1");
    }
}
