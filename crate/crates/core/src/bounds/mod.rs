//! Closed-form bounds for `c(n)`, its ratio `r(n) = c(n+1)/c(n)` and its
//! second ratio `u(n) = c(n-1)c(n+1)/c(n)^2`.
//!
//! Every bound is a closed form in `n`, so it is evaluated at an arbitrary
//! real argument `x > 0`; the integer entry point adds the validity gate.

mod checks;
mod expansion;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{Ball, BallError};

pub use checks::{
    bound_order_check, lower_e_check, ratio_bound_consistency, ratio_direct, sandwich_check, Pair, RatioPair,
};
pub use expansion::{
    expansion_coeff, remainder_bound, remainder_bound_real, remainder_threshold, truncated_main,
    truncated_main_real, RemainderSearch,
};

/// Uniform remainder constant for the five-term expansion.
pub const REMAINDER_5: &str = "2.21073e-5";
/// Uniform remainder constant for the six-term expansion.
pub const REMAINDER_6: &str = "1.57696e-5";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("{name}(n) is only valid for n >= {valid_from}, got n = {n}")]
    BelowValidFrom { name: String, n: i64, valid_from: i64 },
    #[error(transparent)]
    Ball(#[from] BallError),
}

/// A bound function evaluable at real arguments.
pub trait BoundFn: Send + Sync {
    fn id(&self) -> String;

    /// Smallest integer `n` at which the bound is claimed.
    fn valid_from(&self) -> i64;

    /// The closed form at `x > 0`, with no validity gate.
    fn eval_real(&self, x: &Ball) -> Result<Ball, BallError>;

    fn eval(&self, n: i64, prec: u32) -> Result<Ball, BoundError> {
        if n < self.valid_from() {
            return Err(BoundError::BelowValidFrom {
                name: self.id(),
                n,
                valid_from: self.valid_from(),
            });
        }
        Ok(self.eval_real(&Ball::from_i64(n, prec))?)
    }

    /// Integer evaluation without the gate.
    fn eval_unchecked(&self, n: i64, prec: u32) -> Result<Ball, BallError> {
        self.eval_real(&Ball::from_i64(n, prec))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundName {
    A,
    B,
    D,
    E,
    F,
    G,
    H,
    K,
    L,
    M,
    P,
    Q,
}

impl BoundName {
    pub const ALL: [BoundName; 12] = [
        BoundName::A,
        BoundName::B,
        BoundName::D,
        BoundName::E,
        BoundName::F,
        BoundName::G,
        BoundName::H,
        BoundName::K,
        BoundName::L,
        BoundName::M,
        BoundName::P,
        BoundName::Q,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BoundName::A => "a",
            BoundName::B => "b",
            BoundName::D => "d",
            BoundName::E => "e",
            BoundName::F => "f",
            BoundName::G => "g",
            BoundName::H => "h",
            BoundName::K => "k",
            BoundName::L => "l",
            BoundName::M => "m",
            BoundName::P => "p",
            BoundName::Q => "q",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for BoundName {
    type Err = String;

    fn from_str(s: &str) -> Result<BoundName, String> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.symbol() == s)
            .ok_or_else(|| format!("unknown bound {s:?}"))
    }
}

impl BoundFn for BoundName {
    fn id(&self) -> String {
        self.symbol().to_string()
    }

    fn valid_from(&self) -> i64 {
        match self {
            BoundName::A | BoundName::B => 6,
            BoundName::K | BoundName::L => 7,
            BoundName::E => 2,
            _ => 1,
        }
    }

    fn eval_real(&self, x: &Ball) -> Result<Ball, BallError> {
        let arg = Arg::new(x)?;
        match self {
            BoundName::A => arg.scaled_sum(5, REMAINDER_5, 5, -1),
            BoundName::B => arg.scaled_sum(5, REMAINDER_5, 5, 1),
            BoundName::K => arg.scaled_sum(6, REMAINDER_6, 6, -1),
            BoundName::L => arg.scaled_sum(6, REMAINDER_6, 6, 1),
            BoundName::D => arg.series(5),
            BoundName::M => arg.series(6),
            BoundName::E => Ok(arg.exp_term()?.div_ball(&x.mul_ball(&arg.sqrt2))?),
            BoundName::H => arg.h(),
            BoundName::F => arg.correct_h(&[("25.9592", 5), ("-1.78935", 6), ("-18.3114", 7), ("-11.5407", 8)]),
            BoundName::G => arg.correct_h(&[("25.9593", 5), ("-0.78879", 6)]),
            BoundName::P => arg.u_bound(false),
            BoundName::Q => arg.u_bound(true),
        }
    }
}

/// `x^{1/4} (d(x) - C x^{-5/2}) - 1`, which is `a(x)/e(x) - 1`; its sign
/// decides `e <= a`.
pub fn value_gap(x: &Ball) -> Result<Ball, BallError> {
    let arg = Arg::new(x)?;
    let c = Ball::from_decimal(REMAINDER_5, arg.prec)?;
    let inner = arg.series(5)?.sub_ball(&c.mul_ball(&arg.inv_half(5)));
    Ok(arg.s.sqrt()?.mul_ball(&inner).sub_ball(&Ball::one(arg.prec)))
}

/// Shared subexpressions of every bound at one argument.
pub(crate) struct Arg {
    pub(crate) prec: u32,
    pub(crate) pi: Ball,
    /// `sqrt(x)`
    pub(crate) s: Ball,
    /// `1 / sqrt(x)`
    pub(crate) inv_s: Ball,
    pub(crate) sqrt2: Ball,
}

impl Arg {
    pub(crate) fn new(x: &Ball) -> Result<Arg, BallError> {
        if !x.is_positive() {
            return Err(BallError::DomainViolation { op: "bound argument must be positive" });
        }
        let prec = x.precision();
        let s = x.sqrt()?;
        let inv_s = s.recip()?;
        Ok(Arg {
            prec,
            pi: Ball::pi(prec),
            s,
            inv_s,
            sqrt2: Ball::from_i64(2, prec).sqrt()?,
        })
    }

    /// `x^{-k/2}`
    pub(crate) fn inv_half(&self, k: i64) -> Ball {
        self.inv_s.powi(k).expect("non-negative power")
    }

    fn int(&self, v: i64) -> Ball {
        Ball::from_i64(v, self.prec)
    }

    fn lit(&self, s: &str) -> Result<Ball, BallError> {
        Ball::from_decimal(s, self.prec)
    }

    /// `e^{4 pi sqrt x}`
    pub(crate) fn exp_term(&self) -> Result<Ball, BallError> {
        self.pi.mul_2exp(2).mul_ball(&self.s).exp()
    }

    /// `e^{4 pi sqrt x} / (sqrt 2 x^{3/4})`
    pub(crate) fn prefactor(&self) -> Result<Ball, BallError> {
        let x34 = self.s.mul_ball(&self.s.sqrt()?);
        self.exp_term()?.div_ball(&self.sqrt2.mul_ball(&x34))
    }

    /// `sum_{k<terms} (-1/(8 pi))^k (1,k) x^{-k/2}`
    pub(crate) fn series(&self, terms: u32) -> Result<Ball, BallError> {
        let w = self.inv_s.div_ball(&self.pi.mul_2exp(3))?.neg_ball();
        let mut acc = Ball::zero(self.prec);
        for k in (0..terms).rev() {
            let c = Ball::from_rational(&expansion_coeff(k), self.prec)?;
            acc = acc.mul_ball(&w).add_ball(&c);
        }
        Ok(acc)
    }

    /// `prefactor * (series(terms) + sign * C x^{-k/2})`
    fn scaled_sum(&self, terms: u32, constant: &str, k: i64, sign: i64) -> Result<Ball, BallError> {
        let corr = self.lit(constant)?.mul_ball(&self.inv_half(k)).mul_i64(sign);
        Ok(self.prefactor()?.mul_ball(&self.series(terms)?.add_ball(&corr)))
    }

    pub(crate) fn h(&self) -> Result<Ball, BallError> {
        let pi = &self.pi;
        let pi2 = pi.sqr();
        let pi3 = pi2.mul_ball(pi);
        let pi4 = pi2.sqr();
        let three_quarters = self.lit("0.75")?;
        let c1 = pi.mul_2exp(1);
        let c2 = pi2.mul_2exp(1).sub_ball(&three_quarters);
        let c3 = self
            .int(3)
            .div_ball(&pi.mul_i64(64))?
            .sub_ball(&pi.mul_2exp(1))
            .add_ball(&pi3.mul_i64(4).div_i64(3)?);
        let c4 = three_quarters
            .add_ball(&self.int(3).div_ball(&pi2.mul_i64(256))?)
            .sub_ball(&pi2.mul_i64(5).mul_2exp(-1))
            .add_ball(&pi4.mul_2exp(1).div_i64(3)?);
        let mut acc = self.int(1);
        for (k, c) in [c1, c2, c3, c4].iter().enumerate() {
            acc = acc.add_ball(&c.mul_ball(&self.inv_half(k as i64 + 1)));
        }
        Ok(acc)
    }

    /// `h(x) + sum c_j x^{-k_j/2}`
    fn correct_h(&self, terms: &[(&str, i64)]) -> Result<Ball, BallError> {
        let mut acc = self.h()?;
        for (c, k) in terms {
            acc = acc.add_ball(&self.lit(c)?.mul_ball(&self.inv_half(*k)));
        }
        Ok(acc)
    }

    /// Lower (`upper == false`) or upper bound for `u(x)`.
    fn u_bound(&self, upper: bool) -> Result<Ball, BallError> {
        let c = self.int(9).div_ball(&self.pi.mul_i64(128))?;
        let mut acc = self
            .int(1)
            .sub_ball(&self.pi.mul_ball(&self.inv_half(3)))
            .add_ball(&self.lit("0.75")?.mul_ball(&self.inv_half(4)));
        if upper {
            acc = acc
                .sub_ball(&c.mul_ball(&self.inv_half(5)))
                .add_ball(&self.lit("5.93249")?.mul_ball(&self.inv_half(6)));
        } else {
            let c = c.sub_ball(&self.int(1));
            acc = acc.sub_ball(&c.mul_ball(&self.inv_half(5)));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(name: BoundName, n: i64) -> f64 {
        name.eval_unchecked(n, 128).unwrap().to_f64()
    }

    #[test]
    fn validity_gates() {
        assert!(matches!(
            BoundName::A.eval(5, 128),
            Err(BoundError::BelowValidFrom { valid_from: 6, .. })
        ));
        assert!(BoundName::A.eval(6, 128).is_ok());
        assert!(BoundName::K.eval(6, 128).is_err());
        assert!(BoundName::E.eval(1, 128).is_err());
        assert!(BoundName::E.eval(2, 128).is_ok());
        for b in [BoundName::F, BoundName::G, BoundName::P, BoundName::Q] {
            assert!(b.eval(1, 64).is_ok());
        }
        assert_eq!("q".parse::<BoundName>().unwrap(), BoundName::Q);
    }

    #[test]
    fn e_at_two_matches_closed_form() {
        let pi = std::f64::consts::PI;
        let expect = (4.0 * pi * 2f64.sqrt()).exp() / (2.0 * 2f64.sqrt());
        let v = at(BoundName::E, 2);
        assert!((v / expect - 1.0).abs() < 1e-13, "{v} vs {expect}");
    }

    #[test]
    fn p_at_one_is_exact_combination() {
        let pi = std::f64::consts::PI;
        let expect = 11.0 / 4.0 - pi - 9.0 / (128.0 * pi);
        assert!((at(BoundName::P, 1) - expect).abs() < 1e-14);
    }

    #[test]
    fn h_tends_to_one() {
        let big = Ball::from_i64(10i64.pow(12), 128);
        let h = BoundName::H.eval_real(&big).unwrap();
        assert!((h.to_f64() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn float_reference_values() {
        // Double-precision transcriptions evaluated independently.
        let pi = std::f64::consts::PI;
        let n = 10f64;
        let h = 1.0
            + 2.0 * pi / n.sqrt()
            + (-0.75 + 2.0 * pi * pi) / n
            + (3.0 / (64.0 * pi) - 2.0 * pi + 4.0 * pi.powi(3) / 3.0) / n.powf(1.5)
            + (0.75 + 3.0 / (256.0 * pi * pi) - 2.5 * pi * pi + 2.0 * pi.powi(4) / 3.0) / (n * n);
        let f = h + 25.9592 / n.powf(2.5) - 1.78935 / n.powi(3) - 18.3114 / n.powf(3.5) - 11.5407 / n.powi(4);
        let g = h + 25.9593 / n.powf(2.5) - 0.78879 / n.powi(3);
        let q = 1.0 - pi / n.powf(1.5) + 0.75 / (n * n) - 9.0 / (128.0 * pi) / n.powf(2.5) + 5.93249 / n.powi(3);
        for (got, want) in [(at(BoundName::H, 10), h), (at(BoundName::F, 10), f), (at(BoundName::G, 10), g), (at(BoundName::Q, 10), q)] {
            assert!((got - want).abs() < 1e-12 * want.abs(), "{got} vs {want}");
        }
    }

    #[test]
    fn lower_and_upper_bounds_are_ordered() {
        for n in [6, 10, 50, 300] {
            let a = BoundName::A.eval(n, 128).unwrap();
            let b = BoundName::B.eval(n, 128).unwrap();
            assert!(b.sub_ball(&a).is_positive());
        }
        for n in [7, 20, 100] {
            let k = BoundName::K.eval(n, 128).unwrap();
            let l = BoundName::L.eval(n, 128).unwrap();
            assert!(l.sub_ball(&k).is_positive());
        }
    }

    #[test]
    fn value_gap_changes_sign_between_one_and_two() {
        let g1 = value_gap(&Ball::from_i64(1, 128)).unwrap();
        let g2 = value_gap(&Ball::from_i64(2, 128)).unwrap();
        assert!(g1.is_negative());
        assert!(g2.is_positive());
        assert!((g1.to_f64() + 0.0307).abs() < 1e-3);
    }
}
