//! Sign certification with precision escalation.

use serde::{Deserialize, Serialize};

use super::{Ball, BallError, DEFAULT_PRECISION_MAX, DEFAULT_PRECISION_START};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    StrictlyPositive,
    StrictlyNegative,
    Inconclusive,
}

impl Sign {
    pub fn of(b: &Ball) -> Sign {
        if b.is_positive() {
            Sign::StrictlyPositive
        } else if b.is_negative() {
            Sign::StrictlyNegative
        } else {
            Sign::Inconclusive
        }
    }

    pub fn is_strict(self) -> bool {
        self != Sign::Inconclusive
    }
}

/// Starting precision and cap for escalation, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: DEFAULT_PRECISION_START,
            max: DEFAULT_PRECISION_MAX,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u32, max: u32) -> PrecisionPolicy {
        PrecisionPolicy { start, max }
    }

    /// The doubling schedule `start, 2 start, ...`, ending exactly at `max`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut p = self.start.max(2).min(self.max);
        loop {
            out.push(p);
            if p >= self.max {
                break;
            }
            p = p.saturating_mul(2).min(self.max);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SignCertificate {
    pub expr: String,
    pub n: i64,
    pub sign: Sign,
    pub precision_used: u32,
    /// Last enclosure computed; `None` if evaluation never produced one.
    pub enclosure: Option<Ball>,
}

impl SignCertificate {
    pub fn is_positive(&self) -> bool {
        self.sign == Sign::StrictlyPositive
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::StrictlyNegative
    }

    pub fn witness(&self, digits: usize) -> String {
        match &self.enclosure {
            Some(b) => b.to_decimal_string(digits),
            None => "unavailable".to_string(),
        }
    }
}

/// Evaluates `eval` at increasing precision until the enclosure excludes
/// zero or the cap is reached.
///
/// Precision-limited evaluation failures (a divisor or logarithm argument
/// whose enclosure still meets zero) trigger escalation like a zero-straddling
/// result does. Definite domain violations are returned as errors.
pub fn certify_sign<F>(
    expr: &str,
    n: i64,
    policy: PrecisionPolicy,
    eval: F,
) -> Result<SignCertificate, BallError>
where
    F: Fn(u32) -> Result<Ball, BallError>,
{
    let mut last = None;
    let mut used = policy.start;
    for p in policy.schedule() {
        used = p;
        match eval(p) {
            Ok(b) => {
                let sign = Sign::of(&b);
                if sign.is_strict() {
                    return Ok(SignCertificate {
                        expr: expr.to_string(),
                        n,
                        sign,
                        precision_used: p,
                        enclosure: Some(b),
                    });
                }
                last = Some(b);
            }
            Err(e) if e.is_precision_limited() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(SignCertificate {
        expr: expr.to_string(),
        n,
        sign: Sign::Inconclusive,
        precision_used: used,
        enclosure: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::Mag;
    use proptest::prelude::*;

    #[test]
    fn schedule_doubles_to_cap() {
        assert_eq!(PrecisionPolicy::new(128, 4096).schedule(), vec![128, 256, 512, 1024, 2048, 4096]);
        assert_eq!(PrecisionPolicy::new(100, 300).schedule(), vec![100, 200, 300]);
        assert_eq!(PrecisionPolicy::new(64, 64).schedule(), vec![64]);
    }

    #[test]
    fn simple_positive_at_start() {
        let c = certify_sign("n-3", 5, PrecisionPolicy::default(), |p| {
            Ok(Ball::from_i64(5, p) - Ball::from_i64(3, p))
        })
        .unwrap();
        assert_eq!(c.sign, Sign::StrictlyPositive);
        assert_eq!(c.precision_used, 128);
    }

    #[test]
    fn escalates_until_resolved() {
        // pi - 3.14159265358979323846264338327950288 differs from zero by ~4e-36,
        // which 64 bits cannot resolve.
        let c = certify_sign("pi-approx", 0, PrecisionPolicy::new(64, 1024), |p| {
            Ok(Ball::pi(p) - Ball::from_decimal("3.14159265358979323846264338327950288", p)?)
        })
        .unwrap();
        assert_eq!(c.sign, Sign::StrictlyPositive);
        assert!(c.precision_used >= 128);
    }

    #[test]
    fn exact_zero_is_inconclusive() {
        let c = certify_sign("zero", 0, PrecisionPolicy::new(64, 256), |p| {
            Ok(Ball::pi(p) - Ball::pi(p))
        })
        .unwrap();
        assert_eq!(c.sign, Sign::Inconclusive);
        assert_eq!(c.precision_used, 256);
    }

    #[test]
    fn definite_domain_errors_propagate() {
        let r = certify_sign("log(-1)", 0, PrecisionPolicy::default(), |p| {
            Ball::from_i64(-1, p).log()
        });
        assert!(r.is_err());
    }

    proptest! {
        #[test]
        fn strict_sign_never_contains_zero(mid in -1000i64..1000, rad_exp in -20i64..12) {
            let c = certify_sign("x", 0, PrecisionPolicy::new(32, 64), |p| {
                Ok(Ball::from_i64(mid, p).with_radius(Mag::pow2(rad_exp)))
            }).unwrap();
            if let Some(b) = &c.enclosure {
                if c.sign.is_strict() {
                    prop_assert!(!b.contains_zero());
                }
            }
        }
    }
}
