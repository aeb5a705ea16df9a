//! Sufficient conditions for sequence inequalities, stated in terms of
//! lower and upper bounds, and their application to `c(n)`.

mod brackets;
mod theorems;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{certify_sign, Ball, BallError, PrecisionPolicy, SignCertificate};
use crate::bounds::{BoundFn, BoundName};

pub use brackets::{bracket_check, bracket_root, BracketClaim, BracketExpr, RootBracket, Sample, BRACKET_SAMPLES, CLAIMS};
pub use theorems::{criterion_check, direct_check, direct_verdicts, run_theorem, Property, TheoremId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("{kind} criterion is defined for n >= {min}, got n = {n}")]
    OutOfDomain { kind: CriterionKind, n: i64, min: i64 },
    #[error(transparent)]
    Ball(#[from] BallError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionKind {
    /// `f(n) - g(n+1) > 0`, giving `r(n) > r(n+1)`.
    LogConcave,
    RootLogConvex,
    RootRatioLogConcave,
    HigherTuran,
    Laguerre2,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 5] = [
        CriterionKind::LogConcave,
        CriterionKind::RootLogConvex,
        CriterionKind::RootRatioLogConcave,
        CriterionKind::HigherTuran,
        CriterionKind::Laguerre2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CriterionKind::LogConcave => "log-concave",
            CriterionKind::RootLogConvex => "root-log-convex",
            CriterionKind::RootRatioLogConcave => "root-ratio-log-concave",
            CriterionKind::HigherTuran => "higher-turan",
            CriterionKind::Laguerre2 => "laguerre-2",
        }
    }

    /// Smallest `n` from which the criterion is claimed to hold for `c(n)`.
    pub fn threshold(self) -> i64 {
        match self {
            CriterionKind::LogConcave => 1,
            CriterionKind::RootLogConvex | CriterionKind::RootRatioLogConcave => 2,
            CriterionKind::HigherTuran | CriterionKind::Laguerre2 => 3,
        }
    }

    /// Smallest `n` at which the criterion expression is formed.
    pub fn domain_min(self) -> i64 {
        match self {
            CriterionKind::LogConcave | CriterionKind::HigherTuran => 1,
            CriterionKind::RootLogConvex | CriterionKind::RootRatioLogConcave | CriterionKind::Laguerre2 => 2,
        }
    }

    /// The index of the direct inequality a criterion pass at `n` implies.
    pub fn implied_index(self, n: i64) -> i64 {
        match self {
            CriterionKind::Laguerre2 => n - 2,
            _ => n,
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// `t(x, y) = 4(1-x)(1-y) - (1-xy)^2`
pub fn turan_t(x: &Ball, y: &Ball) -> Ball {
    let one = Ball::one(x.precision().max(y.precision()));
    let a = one.sub_ball(x).mul_ball(&one.sub_ball(y)).mul_2exp(2);
    let b = one.sub_ball(&x.mul_ball(y)).sqr();
    a.sub_ball(&b)
}

/// Labels of the four corner tests, in evaluation order.
pub const TURAN_CORNERS: [&str; 4] = ["t(p(n),p(n+1))", "t(p(n),q(n+1))", "t(q(n),p(n+1))", "t(q(n),q(n+1))"];

/// The bounds a criterion is built from.
#[derive(Clone)]
pub struct CriterionInstance {
    pub kind: CriterionKind,
    /// Lower bound of the sequence itself.
    pub lower_value: Arc<dyn BoundFn>,
    /// Bounds for `a(n+1)/a(n)`.
    pub ratio_lower: Arc<dyn BoundFn>,
    pub ratio_upper: Arc<dyn BoundFn>,
    /// Bounds for `a(n-1)a(n+1)/a(n)^2`.
    pub u_lower: Arc<dyn BoundFn>,
    pub u_upper: Arc<dyn BoundFn>,
    pub start_n: i64,
}

impl fmt::Debug for CriterionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CriterionInstance")
            .field("kind", &self.kind)
            .field("lower_value", &self.lower_value.id())
            .field("ratio_lower", &self.ratio_lower.id())
            .field("ratio_upper", &self.ratio_upper.id())
            .field("u_lower", &self.u_lower.id())
            .field("u_upper", &self.u_upper.id())
            .field("start_n", &self.start_n)
            .finish()
    }
}

impl CriterionInstance {
    /// The instance for `c(n)`: `e` below the sequence, `f, g` around
    /// `r(n)`, `p, q` around `u(n)`.
    pub fn j(kind: CriterionKind) -> CriterionInstance {
        CriterionInstance {
            kind,
            lower_value: Arc::new(BoundName::E),
            ratio_lower: Arc::new(BoundName::F),
            ratio_upper: Arc::new(BoundName::G),
            u_lower: Arc::new(BoundName::P),
            u_upper: Arc::new(BoundName::Q),
            start_n: kind.threshold(),
        }
    }

    fn shift(x: &Ball, k: i64) -> Ball {
        x.add_ball(&Ball::from_i64(k, x.precision()))
    }

    /// `f(x) - g(x+1)`
    pub fn ratio_gap(&self, x: &Ball) -> Result<Ball, BallError> {
        Ok(self.ratio_lower.eval_real(x)?.sub_ball(&self.ratio_upper.eval_real(&Self::shift(x, 1))?))
    }

    /// `D(x) = 2 log h(x) + x(x+1) log f(x+1) - x(x+3) log g(x)`
    pub fn root_log_convex_value(&self, x: &Ball) -> Result<Ball, BallError> {
        let h = self.lower_value.eval_real(x)?.log()?;
        let f1 = self.ratio_lower.eval_real(&Self::shift(x, 1))?.log()?;
        let g = self.ratio_upper.eval_real(x)?.log()?;
        let c1 = x.mul_ball(&Self::shift(x, 1));
        let c2 = x.mul_ball(&Self::shift(x, 3));
        Ok(h.mul_2exp(1).add_ball(&c1.mul_ball(&f1)).sub_ball(&c2.mul_ball(&g)))
    }

    /// `6 log h(x) + (x^2-x)(2x+5) log f(x) - (x^2+x)(x+2) log g(x-1) - (x^3-x) log g(x+1)`
    pub fn root_ratio_value(&self, x: &Ball) -> Result<Ball, BallError> {
        let prec = x.precision();
        let h = self.lower_value.eval_real(x)?.log()?;
        let f = self.ratio_lower.eval_real(x)?.log()?;
        let g_prev = self.ratio_upper.eval_real(&Self::shift(x, -1))?.log()?;
        let g_next = self.ratio_upper.eval_real(&Self::shift(x, 1))?.log()?;
        let x2 = x.sqr();
        let c_f = x2.sub_ball(x).mul_ball(&x.mul_2exp(1).add_ball(&Ball::from_i64(5, prec)));
        let c_prev = x2.add_ball(x).mul_ball(&Self::shift(x, 2));
        let c_next = x2.mul_ball(x).sub_ball(x);
        Ok(h.mul_i64(6)
            .add_ball(&c_f.mul_ball(&f))
            .sub_ball(&c_prev.mul_ball(&g_prev))
            .sub_ball(&c_next.mul_ball(&g_next)))
    }

    /// The four corner values, ordered as [`TURAN_CORNERS`].
    pub fn turan_values(&self, x: &Ball) -> Result<[Ball; 4], BallError> {
        let x1 = Self::shift(x, 1);
        let (p0, p1) = (self.u_lower.eval_real(x)?, self.u_lower.eval_real(&x1)?);
        let (q0, q1) = (self.u_upper.eval_real(x)?, self.u_upper.eval_real(&x1)?);
        Ok([turan_t(&p0, &p1), turan_t(&p0, &q1), turan_t(&q0, &p1), turan_t(&q0, &q1)])
    }

    /// `p(x-1) p(x)^2 p(x+1) - 4 q(x) + 3`
    pub fn laguerre_value(&self, x: &Ball) -> Result<Ball, BallError> {
        let lo = |k: i64| self.u_lower.eval_real(&Self::shift(x, k));
        let prod = lo(-1)?.mul_ball(&lo(0)?.sqr()).mul_ball(&lo(1)?);
        let q = self.u_upper.eval_real(x)?;
        Ok(prod.sub_ball(&q.mul_2exp(2)).add_ball(&Ball::from_i64(3, x.precision())))
    }

    fn gate(&self, n: i64) -> Result<(), CriterionError> {
        let min = match self.kind {
            CriterionKind::RootLogConvex | CriterionKind::RootRatioLogConcave => self.start_n.max(self.kind.domain_min()),
            _ => self.kind.domain_min(),
        };
        if n < min {
            return Err(CriterionError::OutOfDomain { kind: self.kind, n, min });
        }
        Ok(())
    }

    /// Certificates for the criterion expression(s) at integer `n`; the
    /// higher Turán criterion yields four.
    pub fn certify(&self, n: i64, policy: PrecisionPolicy) -> Result<Vec<SignCertificate>, CriterionError> {
        self.gate(n)?;
        let x = |p: u32| Ball::from_i64(n, p);
        let one = |label: &str, f: &dyn Fn(&Ball) -> Result<Ball, BallError>| {
            certify_sign(label, n, policy, |p| f(&x(p)))
        };
        let certs = match self.kind {
            CriterionKind::LogConcave => vec![one("f(n)-g(n+1)", &|x| self.ratio_gap(x))?],
            CriterionKind::RootLogConvex => vec![one("D(n)", &|x| self.root_log_convex_value(x))?],
            CriterionKind::RootRatioLogConcave => vec![one("F(n)", &|x| self.root_ratio_value(x))?],
            CriterionKind::Laguerre2 => vec![one("F(n)", &|x| self.laguerre_value(x))?],
            CriterionKind::HigherTuran => {
                let mut out = Vec::new();
                for (i, label) in TURAN_CORNERS.iter().enumerate() {
                    out.push(one(label, &|x| Ok(self.turan_values(x)?[i].clone()))?);
                }
                out
            }
        };
        Ok(certs)
    }
}

/// `2 log e(n) + n(n+1) log f(n+1) - n(n+3) log g(n)`
pub fn criterion_root_log_convex(n: i64, policy: PrecisionPolicy) -> Result<SignCertificate, CriterionError> {
    Ok(CriterionInstance::j(CriterionKind::RootLogConvex).certify(n, policy)?.remove(0))
}

/// `6 log e(n) + (n^2-n)(2n+5) log f(n) - (n^2+n)(n+2) log g(n-1) - (n^3-n) log g(n+1)`
pub fn criterion_root_ratio(n: i64, policy: PrecisionPolicy) -> Result<SignCertificate, CriterionError> {
    Ok(CriterionInstance::j(CriterionKind::RootRatioLogConcave).certify(n, policy)?.remove(0))
}

/// The four corner tests with `p, q` at `n` and `n+1`.
pub fn criterion_turan(n: i64, policy: PrecisionPolicy) -> Result<[SignCertificate; 4], CriterionError> {
    let v = CriterionInstance::j(CriterionKind::HigherTuran).certify(n, policy)?;
    Ok(v.try_into().expect("four corners"))
}

/// `p(n-1) p(n)^2 p(n+1) - 4 q(n) + 3`
pub fn criterion_laguerre(n: i64, policy: PrecisionPolicy) -> Result<SignCertificate, CriterionError> {
    Ok(CriterionInstance::j(CriterionKind::Laguerre2).certify(n, policy)?.remove(0))
}
