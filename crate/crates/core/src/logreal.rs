//! Positive reals carried as enclosures of their natural logarithm.
//!
//! Weight-sequence values overflow any fixed-width float long before the
//! indices we sweep, so every magnitude is stored as an interval of `ln x`.
//! The represented set is `[exp(lo), exp(hi)]`; equivalently
//! `[exp(mid − r), exp(mid + r)]` with `mid = log_mid()` and `r = radius()`.

use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::interval::{rounded, Interval};
use crate::verdict::Outcome;

#[derive(Clone, PartialEq)]
pub struct LogReal {
    log: Interval,
}

impl fmt::Debug for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp{:?}", self.log)
    }
}

/// `ln(e^x + e^y)` rounded in the given direction. Increasing in both
/// arguments, and every step below is increasing in its input, so rounding
/// each step the same way bounds the exact value.
fn log_sum_exp(prec: u32, x: &Float, y: &Float, round: Round) -> Float {
    let (big, small) = if x >= y { (x, y) } else { (y, x) };
    let mut t = rounded(prec, small - big, round);
    t.exp_round(round);
    t.ln_1p_round(round);
    rounded(prec, big + &t, round)
}

impl LogReal {
    /// Exactly 1.
    pub fn one(prec: u32) -> Self {
        LogReal {
            log: Interval::zero(prec),
        }
    }

    pub fn from_log(log: Interval) -> Self {
        LogReal { log }
    }

    pub fn from_u64(prec: u32, n: u64) -> Result<Self> {
        Self::from_integer(prec, &Integer::from(n))
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Result<Self> {
        if *n <= 0 {
            return Err(Error::InvalidArgument(format!(
                "LogReal needs a positive value, got {n}"
            )));
        }
        Ok(LogReal {
            log: Interval::from_integer(prec, n).ln()?,
        })
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Result<Self> {
        if *q <= 0 {
            return Err(Error::InvalidArgument(format!(
                "LogReal needs a positive value, got {q}"
            )));
        }
        Ok(LogReal {
            log: Interval::from_rational(prec, q).ln()?,
        })
    }

    /// Enclosure of a strictly positive linear-domain interval.
    pub fn from_linear(iv: &Interval) -> Result<Self> {
        Ok(LogReal { log: iv.ln()? })
    }

    pub fn log(&self) -> &Interval {
        &self.log
    }

    pub fn prec(&self) -> u32 {
        self.log.prec()
    }

    pub fn log_mid(&self) -> Float {
        self.log.mid()
    }

    /// Upper bound on the distance from `log_mid()` to either endpoint.
    pub fn radius(&self) -> Float {
        let prec = self.prec();
        let mid = self.log_mid();
        let a = rounded(prec, &mid - self.log.lo(), Round::Up);
        let b = rounded(prec, self.log.hi() - &mid, Round::Up);
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn is_exact(&self) -> bool {
        self.log.is_exact()
    }

    pub fn mul(&self, other: &LogReal) -> LogReal {
        LogReal {
            log: self.log.add(&other.log),
        }
    }

    pub fn div(&self, other: &LogReal) -> LogReal {
        LogReal {
            log: self.log.sub(&other.log),
        }
    }

    pub fn recip(&self) -> LogReal {
        LogReal {
            log: self.log.neg(),
        }
    }

    pub fn powi(&self, k: i64) -> LogReal {
        self.pow_rational(&Rational::from(k))
    }

    pub fn pow_rational(&self, q: &Rational) -> LogReal {
        LogReal {
            log: self.log.mul_rational(q),
        }
    }

    /// `n`-th root, `n ≥ 1`.
    pub fn root(&self, n: u64) -> LogReal {
        LogReal {
            log: self.log.div_u64(n),
        }
    }

    /// Linear-domain sum `self + other`.
    pub fn add(&self, other: &LogReal) -> LogReal {
        let prec = self.prec().max(other.prec());
        let lo = log_sum_exp(prec, self.log.lo(), other.log.lo(), Round::Down);
        let hi = log_sum_exp(prec, self.log.hi(), other.log.hi(), Round::Up);
        LogReal {
            log: Interval::new(lo, hi).expect("ordered endpoints"),
        }
    }

    /// Widens the upper end by a non-negative addend bounded by `extra`,
    /// i.e. encloses `self + t` for every `t ∈ [0, extra]`.
    pub fn add_upper(&self, extra: &LogReal) -> LogReal {
        let prec = self.prec().max(extra.prec());
        let hi = log_sum_exp(prec, self.log.hi(), extra.log.hi(), Round::Up);
        LogReal {
            log: Interval::new(self.log.lo().clone(), hi).expect("ordered endpoints"),
        }
    }

    /// Safe comparison of `self ≤ other`.
    pub fn le(&self, other: &LogReal) -> Outcome {
        self.log.le(&other.log)
    }

    /// Containment test against the outward-rounded linear enclosure.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.to_linear()
            .map(|lin| lin.contains_rational(q))
            .unwrap_or(false)
    }

    /// Linear-domain enclosure; fails when the value leaves the exponent range.
    pub fn to_linear(&self) -> Result<Interval> {
        self.log.exp()
    }

    pub fn log_bounds_f64(&self) -> (f64, f64) {
        self.log.to_f64_outward()
    }
}
