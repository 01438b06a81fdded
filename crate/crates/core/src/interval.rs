//! Closed real intervals with MPFR endpoints and outward (directed) rounding.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper
//! endpoint toward +∞, so the exact result of the real operation applied to
//! any points of the operands lies inside the returned interval.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::Outcome;

/// Working precision in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(80);
    /// Upper limit accepted from configuration documents.
    pub const MAX_DIGITS: u32 = 100_000;

    pub fn new(digits: u32) -> Result<Self> {
        if digits == 0 || digits > Self::MAX_DIGITS {
            return Err(Error::InvalidArgument(format!(
                "precision must be in 1..={} decimal digits, got {digits}",
                Self::MAX_DIGITS
            )));
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    /// Binary precision used for MPFR endpoints, with guard bits.
    pub fn bits(self) -> u32 {
        (f64::from(self.0) * std::f64::consts::LOG2_10).ceil() as u32 + 24
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

pub(crate) fn rounded<T>(prec: u32, val: T, round: Round) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round).0
}

fn down<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    rounded(prec, val, Round::Down)
}

fn up<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    rounded(prec, val, Round::Up)
}

fn min_f(a: Float, b: Float) -> Float {
    if a <= b {
        a
    } else {
        b
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if a >= b {
        a
    } else {
        b
    }
}

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_f64_outward();
        write!(f, "[{lo:e}, {hi:e}]")
    }
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        let iv = Interval { lo, hi };
        iv.check_finite()?;
        if iv.lo > iv.hi {
            return Err(Error::InvalidArgument("interval with lo > hi".into()));
        }
        Ok(iv)
    }

    pub fn point(x: Float) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Float::new(prec))
    }

    pub fn from_u64(prec: u32, n: u64) -> Self {
        Interval {
            lo: down(prec, n),
            hi: up(prec, n),
        }
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        Interval {
            lo: down(prec, n),
            hi: up(prec, n),
        }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Interval {
            lo: down(prec, q),
            hi: up(prec, q),
        }
    }

    pub fn pi(prec: u32) -> Self {
        Interval {
            lo: down(prec, Constant::Pi),
            hi: up(prec, Constant::Pi),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.lo.is_finite() && self.hi.is_finite() {
            Ok(())
        } else {
            Err(Error::PrecisionExhausted(
                "enclosure endpoint left the representable exponent range".into(),
            ))
        }
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    /// `self` lies inside `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.hi.prec(), -&self.hi),
            hi: Float::with_val(self.lo.prec(), -&self.lo),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let prec = self.prec().max(other.prec());
        Interval {
            lo: down(prec, &self.lo + &other.lo),
            hi: up(prec, &self.hi + &other.hi),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let prec = self.prec().max(other.prec());
        Interval {
            lo: down(prec, &self.lo - &other.hi),
            hi: up(prec, &self.hi - &other.lo),
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let prec = self.prec().max(other.prec());
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| down(prec, *a * *b))
            .reduce(min_f)
            .expect("four candidates");
        let hi = pairs
            .iter()
            .map(|(a, b)| up(prec, *a * *b))
            .reduce(max_f)
            .expect("four candidates");
        Interval { lo, hi }
    }

    pub fn mul_rational(&self, q: &Rational) -> Interval {
        let prec = self.prec();
        if q.cmp0() != Ordering::Less {
            Interval {
                lo: down(prec, &self.lo * q),
                hi: up(prec, &self.hi * q),
            }
        } else {
            Interval {
                lo: down(prec, &self.hi * q),
                hi: up(prec, &self.lo * q),
            }
        }
    }

    pub fn mul_u64(&self, n: u64) -> Interval {
        self.mul_rational(&Rational::from(n))
    }

    /// Division by a positive integer.
    pub fn div_u64(&self, n: u64) -> Interval {
        assert!(n > 0, "division by zero");
        self.mul_rational(&Rational::from((1u64, n)))
    }

    pub fn exp(&self) -> Result<Interval> {
        let prec = self.prec();
        let mut lo = down(prec, &self.lo);
        lo.exp_round(Round::Down);
        let mut hi = up(prec, &self.hi);
        hi.exp_round(Round::Up);
        let iv = Interval { lo, hi };
        iv.check_finite()?;
        Ok(iv)
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Result<Interval> {
        if self.lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::InvalidArgument(
                "logarithm of an interval that is not strictly positive".into(),
            ));
        }
        let prec = self.prec();
        let mut lo = down(prec, &self.lo);
        lo.ln_round(Round::Down);
        let mut hi = up(prec, &self.hi);
        hi.ln_round(Round::Up);
        Ok(Interval { lo, hi })
    }

    /// Enclosure of `cos` over the interval, via `|cos x − cos lo| ≤ x − lo`.
    pub fn cos(&self) -> Interval {
        let prec = self.prec();
        let mut c_lo = down(prec, &self.lo);
        c_lo.cos_round(Round::Down);
        let mut c_hi = up(prec, &self.lo);
        c_hi.cos_round(Round::Up);
        let w = self.width();
        let one = Float::with_val(prec, 1);
        let minus_one = Float::with_val(prec, -1);
        let lo = max_f(down(prec, &c_lo - &w), minus_one);
        let hi = min_f(up(prec, &c_hi + &w), one);
        Interval { lo, hi }
    }

    /// Componentwise maximum: encloses `max(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: max_f(self.lo.clone(), other.lo.clone()),
            hi: max_f(self.hi.clone(), other.hi.clone()),
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: min_f(self.lo.clone(), other.lo.clone()),
            hi: max_f(self.hi.clone(), other.hi.clone()),
        }
    }

    /// Safe comparison of the claim `x ≤ y` for `x ∈ self`, `y ∈ other`.
    pub fn le(&self, other: &Interval) -> Outcome {
        if self.hi <= other.lo {
            Outcome::Confirmed
        } else if self.lo > other.hi {
            Outcome::Refuted
        } else {
            Outcome::Inconclusive
        }
    }

    pub fn to_f64_outward(&self) -> (f64, f64) {
        (
            self.lo.to_f64_round(Round::Down),
            self.hi.to_f64_round(Round::Up),
        )
    }

    /// Nearest-rounded midpoint.
    pub fn mid(&self) -> Float {
        let prec = self.prec();
        let mut m = Float::with_val(prec + 1, &self.lo + &self.hi);
        m /= 2;
        Float::with_val(prec, m)
    }
}
