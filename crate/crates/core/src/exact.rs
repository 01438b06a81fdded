//! Exact rational arithmetic on top of GMP.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(Rational);

impl ExactRational {
    pub fn new(num: impl Into<Integer>, den: impl Into<Integer>) -> Result<Self> {
        let den = den.into();
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(ExactRational(Rational::from((num.into(), den))))
    }

    pub fn zero() -> Self {
        ExactRational(Rational::new())
    }

    pub fn one() -> Self {
        ExactRational(Rational::from(1))
    }

    pub fn recip_u64(n: u64) -> Self {
        assert!(n > 0, "reciprocal of zero");
        ExactRational(Rational::from((1u64, n)))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Ordering::Greater
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactRational(Rational::from(self.0.abs_ref()))
    }

    /// Integer power; negative exponents require a non-zero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::InvalidArgument("negative power of zero".into()));
        }
        let mag = u32::try_from(e.unsigned_abs())
            .map_err(|_| Error::InvalidArgument(format!("exponent {e} too large")))?;
        let mut r = Rational::from(rug::ops::Pow::pow(&self.0, mag));
        if e < 0 {
            r.recip_mut();
        }
        Ok(ExactRational(r))
    }

    /// The positive rational `q` with `q^p = self`, when it exists.
    pub fn exact_root(&self, p: u32) -> Option<Self> {
        if !self.is_positive() || p == 0 {
            return None;
        }
        let root = |n: &Integer| -> Option<Integer> {
            let (r, rem) = n.root_rem_ref(p).into();
            let (r, rem): (Integer, Integer) = (r, rem);
            (rem == 0).then_some(r)
        };
        let num = root(self.0.numer())?;
        let den = root(self.0.denom())?;
        Some(ExactRational(Rational::from((num, den))))
    }

    /// Parses `"-3"`, `"7/4"`, `"2.5"` or `"1.25e-3"` exactly.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("not an exact rational: {s:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            return ExactRational::new(n, d).map_err(|_| bad());
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let all: Integer = format!("{int_part}{frac_part}0")
            .parse()
            .map_err(|_| bad())?;
        let scale = exp - frac_part.len() as i32 - 1;
        let ten = Rational::from(10);
        let factor = if scale >= 0 {
            Rational::from(rug::ops::Pow::pow(&ten, scale as u32))
        } else {
            Rational::from(rug::ops::Pow::pow(&ten, scale.unsigned_abs())).recip()
        };
        let mut r = Rational::from(all) * factor;
        if neg {
            r = -r;
        }
        Ok(ExactRational(r))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<Rational> for ExactRational {
    fn from(r: Rational) -> Self {
        ExactRational(r)
    }
}

impl From<Integer> for ExactRational {
    fn from(n: Integer) -> Self {
        ExactRational(Rational::from(n))
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational(Rational::from(n))
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        ExactRational(Rational::from(n))
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident) => {
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $f(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(Rational::from($tr::$f(&self.0, &rhs.0)))
            }
        }
        impl $tr<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $f(self, rhs: ExactRational) -> ExactRational {
                ExactRational($tr::$f(self.0, rhs.0))
            }
        }
        impl $tr<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $f(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($tr::$f(self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(Rational::from(-&self.0))
    }
}

pub fn factorial(n: u64) -> Integer {
    let n = u32::try_from(n).expect("factorial argument fits in u32");
    Integer::from(Integer::factorial(n))
}

/// `base^exp` for machine integers.
pub fn int_pow(base: u64, exp: u64) -> Integer {
    let exp = u32::try_from(exp).expect("exponent fits in u32");
    rug::ops::Pow::pow(Integer::from(base), exp)
}
