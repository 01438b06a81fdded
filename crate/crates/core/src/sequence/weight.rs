use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use rug::float::Round;
use rug::{Integer, Rational};

use crate::constants::ln_factorial;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::logreal::LogReal;
use crate::sequence::spec::{Family, SequenceSpec};

pub const DEFAULT_MAX_INDEX: u64 = 1_000_000;

enum Kind {
    Constant,
    Gevrey(Rational),
    /// `ln M_n = (shift + n)·ln log^(depth)(shift + n) − offset`.
    LogTower {
        depth: u32,
        shift: u64,
        offset: Interval,
    },
    Table(Vec<LogReal>),
    Transformed {
        base: Box<WeightSequence>,
        p: u64,
    },
}

/// A weight sequence `M` with memoized enclosures of `ln M_n`.
///
/// Values are a pure function of the sequence spec and its precision. The memo is
/// safe for concurrent readers; concurrent fills of the same index compute
/// identical enclosures and the first insert wins.
pub struct WeightSequence {
    spec: SequenceSpec,
    kind: Kind,
    bits: u32,
    max_index: u64,
    memo: RwLock<HashMap<u64, LogReal>>,
}

impl fmt::Debug for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSequence")
            .field("spec", &self.spec.to_string())
            .field("bits", &self.bits)
            .field("max_index", &self.max_index)
            .finish()
    }
}

/// `ln log^(depth)(x)` enclosed from below and above.
fn ln_iterated_log(bits: u32, depth: u32, x: u64) -> Result<Interval> {
    let mut v = Interval::from_u64(bits, x);
    for _ in 0..=depth {
        v = v.ln().map_err(|_| {
            Error::PrecisionExhausted(format!("log^({depth})({x}) is not positive"))
        })?;
    }
    Ok(v)
}

/// Smallest integer strictly greater than `e↑↑depth`, certified from an
/// interval evaluation of the tower.
pub fn tower_shift(depth: u32) -> Result<u64> {
    let mut bits = 128;
    while bits <= 4096 {
        let mut t = Interval::from_u64(bits, 1);
        for _ in 0..depth {
            t = t.exp()?;
        }
        let lo = t.lo().to_integer_round(Round::Down).map(|(i, _)| i);
        let hi = t.hi().to_integer_round(Round::Down).map(|(i, _)| i);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo == hi {
                let next: Integer = hi + 1;
                return next.to_u64().ok_or_else(|| {
                    Error::PrecisionExhausted(format!("e↑↑{depth} does not fit in u64"))
                });
            }
        }
        bits *= 2;
    }
    Err(Error::PrecisionExhausted(format!(
        "could not separate e↑↑{depth} from an integer"
    )))
}

impl WeightSequence {
    pub fn new(spec: &SequenceSpec) -> Result<Self> {
        spec.validate()?;
        Self::build(spec, DEFAULT_MAX_INDEX)
    }

    fn build(spec: &SequenceSpec, max_index: u64) -> Result<Self> {
        let bits = spec.precision.bits();
        let kind = match &spec.family {
            Family::Constant => Kind::Constant,
            Family::Gevrey { s } => Kind::Gevrey(s.as_rational().clone()),
            Family::IteratedLog { k } => {
                let shift = tower_shift(*k)?;
                let offset = ln_iterated_log(bits, *k, shift)?.mul_u64(shift);
                Kind::LogTower {
                    depth: *k,
                    shift,
                    offset,
                }
            }
            Family::ShiftedLogLog => Kind::LogTower {
                depth: 2,
                shift: 3,
                offset: ln_iterated_log(bits, 2, 3)?.mul_u64(3),
            },
            Family::Table { log_values } => Kind::Table(
                log_values
                    .iter()
                    .map(|v| LogReal::from_log(Interval::from_rational(bits, v.as_rational())))
                    .collect(),
            ),
            Family::Transformed { base, p } => {
                let p = u64::from(*p);
                let base_spec = base.as_ref().clone().with_precision(spec.precision);
                Kind::Transformed {
                    base: Box::new(Self::build(&base_spec, max_index.saturating_mul(p))?),
                    p,
                }
            }
        };
        Ok(WeightSequence {
            spec: spec.clone(),
            kind,
            bits,
            max_index,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// Same sequence with a different index ceiling (memo is not carried over).
    pub fn with_max_index(self, max_index: u64) -> Result<Self> {
        Self::build(&self.spec, max_index)
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Largest index `n` for which `log_m(n)` is defined.
    pub fn index_limit(&self) -> u64 {
        match &self.kind {
            Kind::Table(v) => self.max_index.min(v.len() as u64 - 1),
            Kind::Transformed { base, p } => self.max_index.min(base.index_limit() / p),
            _ => self.max_index,
        }
    }

    /// For a power-substituted sequence, the base sequence and `p`.
    pub fn transformed_parts(&self) -> Option<(&WeightSequence, u64)> {
        match &self.kind {
            Kind::Transformed { base, p } => Some((base, *p)),
            _ => None,
        }
    }

    /// For the log-tower families, the shift `n_k` of the defining formula.
    pub fn tower_shift(&self) -> Option<u64> {
        match &self.kind {
            Kind::LogTower { shift, .. } => Some(*shift),
            _ => None,
        }
    }

    fn check_index(&self, n: u64) -> Result<()> {
        let limit = self.index_limit();
        if n > limit {
            Err(Error::IndexOutOfRange {
                index: n,
                max: limit,
            })
        } else {
            Ok(())
        }
    }

    /// Enclosure of `ln M_n`.
    pub fn log_m(&self, n: u64) -> Result<LogReal> {
        self.check_index(n)?;
        if let Some(v) = self.memo.read().expect("memo lock").get(&n) {
            return Ok(v.clone());
        }
        let v = self.compute(n)?;
        let mut memo = self.memo.write().expect("memo lock");
        Ok(memo.entry(n).or_insert(v).clone())
    }

    fn compute(&self, n: u64) -> Result<LogReal> {
        if n == 0 {
            return Ok(LogReal::one(self.bits));
        }
        match &self.kind {
            Kind::Constant => Ok(LogReal::one(self.bits)),
            Kind::Gevrey(s) => Ok(LogReal::from_log(
                ln_factorial(self.bits, n).mul_rational(s),
            )),
            Kind::LogTower {
                depth,
                shift,
                offset,
            } => {
                let x = shift + n;
                let head = ln_iterated_log(self.bits, *depth, x)?.mul_u64(x);
                Ok(LogReal::from_log(head.sub(offset)))
            }
            Kind::Table(values) => Ok(values[n as usize].clone()),
            Kind::Transformed { base, p } => base.log_m(p * n),
        }
    }

    /// Enclosure of `ln M'_n = ln(n!·M_n)`.
    pub fn log_mprime(&self, n: u64) -> Result<LogReal> {
        let m = self.log_m(n)?;
        Ok(m.mul(&LogReal::from_log(ln_factorial(self.bits, n))))
    }

    /// `m_k = M'_{k+1} / M'_k`.
    pub fn ratio_m(&self, k: u64) -> Result<LogReal> {
        Ok(self.log_mprime(k + 1)?.div(&self.log_mprime(k)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, ExactRational};

    fn seq(spec: SequenceSpec) -> WeightSequence {
        WeightSequence::new(&spec).unwrap()
    }

    #[test]
    fn tower_shifts() {
        assert_eq!(tower_shift(1).unwrap(), 3);
        assert_eq!(tower_shift(2).unwrap(), 16);
        assert_eq!(tower_shift(3).unwrap(), 3_814_280);
    }

    #[test]
    fn constant_is_exactly_one() {
        let c = seq(SequenceSpec::constant());
        let v = c.log_m(17).unwrap();
        assert!(v.is_exact());
        assert_eq!(*v.log().lo(), 0);
        assert!(c
            .log_mprime(4)
            .unwrap()
            .contains_rational(&Rational::from(24)));
    }

    #[test]
    fn gevrey_one_is_factorial() {
        let g = seq(SequenceSpec::gevrey_int(1));
        assert!(g.log_m(3).unwrap().contains_rational(&Rational::from(6)));
        assert!(g
            .log_mprime(4)
            .unwrap()
            .contains_rational(&Rational::from(576)));
        assert!(g.ratio_m(2).unwrap().contains_rational(&Rational::from(9)));
    }

    #[test]
    fn index_zero_is_exact_for_every_family() {
        for spec in [
            SequenceSpec::constant(),
            SequenceSpec::gevrey_int(2),
            SequenceSpec::iterated_log(1),
            SequenceSpec::iterated_log(2),
            SequenceSpec::shifted_loglog(),
            SequenceSpec::transformed(SequenceSpec::iterated_log(1), 2),
        ] {
            let s = seq(spec.clone());
            assert!(s.log_m(0).unwrap().is_exact(), "{spec}");
            assert!(s.log_mprime(0).unwrap().is_exact(), "{spec}");
        }
    }

    #[test]
    fn memo_refill_is_identical() {
        let a = seq(SequenceSpec::iterated_log(2));
        let first = a.log_m(40).unwrap();
        let b = seq(SequenceSpec::iterated_log(2));
        assert_eq!(first, b.log_m(40).unwrap());
        assert_eq!(first, a.log_m(40).unwrap());
    }

    #[test]
    fn index_range_is_enforced() {
        let t = seq(SequenceSpec::table(vec![
            ExactRational::zero(),
            ExactRational::one(),
        ]));
        assert!(t.log_m(1).unwrap().is_exact());
        assert!(matches!(
            t.log_m(2),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        ));
        let c = seq(SequenceSpec::constant()).with_max_index(10).unwrap();
        assert!(c.log_m(11).is_err());
        let tr = seq(SequenceSpec::transformed(SequenceSpec::constant(), 3));
        assert_eq!(tr.index_limit(), DEFAULT_MAX_INDEX);
    }

    #[test]
    fn transformed_reindexes() {
        let g = seq(SequenceSpec::gevrey_int(1));
        let t = seq(SequenceSpec::transformed(SequenceSpec::gevrey_int(1), 2));
        assert_eq!(t.log_m(5).unwrap(), g.log_m(10).unwrap());
        assert!(t
            .log_m(2)
            .unwrap()
            .contains_rational(&Rational::from(factorial(4))));
    }

    #[test]
    fn shifted_loglog_values() {
        let s = seq(SequenceSpec::shifted_loglog());
        // M_1 = (ln ln 4)^4 / (ln ln 3)^3 ≈ 13.6.
        let (lo, hi) = s.log_m(1).unwrap().to_linear().unwrap().to_f64_outward();
        let expect = 4.0f64.ln().ln().powi(4) / 3.0f64.ln().ln().powi(3);
        assert!(lo <= expect * (1.0 + 1e-12) && expect * (1.0 - 1e-12) <= hi);
    }
}
