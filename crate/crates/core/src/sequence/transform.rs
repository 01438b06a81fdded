//! Power substitution `M ↦ M^(p)` with `M^(p)_n = M_{pn}`.

use crate::error::{Error, Result};
use crate::logreal::LogReal;
use crate::sequence::spec::SequenceSpec;
use crate::sequence::weight::WeightSequence;

pub struct PowerSubstitution {
    pub spec: SequenceSpec,
    pub seq: WeightSequence,
    p: u64,
}

pub fn power_substitute(spec: &SequenceSpec, p: u32) -> Result<PowerSubstitution> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "substitution exponent must be at least 2, got {p}"
        )));
    }
    let spec = SequenceSpec::transformed(spec.clone(), p).with_precision(spec.precision);
    let seq = WeightSequence::new(&spec)?;
    Ok(PowerSubstitution {
        spec,
        seq,
        p: u64::from(p),
    })
}

impl PowerSubstitution {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `ln M^(p)_n = ln M_{pn}`.
    pub fn log_m(&self, n: u64) -> Result<LogReal> {
        self.seq.log_m(n)
    }

    /// `M'^(p)_n = M'_{pn} / n^{(p−1)n}`, with `M'^(p)_0 = 1`.
    pub fn log_mprime(&self, n: u64) -> Result<LogReal> {
        let (base, p) = self.seq.transformed_parts().expect("transformed sequence");
        if n == 0 {
            return Ok(LogReal::one(self.seq.bits()));
        }
        let damp = LogReal::from_u64(self.seq.bits(), n)?.powi(((p - 1) * n) as i64);
        Ok(base.log_mprime(p * n)?.div(&damp))
    }
}
