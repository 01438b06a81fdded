use serde::Serialize;

use crate::error::{Error, Result};
use crate::logreal::LogReal;
use crate::sequence::spec::SequenceSpec;
use crate::verdict::Enclosure64;

/// Asserts `|f^(n)| ≤ C·R^n·M'_n` on the named interval.
#[derive(Clone, Debug)]
pub struct BoundCertificate {
    c: LogReal,
    r: LogReal,
    interval_id: String,
    seq: SequenceSpec,
}

impl BoundCertificate {
    pub fn new(
        c: LogReal,
        r: LogReal,
        interval_id: impl Into<String>,
        seq: SequenceSpec,
    ) -> Result<Self> {
        // LogReal values are positive by construction; reject degenerate input.
        for (name, v) in [("C", &c), ("R", &r)] {
            if !v.log().lo().is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be strictly positive"
                )));
            }
        }
        Ok(BoundCertificate {
            c,
            r,
            interval_id: interval_id.into(),
            seq,
        })
    }

    pub fn c(&self) -> &LogReal {
        &self.c
    }

    pub fn r(&self) -> &LogReal {
        &self.r
    }

    pub fn interval_id(&self) -> &str {
        &self.interval_id
    }

    pub fn seq(&self) -> &SequenceSpec {
        &self.seq
    }

    /// Enclosure of `ln(C·R^n·M'_n)` given `ln M'_n`.
    pub fn log_ceiling(&self, n: u64, log_mprime: &LogReal) -> LogReal {
        self.c.mul(&self.r.powi(n as i64)).mul(log_mprime)
    }
}

#[derive(Serialize)]
struct CertificateView<'a> {
    c_log: Enclosure64,
    r_log: Enclosure64,
    interval: &'a str,
    seq: String,
}

impl Serialize for BoundCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateView {
            c_log: Enclosure64::of_log(&self.c),
            r_log: Enclosure64::of_log(&self.r),
            interval: &self.interval_id,
            seq: self.seq.to_string(),
        }
        .serialize(s)
    }
}
