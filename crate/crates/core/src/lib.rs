//! Certified numerics for Denjoy–Carleman weight sequences and power
//! substitution.

pub mod bang;
pub mod coefficients;
pub mod constants;
pub mod error;
pub mod exact;
pub mod interval;
pub mod logreal;
pub mod sequence;
pub mod substitution;
pub mod verdict;

pub use error::{Error, Result};
pub use exact::ExactRational;
pub use interval::{Interval, Precision};
pub use logreal::LogReal;
pub use sequence::{Family, SequenceSpec, WeightSequence};
pub use verdict::{CheckReport, EvidenceRow, Finding, Outcome, Reason, Scale, Verdict};
