//! Weight sequences, their specifications and the classical criteria.

pub mod certificate;
pub mod criteria;
pub mod spec;
pub mod transform;
pub mod weight;

pub use certificate::BoundCertificate;
pub use criteria::{
    carleman_partial_sums, check_derivation_closed, check_inclusion, check_log_convex,
    CarlemanSums, SupCheck, Variant,
};
pub use spec::{Family, SequenceSpec};
pub use transform::{power_substitute, PowerSubstitution};
pub use weight::WeightSequence;
