//! Three-valued verdicts and the per-check evidence reports built from them.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Rational};
use serde::{Serialize, Serializer};

use crate::interval::Interval;
use crate::logreal::LogReal;

/// Maximum number of witness rows copied into a [`Verdict`].
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Confirmed,
    Refuted,
    Inconclusive,
}

impl Outcome {
    fn severity(self) -> u8 {
        match self {
            Outcome::Confirmed => 0,
            Outcome::Inconclusive => 1,
            Outcome::Refuted => 2,
        }
    }

    /// Refuted dominates Inconclusive, which dominates Confirmed.
    pub fn combine(self, other: Outcome) -> Outcome {
        if other.severity() > self.severity() {
            other
        } else {
            self
        }
    }

    pub fn all<I: IntoIterator<Item = Outcome>>(it: I) -> Outcome {
        it.into_iter().fold(Outcome::Confirmed, Outcome::combine)
    }

    pub fn from_ordering_le(ord: Ordering) -> Outcome {
        if ord == Ordering::Greater {
            Outcome::Refuted
        } else {
            Outcome::Confirmed
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Confirmed => "confirmed",
            Outcome::Refuted => "refuted",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    SymbolicComparison,
    IntervalSeparation,
    DepthExhausted,
    PrecisionExhausted,
}

/// What a check concluded about its subject, when the conclusion is not just
/// "the claimed inequality holds".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Finding {
    Holds,
    Divergent,
    Convergent,
    Bounded,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Row values are enclosures of natural logarithms.
    Log,
    Linear,
}

/// Outward-rounded `f64` view of an enclosure, for reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure64 {
    pub lo: f64,
    pub hi: f64,
}

pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.17e}")
    }
}

impl Serialize for Enclosure64 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_f64(self.lo), format_f64(self.hi)].serialize(s)
    }
}

impl Enclosure64 {
    pub fn point(x: f64) -> Self {
        Enclosure64 { lo: x, hi: x }
    }

    pub fn of_interval(iv: &Interval) -> Self {
        let (lo, hi) = iv.to_f64_outward();
        Enclosure64 { lo, hi }
    }

    /// Bounds on the natural logarithm of the value.
    pub fn of_log(x: &LogReal) -> Self {
        Self::of_interval(x.log())
    }

    pub fn of_rational(q: &Rational) -> Self {
        let lo = Float::with_val_round(64, q, Round::Down).0;
        let hi = Float::with_val_round(64, q, Round::Up).0;
        Enclosure64 {
            lo: lo.to_f64_round(Round::Down),
            hi: hi.to_f64_round(Round::Up),
        }
    }

    /// Bounds on `ln q` for `q ≥ 0`; zero maps to `-inf`.
    pub fn log_of_rational(q: &Rational) -> Self {
        match q.cmp0() {
            Ordering::Greater => {
                let iv = Interval::from_rational(96, q)
                    .ln()
                    .expect("positive rational");
                Self::of_interval(&iv)
            }
            _ => Enclosure64::point(f64::NEG_INFINITY),
        }
    }
}

/// One evidence row. For inequality checks `value` encloses the left-hand
/// side and `bound` the right-hand side of the claimed `value ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvidenceRow {
    pub index: Vec<i64>,
    pub value: Enclosure64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Enclosure64>,
    pub outcome: Outcome,
}

impl EvidenceRow {
    pub fn new(
        index: Vec<i64>,
        value: Enclosure64,
        bound: Option<Enclosure64>,
        outcome: Outcome,
    ) -> Self {
        EvidenceRow {
            index,
            value,
            bound,
            outcome,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: Reason,
    pub evidence: Vec<EvidenceRow>,
}

impl Verdict {
    /// Aggregates per-row outcomes. Witnesses are the rows carrying the
    /// aggregate outcome when that outcome is not `Confirmed`.
    pub fn aggregate(rows: &[EvidenceRow]) -> Verdict {
        let outcome = Outcome::all(rows.iter().map(|r| r.outcome));
        let reason = match outcome {
            Outcome::Inconclusive => Reason::PrecisionExhausted,
            _ => Reason::IntervalSeparation,
        };
        let evidence = if outcome == Outcome::Confirmed {
            Vec::new()
        } else {
            rows.iter()
                .filter(|r| r.outcome == outcome)
                .take(MAX_WITNESSES)
                .cloned()
                .collect()
        };
        Verdict {
            outcome,
            reason,
            evidence,
        }
    }

    pub fn new(outcome: Outcome, reason: Reason, evidence: Vec<EvidenceRow>) -> Verdict {
        Verdict {
            outcome,
            reason,
            evidence,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub claim: String,
    pub index_names: Vec<String>,
    pub scale: Scale,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finding: Option<Finding>,
    pub verdict: Verdict,
    pub rows: Vec<EvidenceRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Report whose verdict is the aggregate of its rows. Rows are sorted by
    /// index so the report does not depend on evaluation order.
    pub fn from_rows(
        name: impl Into<String>,
        claim: impl Into<String>,
        index_names: &[&str],
        scale: Scale,
        mut rows: Vec<EvidenceRow>,
    ) -> CheckReport {
        rows.sort_by(|a, b| a.index.cmp(&b.index));
        let verdict = Verdict::aggregate(&rows);
        let finding = (verdict.outcome == Outcome::Confirmed).then_some(Finding::Holds);
        CheckReport {
            name: name.into(),
            claim: claim.into(),
            index_names: index_names.iter().map(|s| s.to_string()).collect(),
            scale,
            finding,
            verdict,
            rows,
            notes: Vec::new(),
        }
    }

    pub fn outcome(&self) -> Outcome {
        self.verdict.outcome
    }

    pub fn is_confirmed(&self) -> bool {
        self.verdict.outcome == Outcome::Confirmed
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.rows.iter().filter(|r| r.outcome == outcome).count()
    }
}
