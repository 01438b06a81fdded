//! Weight-sequence families and their versioned JSON document form.
//!
//! ```json
//! {"version": 1, "family": "gevrey", "params": {"s": "1"}, "precision": 80}
//! ```

use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::interval::Precision;

pub const SPEC_VERSION: u64 = 1;

/// Deepest iterated logarithm supported. The shift for depth 4 is the
/// integer above `e↑↑4`, which has over a million decimal digits.
pub const MAX_ITERATED_LOG_DEPTH: u32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `M_n = 1`: the real-analytic class.
    Constant,
    /// `M_n = (n!)^s`.
    Gevrey { s: ExactRational },
    /// `M_n = (log^(k)(n_k + n))^(n_k + n) / (log^(k) n_k)^(n_k)` with `n_k`
    /// the smallest integer above `e↑↑k`.
    IteratedLog { k: u32 },
    /// `M_n = (log log(n + 3))^(n + 3) / (log log 3)^3`.
    ShiftedLogLog,
    /// Explicit values of `ln M_n`, starting with `ln M_0 = 0`.
    Table { log_values: Vec<ExactRational> },
    /// `M_n = base M_{pn}`.
    Transformed { base: Box<SequenceSpec>, p: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    pub family: Family,
    pub precision: Precision,
}

impl SequenceSpec {
    pub fn new(family: Family) -> Self {
        SequenceSpec {
            family,
            precision: Precision::DEFAULT,
        }
    }

    pub fn constant() -> Self {
        Self::new(Family::Constant)
    }

    pub fn gevrey(s: ExactRational) -> Self {
        Self::new(Family::Gevrey { s })
    }

    pub fn gevrey_int(s: i64) -> Self {
        Self::gevrey(ExactRational::from(s))
    }

    pub fn iterated_log(k: u32) -> Self {
        Self::new(Family::IteratedLog { k })
    }

    pub fn shifted_loglog() -> Self {
        Self::new(Family::ShiftedLogLog)
    }

    pub fn table(log_values: Vec<ExactRational>) -> Self {
        Self::new(Family::Table { log_values })
    }

    pub fn transformed(base: SequenceSpec, p: u32) -> Self {
        let precision = base.precision;
        SequenceSpec {
            family: Family::Transformed {
                base: Box::new(base),
                p,
            },
            precision,
        }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        if let Family::Transformed { base, .. } = &mut self.family {
            **base = base.as_ref().clone().with_precision(precision);
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::Constant | Family::ShiftedLogLog => Ok(()),
            Family::Gevrey { s } => {
                if s.is_positive() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "gevrey exponent must be positive, got {s}"
                    )))
                }
            }
            Family::IteratedLog { k } => {
                if (1..=MAX_ITERATED_LOG_DEPTH).contains(k) {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!(
                        "iterated_log depth must be in 1..={MAX_ITERATED_LOG_DEPTH}, got {k}"
                    )))
                }
            }
            Family::Table { log_values } => {
                match log_values.first() {
                    None => return Err(Error::InvalidSpec("table has no values".into())),
                    Some(v) if !v.is_zero() => {
                        return Err(Error::InvalidSpec(format!(
                            "table must start with log M_0 = 0, got {v}"
                        )))
                    }
                    _ => {}
                }
                if let Some(i) = log_values.windows(2).position(|w| w[1] < w[0]) {
                    return Err(Error::InvalidSpec(format!(
                        "table values must be non-decreasing; log M_{} > log M_{}",
                        i,
                        i + 1
                    )));
                }
                Ok(())
            }
            Family::Transformed { base, p } => {
                if *p < 2 {
                    return Err(Error::InvalidSpec(format!(
                        "power substitution needs p >= 2, got {p}"
                    )));
                }
                base.validate()
            }
        }
    }

    /// Innermost non-transformed spec and the accumulated index multiplier.
    pub fn strip_transforms(&self) -> (&SequenceSpec, u64) {
        match &self.family {
            Family::Transformed { base, p } => {
                let (inner, q) = base.strip_transforms();
                (inner, q * u64::from(*p))
            }
            _ => (self, 1),
        }
    }

    /// Family identity, ignoring working precision.
    pub fn same_family(&self, other: &SequenceSpec) -> bool {
        self.family_value() == other.family_value()
    }

    fn family_value(&self) -> Value {
        let mut v = self.to_value();
        strip_precision(&mut v);
        v
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Constant => "constant",
            Family::Gevrey { .. } => "gevrey",
            Family::IteratedLog { .. } => "iterated_log",
            Family::ShiftedLogLog => "shifted_loglog",
            Family::Table { .. } => "table",
            Family::Transformed { .. } => "transformed",
        }
    }

    pub fn to_value(&self) -> Value {
        let params = match &self.family {
            Family::Constant | Family::ShiftedLogLog => json!({}),
            Family::Gevrey { s } => json!({ "s": s.to_string() }),
            Family::IteratedLog { k } => json!({ "k": k }),
            Family::Table { log_values } => json!({
                "log_values": log_values.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            }),
            Family::Transformed { base, p } => json!({ "base": base.to_value(), "p": p }),
        };
        json!({
            "version": SPEC_VERSION,
            "family": self.family_name(),
            "params": params,
            "precision": self.precision.digits(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let spec = parse_document(v, None)?;
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Constant => write!(f, "constant"),
            Family::Gevrey { s } => write!(f, "gevrey(s={s})"),
            Family::IteratedLog { k } => write!(f, "iterated_log(k={k})"),
            Family::ShiftedLogLog => write!(f, "shifted_loglog"),
            Family::Table { log_values } => write!(f, "table(len={})", log_values.len()),
            Family::Transformed { base, p } => write!(f, "transformed({base}, p={p})"),
        }
    }
}

fn strip_precision(v: &mut Value) {
    if let Value::Object(map) = v {
        map.remove("precision");
        for (_, child) in map.iter_mut() {
            strip_precision(child);
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn rational_param(v: &Value, name: &str) -> Result<ExactRational> {
    match v {
        Value::String(s) => ExactRational::parse(s).map_err(|e| invalid(format!("{name}: {e}"))),
        Value::Number(n) => {
            ExactRational::parse(&n.to_string()).map_err(|e| invalid(format!("{name}: {e}")))
        }
        other => Err(invalid(format!(
            "{name} must be a number or string, got {other}"
        ))),
    }
}

fn uint_param(params: &Map<String, Value>, name: &str) -> Result<u32> {
    params
        .get(name)
        .ok_or_else(|| invalid(format!("missing parameter {name:?}")))?
        .as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| invalid(format!("parameter {name:?} must be a non-negative integer")))
}

fn parse_document(v: &Value, inherited: Option<Precision>) -> Result<SequenceSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("sequence spec must be a JSON object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "version" | "family" | "params" | "precision") {
            return Err(invalid(format!("unknown field {key:?}")));
        }
    }
    if let Some(ver) = obj.get("version") {
        if ver.as_u64() != Some(SPEC_VERSION) {
            return Err(invalid(format!("unsupported spec version {ver}")));
        }
    }
    let precision = match obj.get("precision") {
        None | Some(Value::Null) => inherited.unwrap_or_default(),
        Some(p) => {
            let digits = p
                .as_u64()
                .and_then(|d| u32::try_from(d).ok())
                .ok_or_else(|| invalid("precision must be a positive integer"))?;
            Precision::new(digits).map_err(|e| invalid(e.to_string()))?
        }
    };
    let empty = Map::new();
    let params = match obj.get("params") {
        None | Some(Value::Null) => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(invalid("params must be an object")),
    };
    let family_name = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("missing string field \"family\""))?;
    let family = match family_name {
        "constant" => Family::Constant,
        "gevrey" => Family::Gevrey {
            s: rational_param(
                params
                    .get("s")
                    .ok_or_else(|| invalid("gevrey needs parameter \"s\""))?,
                "s",
            )?,
        },
        "iterated_log" => Family::IteratedLog {
            k: uint_param(params, "k")?,
        },
        "shifted_loglog" | "paper8" => Family::ShiftedLogLog,
        "table" => {
            let values = params
                .get("log_values")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid("table needs an array parameter \"log_values\""))?;
            let log_values = values
                .iter()
                .enumerate()
                .map(|(i, v)| rational_param(v, &format!("log_values[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Family::Table { log_values }
        }
        "transformed" => {
            let base = params
                .get("base")
                .ok_or_else(|| invalid("transformed needs parameter \"base\""))?;
            Family::Transformed {
                base: Box::new(parse_document(base, Some(precision))?),
                p: uint_param(params, "p")?,
            }
        }
        other => return Err(invalid(format!("unknown family {other:?}"))),
    };
    Ok(SequenceSpec { family, precision }.with_precision(precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        let docs = [
            r#"{"family":"constant"}"#,
            r#"{"version":1,"family":"gevrey","params":{"s":"1/2"},"precision":40}"#,
            r#"{"family":"gevrey","params":{"s":2}}"#,
            r#"{"family":"iterated_log","params":{"k":2}}"#,
            r#"{"family":"shifted_loglog"}"#,
            r#"{"family":"table","params":{"log_values":["0","0.5",1]}}"#,
            r#"{"family":"transformed","params":{"base":{"family":"constant"},"p":3}}"#,
        ];
        for d in docs {
            let spec = SequenceSpec::from_json(d).unwrap_or_else(|e| panic!("{d}: {e}"));
            let again = SequenceSpec::from_json(&spec.to_json()).unwrap();
            assert_eq!(spec, again, "{d}");
        }
        let g = SequenceSpec::from_json(docs[1]).unwrap();
        assert_eq!(g.precision.digits(), 40);
        assert_eq!(
            g.family,
            Family::Gevrey {
                s: ExactRational::new(1, 2).unwrap()
            }
        );
    }

    #[test]
    fn rejects_malformed_documents() {
        let bad = [
            "not json",
            r#"[1,2]"#,
            r#"{"family":"nope"}"#,
            r#"{"family":"gevrey"}"#,
            r#"{"family":"gevrey","params":{"s":"-1"}}"#,
            r#"{"family":"iterated_log","params":{"k":0}}"#,
            r#"{"family":"iterated_log","params":{"k":4}}"#,
            r#"{"family":"table","params":{"log_values":["1","2"]}}"#,
            r#"{"family":"table","params":{"log_values":["0","2","1"]}}"#,
            r#"{"family":"table","params":{"log_values":[]}}"#,
            r#"{"family":"transformed","params":{"base":{"family":"constant"},"p":1}}"#,
            r#"{"family":"constant","version":2}"#,
            r#"{"family":"constant","precision":0}"#,
            r#"{"family":"constant","extra":1}"#,
        ];
        for d in bad {
            assert!(SequenceSpec::from_json(d).is_err(), "{d}");
        }
    }

    #[test]
    fn transformed_inherits_precision() {
        let d = r#"{"family":"transformed","precision":30,"params":{"base":{"family":"constant"},"p":2}}"#;
        let spec = SequenceSpec::from_json(d).unwrap();
        match &spec.family {
            Family::Transformed { base, .. } => assert_eq!(base.precision.digits(), 30),
            _ => unreachable!(),
        }
    }

    #[test]
    fn strip_and_compare() {
        let t =
            SequenceSpec::transformed(SequenceSpec::transformed(SequenceSpec::gevrey_int(1), 2), 3);
        let (base, p) = t.strip_transforms();
        assert_eq!(p, 6);
        assert!(base
            .same_family(&SequenceSpec::gevrey_int(1).with_precision(Precision::new(20).unwrap())));
        assert!(!base.same_family(&SequenceSpec::constant()));
        assert_eq!(
            t.to_string(),
            "transformed(transformed(gevrey(s=1), p=2), p=3)"
        );
    }
}
