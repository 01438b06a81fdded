use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use quasiseq::bang::BangRow;
use quasiseq::coefficients::CknRow;
use quasiseq::verdict::{format_f64 as fmt, EvidenceRow, Finding, Reason, Scale, Verdict};
use quasiseq::{CheckReport, Outcome};

use crate::config::Format;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub claim: String,
    pub index_names: Vec<String>,
    pub scale: Scale,
    pub finding: Option<Finding>,
    pub verdict: Verdict,
    pub evidence: Vec<EvidenceRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub ms: Option<u64>,
}

impl CheckEntry {
    pub fn new(report: CheckReport, ms: Option<u64>) -> Self {
        CheckEntry {
            name: report.name,
            claim: report.claim,
            index_names: report.index_names,
            scale: report.scale,
            finding: report.finding,
            verdict: report.verdict,
            evidence: report.rows,
            notes: report.notes,
            ms,
        }
    }

    pub fn outcome(&self) -> Outcome {
        self.verdict.outcome
    }
}

/// Extra tables emitted instead of the generic rows in CSV mode.
#[derive(Clone, Debug, Default)]
pub enum Table {
    #[default]
    None,
    Ckn(Vec<CknRow>),
    Bang(Vec<BangRow>),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool_version: &'static str,
    pub config: Value,
    pub checks: Vec<CheckEntry>,
    #[serde(skip)]
    pub table: Table,
}

impl RunReport {
    pub fn outcome(&self) -> Outcome {
        Outcome::all(self.checks.iter().map(CheckEntry::outcome))
    }

    /// 0 all confirmed, 1 any refuted, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.outcome() {
            Outcome::Confirmed => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, crate::CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(quasiseq::Error::from)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<String, crate::CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Table::Ckn(rows) => {
                w.write_record(CknRow::CSV_HEADER)
                    .map_err(quasiseq::Error::from)?;
                for r in rows {
                    w.write_record(r.csv_record())
                        .map_err(quasiseq::Error::from)?;
                }
            }
            Table::Bang(rows) => {
                w.write_record(BangRow::CSV_HEADER)
                    .map_err(quasiseq::Error::from)?;
                for r in rows {
                    w.write_record(r.csv_record())
                        .map_err(quasiseq::Error::from)?;
                }
            }
            Table::None => {
                w.write_record(GENERIC_HEADER)
                    .map_err(quasiseq::Error::from)?;
                for c in &self.checks {
                    for r in &c.evidence {
                        w.write_record(generic_record(&c.name, r))
                            .map_err(quasiseq::Error::from)?;
                    }
                }
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| crate::CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub const GENERIC_HEADER: [&str; 7] = [
    "check", "index", "value_lo", "value_hi", "bound_lo", "bound_hi", "verdict",
];

fn generic_record(check: &str, r: &EvidenceRow) -> [String; 7] {
    let index = r
        .index
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(";");
    let (blo, bhi) = r
        .bound
        .map_or((String::new(), String::new()), |b| (fmt(b.lo), fmt(b.hi)));
    [
        check.to_string(),
        index,
        fmt(r.value.lo),
        fmt(r.value.hi),
        blo,
        bhi,
        r.outcome.to_string(),
    ]
}

/// Stand-in report for a check whose enclosures could not be resolved.
pub fn exhausted(name: &str, why: &str) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        claim: "not evaluated".into(),
        index_names: Vec::new(),
        scale: Scale::Log,
        finding: None,
        verdict: Verdict::new(
            Outcome::Inconclusive,
            Reason::PrecisionExhausted,
            Vec::new(),
        ),
        rows: Vec::new(),
        notes: vec![why.to_string()],
    }
}

/// Hex SHA-256 of the canonical config echo.
pub fn config_hash(config: &Value) -> String {
    let text = serde_json::to_string(config).expect("json value serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Writes `body` to `out`. A directory receives `report-<hash>.<ext>`; an
/// existing file is only ever rewritten with identical bytes, otherwise the
/// next free `-<i>` suffix is used.
pub fn write_report(
    out: &Path,
    hash: &str,
    format: Format,
    body: &str,
) -> std::io::Result<PathBuf> {
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let first = if out.is_dir() {
        out.join(format!("report-{}.{ext}", &hash[..16]))
    } else {
        out.to_path_buf()
    };
    let mut target = first.clone();
    let mut i = 1;
    loop {
        match fs::read(&target) {
            Ok(existing) if existing == body.as_bytes() => return Ok(target),
            Ok(_) => {
                let stem = first
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("report");
                let name = match first.extension().and_then(|s| s.to_str()) {
                    Some(e) => format!("{stem}-{i}.{e}"),
                    None => format!("{stem}-{i}"),
                };
                target = first.with_file_name(name);
                i += 1;
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => break,
            Err(e) => return Err(e),
        }
    }
    let mut f = fs::OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(&target)?;
    f.write_all(body.as_bytes())?;
    Ok(target)
}
