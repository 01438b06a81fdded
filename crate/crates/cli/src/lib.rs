//! Command dispatch, report aggregation and the exit-code contract for the
//! `quasiseq` binary.

pub mod config;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use quasiseq::bang::BangSeries;
use quasiseq::coefficients::{
    alpha_diag_derivative, sweep_factorial_bound, verify_alpha_a, verify_alpha_b, verify_ckn_bound,
};
use quasiseq::sequence::{
    carleman_partial_sums, check_derivation_closed, check_inclusion, check_log_convex, Variant,
};
use quasiseq::substitution::{
    coeff_level_check, default_samples, final_bound_assembly, transform_report, TheoremInstance,
};
use quasiseq::verdict::{Enclosure64, EvidenceRow};
use quasiseq::{CheckReport, Error, Outcome, Scale, SequenceSpec, WeightSequence};

pub use config::{parse_args, Command, Format, RunConfig, SeqCheck};
pub use report::{CheckEntry, RunReport};

use report::Table;
use suite::Suite;

/// Exit code for configuration and usage errors.
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Spec { path: PathBuf, source: Error },
    Core(Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Spec { path, source } => {
                write!(f, "cannot load spec {}: {source}", path.display())
            }
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn load_spec(path: &std::path::Path) -> CliResult<SequenceSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    SequenceSpec::from_json(&text).map_err(|source| CliError::Spec {
        path: path.to_path_buf(),
        source,
    })
}

/// Collects check groups, timing each and turning precision exhaustion into
/// an inconclusive placeholder.
struct Collector {
    timings: bool,
    entries: Vec<CheckEntry>,
}

impl Collector {
    fn group(
        &mut self,
        name: &str,
        f: impl FnOnce() -> quasiseq::Result<Vec<CheckReport>>,
    ) -> CliResult<()> {
        let start = Instant::now();
        let reports = match f() {
            Ok(r) => r,
            Err(Error::PrecisionExhausted(why)) => vec![report::exhausted(name, &why)],
            Err(e) => return Err(e.into()),
        };
        let ms = self.timings.then(|| start.elapsed().as_millis() as u64);
        self.entries
            .extend(reports.into_iter().map(|r| CheckEntry::new(r, ms)));
        Ok(())
    }

    fn one(
        &mut self,
        name: &str,
        f: impl FnOnce() -> quasiseq::Result<CheckReport>,
    ) -> CliResult<()> {
        self.group(name, || f().map(|r| vec![r]))
    }
}

fn config_echo(cfg: &RunConfig, specs: &[SequenceSpec]) -> Value {
    json!({
        "command": cfg.command,
        "specs": specs.iter().map(SequenceSpec::to_value).collect::<Vec<_>>(),
        "checks": cfg.checks,
        "n_max": cfg.n_max,
        "k_max": cfg.k_max,
        "p": cfg.p,
        "radius": cfg.radius,
        "precision": cfg.precision.map(|p| p.digits()),
        "format": cfg.format,
        "timings": cfg.timings,
    })
}

fn exactly(specs: &[SequenceSpec], n: usize, cmd: &str) -> CliResult<()> {
    if specs.len() == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{cmd} takes exactly {n} --spec, got {}",
            specs.len()
        )))
    }
}

fn one_or(specs: &[SequenceSpec], default: SequenceSpec, cmd: &str) -> CliResult<SequenceSpec> {
    match specs {
        [] => Ok(default),
        [s] => Ok(s.clone()),
        _ => Err(CliError::Usage(format!("{cmd} takes at most one --spec"))),
    }
}

fn p_at_least(cfg: &RunConfig, min: u32, default: u32) -> CliResult<u32> {
    let p = cfg.p.unwrap_or(default);
    if p < min {
        return Err(CliError::Usage(format!(
            "--p must be at least {min}, got {p}"
        )));
    }
    Ok(p)
}

/// Informational rows `[n]` holding `value(n)`.
fn listing(
    name: &str,
    claim: &str,
    n_max: u64,
    f: impl Fn(u64) -> quasiseq::Result<Enclosure64>,
) -> quasiseq::Result<CheckReport> {
    let rows = (0..=n_max)
        .map(|n| {
            Ok(EvidenceRow::new(
                vec![n as i64],
                f(n)?,
                None,
                Outcome::Confirmed,
            ))
        })
        .collect::<quasiseq::Result<Vec<_>>>()?;
    let mut r = CheckReport::from_rows(name, claim, &["n"], Scale::Log, rows);
    r.finding = None;
    Ok(r.with_note("values only; rows carry no inequality"))
}

/// Executes one command. Errors map to exit code 3.
pub fn run(cfg: &RunConfig) -> CliResult<RunReport> {
    let specs = cfg
        .spec_paths
        .iter()
        .map(|p| load_spec(p).map(|s| cfg.adjust(s)))
        .collect::<CliResult<Vec<_>>>()?;
    let mut c = Collector {
        timings: cfg.timings,
        entries: Vec::new(),
    };
    let mut table = Table::None;
    match cfg.command {
        Command::SeqShow => {
            exactly(&specs, 1, "seq-show")?;
            let n = cfg.n_max.unwrap_or(20);
            let seq = WeightSequence::new(&specs[0])?;
            let n = n.min(seq.index_limit().saturating_sub(1));
            c.one("log_M", || {
                listing(&format!("log_M {}", specs[0]), "ln M_n", n, |i| {
                    Ok(Enclosure64::of_log(&seq.log_m(i)?))
                })
            })?;
            c.one("log_Mprime", || {
                listing(
                    &format!("log_Mprime {}", specs[0]),
                    "ln M'_n = ln(n! M_n)",
                    n,
                    |i| Ok(Enclosure64::of_log(&seq.log_mprime(i)?)),
                )
            })?;
            c.one("log_m", || {
                listing(
                    &format!("log_m {}", specs[0]),
                    "ln m_n = ln(M'_(n+1)/M'_n)",
                    n,
                    |i| Ok(Enclosure64::of_log(&seq.ratio_m(i)?)),
                )
            })?;
        }
        Command::SeqCheck => {
            if specs.is_empty() {
                return Err(CliError::Usage(
                    "seq-check needs at least one --spec".into(),
                ));
            }
            let mut checks = if cfg.checks.is_empty() {
                SeqCheck::ALL.to_vec()
            } else {
                cfg.checks.clone()
            };
            checks.sort();
            checks.dedup();
            for spec in &specs {
                let seq = WeightSequence::new(spec)?;
                for check in &checks {
                    match check {
                        SeqCheck::LogConvex => c.one("log_convex", || {
                            check_log_convex(&seq, Variant::M, cfg.n_max.unwrap_or(100).max(2))
                        })?,
                        SeqCheck::LogConvexPrime => c.one("log_convex_prime", || {
                            check_log_convex(&seq, Variant::Mprime, cfg.n_max.unwrap_or(100).max(2))
                        })?,
                        SeqCheck::Quasianalytic => c.one("carleman", || {
                            Ok(carleman_partial_sums(&seq, cfg.n_max.unwrap_or(1000))?.report)
                        })?,
                        SeqCheck::DerivationClosed => c.one("derivation_closed", || {
                            Ok(check_derivation_closed(&seq, cfg.n_max.unwrap_or(100))?.report)
                        })?,
                    }
                }
            }
        }
        Command::SeqCompare => {
            exactly(&specs, 2, "seq-compare")?;
            let m = WeightSequence::new(&specs[0])?;
            let n = WeightSequence::new(&specs[1])?;
            c.one("inclusion", || {
                Ok(check_inclusion(&m, &n, cfg.n_max.unwrap_or(100))?.report)
            })?;
        }
        Command::SeqTransform => {
            exactly(&specs, 1, "seq-transform")?;
            let p = p_at_least(cfg, 1, 2)?;
            let spec = &specs[0];
            c.one("transform", || {
                transform_report(spec, p, cfg.n_max.unwrap_or(1000))
            })?;
            if p >= 2 {
                let m = WeightSequence::new(spec)?;
                let t = WeightSequence::new(&SequenceSpec::transformed(spec.clone(), p))?;
                c.one("inclusion", || {
                    Ok(check_inclusion(&m, &t, cfg.n_max.unwrap_or(100).min(200))?.report)
                })?;
            }
        }
        Command::Ckn => {
            let k = cfg.k_max.unwrap_or(6);
            let n = cfg.n_max.unwrap_or(18);
            c.one("ckn_oracle", || suite::oracle_agreement(k, n))?;
            let mut rows = Vec::new();
            c.group("ckn_bound", || {
                let s = verify_ckn_bound(k, n)?;
                rows = s.rows;
                Ok(vec![s.lemma, s.cauchy])
            })?;
            table = Table::Ckn(rows);
        }
        Command::Alpha => {
            let p = p_at_least(cfg, 2, 2)?;
            let k_max = cfg.k_max.unwrap_or(5);
            let n = cfg.n_max.unwrap_or(60);
            c.one("alpha_a", || verify_alpha_a(p, n as usize))?;
            for k in 1..=k_max {
                c.one("alpha_b", || verify_alpha_b(p, k, n as usize))?;
            }
            c.one("alpha_diag", || alpha_diag_rows(p, k_max, n.min(30)))?;
        }
        Command::Ineq62 => {
            let p = p_at_least(cfg, 1, 2)?;
            c.one("factorial_bound", || {
                sweep_factorial_bound(p, cfg.n_max.unwrap_or(40))
            })?;
        }
        Command::Bang => {
            let spec = one_or(&specs, cfg.adjust(SequenceSpec::constant()), "bang")?;
            let n = cfg.n_max.unwrap_or(25);
            let seq = WeightSequence::new(&spec)?;
            match BangSeries::new(seq, 2 * n) {
                Ok(b) => {
                    c.one("bang_lower", || b.verify_lower_bound(n))?;
                    c.one("bang_f_lower", || b.verify_f_lower_bound(n))?;
                    c.one("bang_membership", || b.verify_membership(2 * n))?;
                    c.one("bang_sharpness", || b.sharpness_evidence(2, n))?;
                    table = Table::Bang(b.table(2 * n)?);
                }
                Err(Error::ConvexityUnconfirmed(top)) => {
                    // Report the failing convexity check itself.
                    let seq = WeightSequence::new(&spec)?;
                    c.one("log_convex_prime", || {
                        check_log_convex(&seq, Variant::Mprime, top.max(2))
                    })?;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Thm61 => {
            let spec = one_or(&specs, cfg.adjust(SequenceSpec::gevrey_int(1)), "thm61")?;
            let p = p_at_least(cfg, 2, 2)?;
            let a = cfg.radius.unwrap_or(1);
            let n = cfg.n_max.unwrap_or(40);
            let inst = TheoremInstance::with_integer_radius(spec.clone(), p, a, n)?;
            c.one("coeff_level", || Ok(coeff_level_check(&inst)?.report))?;
            let small = TheoremInstance::with_integer_radius(spec.clone(), p, a, n.min(30))?;
            c.one("final_bound", || {
                final_bound_assembly(&small, &default_samples(p))
            })?;
            c.one("transform", || transform_report(&spec, p, 1000))?;
        }
        Command::ReportAll => {
            let s = Suite {
                n_cap: cfg.n_max,
                precision: cfg.precision,
            };
            for (i, criterion) in s.criteria() {
                let start = c.entries.len();
                c.group(&format!("criterion {i}"), || criterion(&s))?;
                for e in &mut c.entries[start..] {
                    e.name = format!("[{i}] {}", e.name);
                }
            }
            for spec in &specs {
                let seq = WeightSequence::new(spec)?;
                let n = cfg.n_max.unwrap_or(100).max(2);
                c.one("extra", || check_log_convex(&seq, Variant::M, n))?;
                c.one("extra", || check_log_convex(&seq, Variant::Mprime, n))?;
                c.one("extra", || Ok(carleman_partial_sums(&seq, n)?.report))?;
            }
        }
    }
    Ok(RunReport {
        tool_version: report::TOOL_VERSION,
        config: config_echo(cfg, &specs),
        checks: c.entries,
        table,
    })
}

/// `α_k^{(n)}(x, x)` bound rows at the default samples.
fn alpha_diag_rows(p: u32, k_max: u32, n_max: u64) -> quasiseq::Result<CheckReport> {
    let mut rows = Vec::new();
    for (xi, x) in default_samples(p).iter().enumerate() {
        for n in 1..=n_max {
            for k in 1..=k_max.min(n as u32) {
                if let Some(mut r) = alpha_diag_derivative(p, k, n, x)?.bound {
                    r.index = vec![i64::from(k), n as i64, xi as i64];
                    rows.push(r);
                }
            }
        }
    }
    Ok(CheckReport::from_rows(
        format!("alpha_diag p={p}"),
        format!(
            "|alpha_k^(n)(x,x)| <= (2e)^n n^(n-k) x^(-(pn-k)/p) for k <= {k_max}, n <= {n_max}"
        ),
        &["k", "n", "x_index"],
        Scale::Log,
        rows,
    )
    .with_note(format!(
        "x samples by index: [{}]",
        default_samples(p)
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

/// Parses, runs and writes the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_and_write(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("quasiseq: {e}");
            EXIT_USAGE
        }
    }
}

fn run_and_write(cfg: &RunConfig) -> CliResult<i32> {
    let report = run(cfg)?;
    let body = report.render(cfg.format)?;
    match &cfg.out {
        Some(out) => {
            let path =
                report::write_report(out, &report::config_hash(&report.config), cfg.format, &body)?;
            eprintln!("quasiseq: wrote {}", path.display());
        }
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    for e in report
        .checks
        .iter()
        .filter(|e| e.outcome() != Outcome::Confirmed)
    {
        eprintln!("quasiseq: {} {}", e.outcome(), e.name);
    }
    Ok(report.exit_code())
}
