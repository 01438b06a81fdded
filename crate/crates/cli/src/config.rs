use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quasiseq::{Precision, SequenceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SeqShow,
    SeqCheck,
    SeqCompare,
    SeqTransform,
    Ckn,
    Alpha,
    Ineq62,
    Bang,
    Thm61,
    ReportAll,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Checks selectable with `seq-check --checks`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SeqCheck {
    LogConvex,
    LogConvexPrime,
    Quasianalytic,
    DerivationClosed,
}

impl SeqCheck {
    pub const ALL: [SeqCheck; 4] = [
        SeqCheck::LogConvex,
        SeqCheck::LogConvexPrime,
        SeqCheck::Quasianalytic,
        SeqCheck::DerivationClosed,
    ];
}

/// One invocation: a command plus its overrides.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub spec_paths: Vec<PathBuf>,
    pub checks: Vec<SeqCheck>,
    pub n_max: Option<u64>,
    pub k_max: Option<u32>,
    pub p: Option<u32>,
    pub radius: Option<u64>,
    pub precision: Option<Precision>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            spec_paths: Vec::new(),
            checks: Vec::new(),
            n_max: None,
            k_max: None,
            p: None,
            radius: None,
            precision: None,
            out: None,
            format: Format::Json,
            timings: false,
        }
    }

    /// Applies the precision override, if any.
    pub fn adjust(&self, spec: SequenceSpec) -> SequenceSpec {
        match self.precision {
            Some(p) => spec.with_precision(p),
            None => spec,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "quasiseq",
    version,
    about = "Certified checks for Denjoy-Carleman weight sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print ln M_n, ln M'_n and ln m_n.
    SeqShow(Common),
    /// Run sequence criteria (log-convexity, quasianalyticity, derivation closure).
    SeqCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        checks: Vec<SeqCheck>,
    },
    /// Inclusion of the first sequence's class in the second's.
    SeqCompare(Common),
    /// Quasianalyticity of the power-substituted sequence and inclusion in it.
    SeqTransform(Common),
    /// c_{k,n} oracle agreement and bound sweeps.
    Ckn(Common),
    /// a_i and b_n bounds.
    Alpha(Common),
    /// n^(pn-k) <= e^(pn) (pn-k)! sweep.
    #[command(name = "ineq62", visible_alias = "factorial-bound")]
    Ineq62(Common),
    /// Bang function derivative bounds at the origin.
    Bang(Common),
    /// Power-substitution instances: coefficient level and assembled bound.
    #[command(name = "thm61", visible_alias = "substitution")]
    Thm61 {
        #[command(flatten)]
        common: Common,
        /// Class radius A of the input bound.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        radius: Option<u64>,
    },
    /// Every acceptance criterion, aggregated into one report.
    ReportAll(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Sequence spec document (JSON); repeat for commands taking two.
    #[arg(long)]
    spec: Vec<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    p: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k_max: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: Option<u64>,
    /// Working precision in significant decimal digits.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=i64::from(Precision::MAX_DIGITS)))]
    precision: Option<u32>,
    /// Output file, or a directory for a report named by config hash.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall time per check (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn into_config(self, command: Command) -> RunConfig {
        RunConfig {
            command,
            spec_paths: self.spec,
            checks: Vec::new(),
            n_max: self.n_max,
            k_max: self.k_max,
            p: self.p,
            radius: None,
            precision: self
                .precision
                .map(|d| Precision::new(d).expect("range checked by clap")),
            out: self.out,
            format: self.format,
            timings: self.timings,
        }
    }
}

/// Parses command-line arguments; `Err` carries clap's rendered message.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(match cli.command {
        Cmd::SeqShow(c) => c.into_config(Command::SeqShow),
        Cmd::SeqCheck { common, checks } => {
            let mut cfg = common.into_config(Command::SeqCheck);
            cfg.checks = checks;
            cfg
        }
        Cmd::SeqCompare(c) => c.into_config(Command::SeqCompare),
        Cmd::SeqTransform(c) => c.into_config(Command::SeqTransform),
        Cmd::Ckn(c) => c.into_config(Command::Ckn),
        Cmd::Alpha(c) => c.into_config(Command::Alpha),
        Cmd::Ineq62(c) => c.into_config(Command::Ineq62),
        Cmd::Bang(c) => c.into_config(Command::Bang),
        Cmd::Thm61 { common, radius } => {
            let mut cfg = common.into_config(Command::Thm61);
            cfg.radius = radius;
            cfg
        }
        Cmd::ReportAll(c) => c.into_config(Command::ReportAll),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cfg = parse_args([
            "quasiseq",
            "seq-check",
            "--spec",
            "a.json",
            "--checks",
            "quasianalytic,log_convex",
            "--n-max",
            "9",
        ])
        .unwrap();
        assert_eq!(cfg.command, Command::SeqCheck);
        assert_eq!(
            cfg.checks,
            vec![SeqCheck::Quasianalytic, SeqCheck::LogConvex]
        );
        assert_eq!(cfg.n_max, Some(9));
        let cfg = parse_args(["quasiseq", "factorial-bound", "--p", "3"]).unwrap();
        assert_eq!(cfg.command, Command::Ineq62);
        assert!(parse_args(["quasiseq", "ineq62", "--n-max", "0"]).is_err());
        assert!(parse_args(["quasiseq", "ckn", "--format", "xml"]).is_err());
        assert!(parse_args(["quasiseq"]).is_err());
    }
}
