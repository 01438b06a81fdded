//! Log-convexity, the Carleman sum, derivation closure and class inclusion.
//!
//! Limit statements (divergence, boundedness of a supremum) are decided by
//! per-family comparison rules. Numerical rows are evidence only, except
//! where a row certifies a finite inequality by interval separation.

use rayon::prelude::*;
use rug::Rational;

use crate::constants::e_enclosure;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::logreal::LogReal;
use crate::sequence::spec::{Family, SequenceSpec};
use crate::sequence::weight::WeightSequence;
use crate::verdict::{
    CheckReport, Enclosure64, EvidenceRow, Finding, Outcome, Reason, Scale, Verdict, MAX_WITNESSES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    M,
    Mprime,
}

/// Base family of a spec with transforms stripped.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Shape {
    Constant,
    Gevrey(Rational),
    Tower(u32),
    ShiftedLogLog,
    Table,
}

/// Shape of the innermost spec and the accumulated substitution exponent.
pub(crate) fn shape(spec: &SequenceSpec) -> (Shape, u64) {
    let (base, p) = spec.strip_transforms();
    let s = match &base.family {
        Family::Constant => Shape::Constant,
        Family::Gevrey { s } => Shape::Gevrey(s.as_rational().clone()),
        Family::IteratedLog { k } => Shape::Tower(*k),
        Family::ShiftedLogLog => Shape::ShiftedLogLog,
        Family::Table { .. } => Shape::Table,
        Family::Transformed { .. } => unreachable!("transforms stripped"),
    };
    (s, p)
}

fn index(n: u64) -> Vec<i64> {
    vec![n as i64]
}

/// Indices `1, 2, 4, ..., ≤ n_max` plus `n_max` itself.
fn sample_points(n_max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(1u64), |n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect();
    if v.last() != Some(&n_max) && n_max >= 1 {
        v.push(n_max);
    }
    v
}

fn values(seq: &WeightSequence, variant: Variant, n: u64) -> Result<LogReal> {
    match variant {
        Variant::M => seq.log_m(n),
        Variant::Mprime => seq.log_mprime(n),
    }
}

/// Rows `v_n² ≤ v_{n−1}·v_{n+1}` for `1 ≤ n < n_max`. Tables are capped at
/// their last index and the cap is noted.
pub fn check_log_convex(seq: &WeightSequence, variant: Variant, n_max: u64) -> Result<CheckReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let top = n_max.min(seq.index_limit());
    let rows = (1..top)
        .into_par_iter()
        .map(|n| -> Result<EvidenceRow> {
            let lhs = values(seq, variant, n)?.powi(2);
            let rhs = values(seq, variant, n - 1)?.mul(&values(seq, variant, n + 1)?);
            Ok(EvidenceRow::new(
                index(n),
                Enclosure64::of_log(&lhs),
                Some(Enclosure64::of_log(&rhs)),
                lhs.le(&rhs),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let what = match variant {
        Variant::M => "M",
        Variant::Mprime => "M'",
    };
    let mut report = CheckReport::from_rows(
        format!("log_convex[{what}] {}", seq.spec()),
        format!("{what}_n^2 <= {what}_(n-1) {what}_(n+1) for 1 <= n < {top}"),
        &["n"],
        Scale::Log,
        rows,
    );
    if top < n_max {
        report = report.with_note(format!("range capped at index {top}"));
    }
    Ok(report)
}

/// Symbolic Carleman rule for a spec: the finding and its justification.
pub(crate) fn carleman_rule(spec: &SequenceSpec) -> Option<(Finding, String)> {
    let (shape, p) = shape(spec);
    Some(match shape {
        Shape::Constant => (
            Finding::Divergent,
            "terms equal 1/(n+1): harmonic series".to_string(),
        ),
        Shape::Gevrey(s) => (
            Finding::Convergent,
            format!(
                "terms bounded by (n+1)^-(1+{}): p-series with exponent above 1",
                Rational::from(&s * p)
            ),
        ),
        Shape::Tower(1) if p == 1 => (
            Finding::Divergent,
            "terms comparable to 1/(n log n): divergent by condensation".to_string(),
        ),
        Shape::Tower(1) => (
            Finding::Convergent,
            format!("terms comparable to 1/(n (log n)^{p}): convergent by condensation"),
        ),
        Shape::Tower(k) => (
            Finding::Divergent,
            format!("terms comparable to 1/(n (log^({k}) n)^{p}): divergent by condensation"),
        ),
        Shape::ShiftedLogLog => (
            Finding::Divergent,
            format!("terms comparable to 1/(n (log log n)^{p}): divergent by condensation"),
        ),
        Shape::Table => return None,
    })
}

#[derive(Clone, Debug)]
pub struct CarlemanSums {
    /// The `n = 0` term `M_0/M_1`, kept out of the partial sums.
    pub head: Interval,
    /// `partial_sums[i]` encloses `Σ_{n=1}^{i+1} M_n/((n+1)M_{n+1})`.
    pub partial_sums: Vec<Interval>,
    /// Enclosure of the full sum over `n ≥ 1`, when a certified tail exists.
    pub limit: Option<Interval>,
    pub report: CheckReport,
}

/// For `gevrey(s)` the terms are exactly `(n+1)^-(1+s)`, so the tail after
/// `N` lies in `[(N+2)^-s/s, (N+1)^-s/s]` by integral comparison.
fn gevrey_tail(bits: u32, s: &Rational, n: u64) -> Result<Interval> {
    let part = |m: u64| -> Result<Interval> {
        let inv_s = Rational::from(s.recip_ref());
        Ok(LogReal::from_u64(bits, m)?
            .pow_rational(&Rational::from(-s))
            .to_linear()?
            .mul_rational(&inv_s))
    };
    let lo = part(n + 2)?;
    let hi = part(n + 1)?;
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

pub fn carleman_partial_sums(seq: &WeightSequence, n_max: u64) -> Result<CarlemanSums> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let bits = seq.bits();
    let top = n_max.min(seq.index_limit().saturating_sub(1));
    let term = |n: u64| -> Result<Interval> {
        let t = seq
            .log_m(n)?
            .div(&seq.log_m(n + 1)?)
            .div(&LogReal::from_u64(bits, n + 1)?);
        t.to_linear()
    };
    let head = term(0)?;
    let terms = (1..=top)
        .into_par_iter()
        .map(term)
        .collect::<Result<Vec<_>>>()?;
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut acc = Interval::zero(bits);
    for t in &terms {
        acc = acc.add(t);
        partial_sums.push(acc.clone());
    }
    let limit = match (&seq.spec().family, partial_sums.last()) {
        (Family::Gevrey { s }, Some(last)) => {
            Some(last.add(&gevrey_tail(bits, s.as_rational(), top)?))
        }
        _ => None,
    };
    let rows: Vec<EvidenceRow> = sample_points(top)
        .into_iter()
        .map(|n| {
            EvidenceRow::new(
                index(n),
                Enclosure64::of_interval(&partial_sums[n as usize - 1]),
                None,
                Outcome::Confirmed,
            )
        })
        .collect();
    let (outcome, reason, finding, rule) = match carleman_rule(seq.spec()) {
        Some((finding, rule)) => (
            Outcome::Confirmed,
            Reason::SymbolicComparison,
            Some(finding),
            rule,
        ),
        None => (
            Outcome::Inconclusive,
            Reason::DepthExhausted,
            None,
            "no comparison rule for this family; partial sums attached as trend".to_string(),
        ),
    };
    let evidence = rows
        .iter()
        .rev()
        .take(MAX_WITNESSES)
        .rev()
        .cloned()
        .collect();
    let mut report = CheckReport {
        name: format!("carleman {}", seq.spec()),
        claim: "sum_n M_n/((n+1) M_(n+1)) diverges iff the class is quasianalytic".into(),
        index_names: vec!["N".into()],
        scale: Scale::Linear,
        finding,
        verdict: Verdict::new(outcome, reason, evidence),
        rows,
        notes: vec![
            rule,
            format!("partial sums run over 1 <= n <= {top}; n = 0 term reported separately"),
        ],
    };
    if let Some(l) = &limit {
        let (lo, hi) = l.to_f64_outward();
        report = report.with_note(format!(
            "limit of partial sums lies in [{lo:.17e}, {hi:.17e}]"
        ));
    }
    Ok(CarlemanSums {
        head,
        partial_sums,
        limit,
        report,
    })
}

#[derive(Clone, Debug)]
pub struct SupCheck {
    /// Enclosure of the largest row value over the checked range.
    pub sup: LogReal,
    pub report: CheckReport,
}

fn running_sup(rows: &[Interval]) -> LogReal {
    let sup = rows
        .iter()
        .cloned()
        .reduce(|a, b| a.max(&b))
        .expect("at least one row");
    LogReal::from_log(sup)
}

/// `sup_n (M_{n+1}/M_n)^{1/n} < ∞`.
pub fn check_derivation_closed(seq: &WeightSequence, n_max: u64) -> Result<SupCheck> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let bits = seq.bits();
    let top = n_max.min(seq.index_limit().saturating_sub(1));
    if top < 1 {
        return Err(Error::InvalidArgument(
            "sequence has fewer than three values".into(),
        ));
    }
    let (shape, p) = shape(seq.spec());
    // Known symbolic ceilings on ln of the n-th root.
    let ceiling = match &shape {
        Shape::Constant => Some(Interval::zero(bits)),
        Shape::Gevrey(s) if p == 1 => Some(Interval::from_u64(bits, 2).ln()?.mul_rational(s)),
        _ => None,
    };
    let roots = (1..=top)
        .into_par_iter()
        .map(|n| Ok(seq.log_m(n + 1)?.div(&seq.log_m(n)?).root(n).log().clone()))
        .collect::<Result<Vec<Interval>>>()?;
    let rows = roots
        .iter()
        .zip(1..)
        .map(|(r, n)| {
            let (bound, outcome) = match (&ceiling, &shape) {
                // (n+1)^(s/n) ≤ 2^s  ⇔  n + 1 ≤ 2^n, decided in integers.
                (Some(c), Shape::Gevrey(_)) => {
                    let ok = crate::exact::int_pow(2, n) > n;
                    (
                        Some(Enclosure64::of_interval(c)),
                        if ok {
                            Outcome::Confirmed
                        } else {
                            Outcome::Refuted
                        },
                    )
                }
                (Some(c), _) => (Some(Enclosure64::of_interval(c)), r.le(c)),
                (None, _) => (None, Outcome::Confirmed),
            };
            EvidenceRow::new(index(n), Enclosure64::of_interval(r), bound, outcome)
        })
        .collect::<Vec<_>>();
    let row_outcome = Outcome::all(rows.iter().map(|r| r.outcome));
    let (outcome, reason, rule) = match shape {
        Shape::Table => (
            Outcome::Inconclusive,
            Reason::DepthExhausted,
            "no symbolic rule for tables; running sup attached".to_string(),
        ),
        Shape::Constant => (
            row_outcome,
            Reason::SymbolicComparison,
            "ratios are 1".into(),
        ),
        Shape::Gevrey(_) => (
            row_outcome,
            Reason::SymbolicComparison,
            "ratio of factorial powers grows polynomially in n".into(),
        ),
        Shape::Tower(_) | Shape::ShiftedLogLog => (
            row_outcome,
            Reason::SymbolicComparison,
            "ratio M_(n+1)/M_n grows sub-exponentially in n".into(),
        ),
    };
    let finding = (outcome == Outcome::Confirmed).then_some(Finding::Bounded);
    let evidence = rows
        .iter()
        .filter(|r| r.outcome != Outcome::Confirmed)
        .take(MAX_WITNESSES)
        .cloned()
        .collect();
    let sup = running_sup(&roots);
    let (slo, shi) = sup.log_bounds_f64();
    let report = CheckReport {
        name: format!("derivation_closed {}", seq.spec()),
        claim: "sup_n (M_(n+1)/M_n)^(1/n) < inf".into(),
        index_names: vec!["n".into()],
        scale: Scale::Log,
        finding,
        verdict: Verdict::new(outcome, reason, evidence),
        rows,
        notes: vec![
            rule,
            format!("ln of running sup over 1 <= n <= {top} lies in [{slo:.17e}, {shi:.17e}]"),
        ],
    };
    Ok(SupCheck { sup, report })
}

enum InclusionRule {
    /// `M_n ≤ N_n` for every n, so the sup is at most 1; rows certify it.
    Dominated {
        symbolic: bool,
        why: String,
    },
    /// Unbounded with a Stirling floor `s·q·(ln(q n) − 1)` on ln of the root.
    StirlingUnbounded {
        s: Rational,
        q: u64,
    },
    Symbolic {
        finding: Finding,
        why: String,
    },
    Unknown,
}

fn monotone(shape: &Shape) -> Option<bool> {
    match shape {
        Shape::Constant | Shape::Gevrey(_) | Shape::Tower(_) => Some(true),
        // Checked exactly at spec validation.
        Shape::Table => Some(true),
        Shape::ShiftedLogLog => Some(false),
    }
}

fn inclusion_rule(m: &SequenceSpec, n: &SequenceSpec) -> InclusionRule {
    let (sm, pm) = shape(m);
    let (sn, pn) = shape(n);
    let same_base = m.strip_transforms().0.same_family(n.strip_transforms().0);
    if m.same_family(n) {
        return InclusionRule::Dominated {
            symbolic: true,
            why: "identical sequences".into(),
        };
    }
    if sm == Shape::Constant {
        if let Some(symbolic) = monotone(&sn) {
            return InclusionRule::Dominated {
                symbolic,
                why: "M_n = 1 = N_0 <= N_n for non-decreasing N".into(),
            };
        }
    }
    if same_base && pm <= pn {
        if let Some(symbolic) = monotone(&sm) {
            return InclusionRule::Dominated {
                symbolic,
                why: format!("M_({pm}n) <= M_({pn}n) for non-decreasing M"),
            };
        }
    }
    use Finding::{Bounded, Unbounded};
    match (&sm, &sn) {
        (Shape::Gevrey(s1), Shape::Gevrey(s2)) => {
            let a = Rational::from(s1 * pm);
            let b = Rational::from(s2 * pn);
            let finding = if a <= b { Bounded } else { Unbounded };
            InclusionRule::Symbolic {
                finding,
                why: format!("ratio of factorial powers with exponents {a} and {b} (Stirling)"),
            }
        }
        (Shape::Gevrey(s), Shape::Constant) => InclusionRule::StirlingUnbounded {
            s: s.clone(),
            q: pm,
        },
        (Shape::Gevrey(_), Shape::Tower(_) | Shape::ShiftedLogLog) => InclusionRule::Symbolic {
            finding: Unbounded,
            why: "factorial growth beats iterated-log powers (Stirling)".into(),
        },
        (Shape::Tower(_) | Shape::ShiftedLogLog, Shape::Gevrey(_)) => InclusionRule::Symbolic {
            finding: Bounded,
            why: "iterated-log powers are dominated by factorial growth (Stirling)".into(),
        },
        (Shape::Tower(_) | Shape::ShiftedLogLog, Shape::Constant) => InclusionRule::Symbolic {
            finding: Unbounded,
            why: "n-th root of M_n grows like an iterated logarithm".into(),
        },
        (Shape::Tower(_) | Shape::ShiftedLogLog, Shape::Tower(_) | Shape::ShiftedLogLog)
            if same_base =>
        {
            InclusionRule::Symbolic {
                finding: Unbounded,
                why: format!("n-th root ratio grows like (log^(k) n)^({pm}-{pn})"),
            }
        }
        _ => InclusionRule::Unknown,
    }
}

/// `sup_n (M_n/N_n)^{1/n} < ∞`, i.e. the class of `m` lies in the class of `n`.
pub fn check_inclusion(m: &WeightSequence, n: &WeightSequence, n_max: u64) -> Result<SupCheck> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let bits = m.bits().max(n.bits());
    let top = n_max.min(m.index_limit()).min(n.index_limit());
    if top < 1 {
        return Err(Error::InvalidArgument(
            "sequences have no index n >= 1".into(),
        ));
    }
    let identical = m.spec().same_family(n.spec());
    let roots = (1..=top)
        .into_par_iter()
        .map(|i| {
            if identical {
                // Subtracting an enclosure from itself would only widen it.
                return Ok(Interval::zero(bits));
            }
            Ok(m.log_m(i)?.div(&n.log_m(i)?).root(i).log().clone())
        })
        .collect::<Result<Vec<Interval>>>()?;
    let rule = inclusion_rule(m.spec(), n.spec());
    let zero = Interval::zero(bits);
    let e_hi_ln = Interval::from_rational(bits, &e_enclosure().hi).ln()?;
    let mut rows = Vec::with_capacity(roots.len());
    for (r, i) in roots.iter().zip(1u64..) {
        let row = match &rule {
            InclusionRule::Dominated { .. } => EvidenceRow::new(
                index(i),
                Enclosure64::of_interval(r),
                Some(Enclosure64::of_interval(&zero)),
                r.le(&zero),
            ),
            InclusionRule::StirlingUnbounded { s, q } => {
                // m! ≥ (m/e)^m, so ln((qi)!^s)/i ≥ s·q·(ln(qi) − ln e_hi).
                let floor = Interval::from_u64(bits, q * i)
                    .ln()?
                    .sub(&e_hi_ln)
                    .mul_rational(&Rational::from(s * *q));
                EvidenceRow::new(
                    index(i),
                    Enclosure64::of_interval(r),
                    Some(Enclosure64::of_interval(&floor)),
                    floor.le(r),
                )
            }
            _ => EvidenceRow::new(
                index(i),
                Enclosure64::of_interval(r),
                None,
                Outcome::Confirmed,
            ),
        };
        rows.push(row);
    }
    let row_outcome = Outcome::all(rows.iter().map(|r| r.outcome));
    let (claim, outcome, reason, finding, why, evidence) = match rule {
        InclusionRule::Dominated { symbolic, why } => {
            let reason = if symbolic {
                Reason::SymbolicComparison
            } else {
                Reason::IntervalSeparation
            };
            let evidence = rows
                .iter()
                .filter(|r| r.outcome == row_outcome && row_outcome != Outcome::Confirmed)
                .take(MAX_WITNESSES)
                .cloned()
                .collect();
            let reason = if row_outcome == Outcome::Inconclusive {
                Reason::PrecisionExhausted
            } else {
                reason
            };
            (
                "row value (ln of n-th root) <= 0, so sup <= 1",
                row_outcome,
                reason,
                Finding::Bounded,
                why,
                evidence,
            )
        }
        InclusionRule::StirlingUnbounded { .. } => {
            // Witnesses: the largest sampled rows, where the floor is highest.
            let evidence = sample_points(top)
                .into_iter()
                .rev()
                .take(4)
                .map(|i| rows[i as usize - 1].clone())
                .collect();
            (
                "row value (ln of n-th root) >= bound (Stirling floor), which tends to infinity",
                row_outcome,
                if row_outcome == Outcome::Inconclusive {
                    Reason::PrecisionExhausted
                } else {
                    Reason::SymbolicComparison
                },
                Finding::Unbounded,
                "m! >= (m/e)^m".to_string(),
                evidence,
            )
        }
        InclusionRule::Symbolic { finding, why } => {
            let evidence = rows.iter().rev().take(4).cloned().collect();
            (
                "sup_n (M_n/N_n)^(1/n) < inf",
                Outcome::Confirmed,
                Reason::SymbolicComparison,
                finding,
                why,
                evidence,
            )
        }
        InclusionRule::Unknown => (
            "sup_n (M_n/N_n)^(1/n) < inf",
            Outcome::Inconclusive,
            Reason::DepthExhausted,
            Finding::Bounded,
            "no symbolic rule for this pair; running sup attached".to_string(),
            Vec::new(),
        ),
    };
    let sup = running_sup(&roots);
    let (slo, shi) = sup.log_bounds_f64();
    let report = CheckReport {
        name: format!("inclusion {} in {}", m.spec(), n.spec()),
        claim: claim.into(),
        index_names: vec!["n".into()],
        scale: Scale::Log,
        finding: (outcome == Outcome::Confirmed).then_some(finding),
        verdict: Verdict::new(outcome, reason, evidence),
        rows,
        notes: vec![
            why,
            format!("ln of running sup over 1 <= n <= {top} lies in [{slo:.17e}, {shi:.17e}]"),
        ],
    };
    Ok(SupCheck { sup, report })
}
