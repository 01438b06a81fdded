//! Instances of the power-substitution bound: if `|F^{(m)}| ≤ A^m M'_m` for
//! `F(ξ) = f(ξ^p)`, then `|f^{(n)}| ≤ n (2e)^n (eA)^{pn} M'_{pn} / n^{(p−1)n}`.

use rayon::prelude::*;
use rug::Rational;

use crate::coefficients::alpha::{alpha_diag_from_table, AlphaTable};
use crate::coefficients::bracket_le;
use crate::coefficients::ineq::{e_powers, factorial_le_power, row as factorial_bound_row};
use crate::constants::e_enclosure;
use crate::error::{Error, Result};
use crate::exact::{factorial, int_pow, ExactRational};
use crate::interval::Interval;
use crate::logreal::LogReal;
use crate::sequence::criteria::carleman_partial_sums;
use crate::sequence::{SequenceSpec, WeightSequence};
use crate::verdict::{CheckReport, Enclosure64, EvidenceRow, Outcome, Scale};

#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub seq: SequenceSpec,
    pub p: u32,
    pub a: LogReal,
    pub n_max: u64,
}

impl TheoremInstance {
    pub fn new(seq: SequenceSpec, p: u32, a: LogReal, n_max: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!(
                "p must be at least 2, got {p}"
            )));
        }
        if n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be positive".into()));
        }
        a.log().check_finite()?;
        seq.validate()?;
        Ok(TheoremInstance { seq, p, a, n_max })
    }

    /// Instance with an integer class radius `A`.
    pub fn with_integer_radius(seq: SequenceSpec, p: u32, a: u64, n_max: u64) -> Result<Self> {
        let bits = seq.precision.bits();
        Self::new(seq, p, LogReal::from_u64(bits, a)?, n_max)
    }

    fn sequence(&self) -> Result<WeightSequence> {
        let seq = WeightSequence::new(&self.seq)?;
        let need = u64::from(self.p) * self.n_max;
        if need > seq.index_limit() {
            return Err(Error::IndexOutOfRange {
                index: need,
                max: seq.index_limit(),
            });
        }
        Ok(seq)
    }
}

/// The individually checked links behind one coefficient-level row.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLinks {
    pub n: u64,
    /// `n^{pn} ≤ e^{pn}(pn)!`.
    pub factorial_bound: Outcome,
    /// `n! ≤ n^n`.
    pub factorial_vs_power: Outcome,
    /// The assembled comparison in log space.
    pub assembled: Outcome,
}

impl ChainLinks {
    pub fn outcome(&self) -> Outcome {
        Outcome::all([
            self.factorial_bound,
            self.factorial_vs_power,
            self.assembled,
        ])
    }
}

#[derive(Clone, Debug)]
pub struct CoeffLevelCheck {
    pub report: CheckReport,
    pub links: Vec<ChainLinks>,
}

/// For the extremal profile `|F_m| = A^m M'_m / m!`, the coefficient
/// `|f^{(n)}(0)| = n!·|F_{pn}|` against `(eA)^{pn} M'^{(p)}_n` with `C = 1`.
pub fn coeff_level_check(inst: &TheoremInstance) -> Result<CoeffLevelCheck> {
    let seq = inst.sequence()?;
    let bits = seq.bits();
    let p = u64::from(inst.p);
    let results = (1..=inst.n_max)
        .into_par_iter()
        .map(|n| -> Result<(EvidenceRow, ChainLinks)> {
            let pn = p * n;
            let mp = seq.log_mprime(pn)?;
            let a_pow = inst.a.powi(pn as i64);
            let fact = |m: u64| LogReal::from_integer(bits, &factorial(m));
            let lhs = fact(n)?.mul(&a_pow).mul(&mp).div(&fact(pn)?);
            // ln e^{pn} = pn exactly.
            let e_pow = LogReal::from_log(Interval::from_u64(bits, pn));
            let damp = LogReal::from_u64(bits, n)?.powi(((p - 1) * n) as i64);
            let rhs = e_pow.mul(&a_pow).mul(&mp).div(&damp);
            let links = ChainLinks {
                n,
                factorial_bound: factorial_bound_row(inst.p, n, 0, &e_powers(pn)).outcome,
                factorial_vs_power: if factorial_le_power(n) {
                    Outcome::Confirmed
                } else {
                    Outcome::Refuted
                },
                assembled: lhs.le(&rhs),
            };
            let row = EvidenceRow::new(
                vec![n as i64],
                Enclosure64::of_log(&lhs),
                Some(Enclosure64::of_log(&rhs)),
                links.outcome(),
            );
            Ok((row, links))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rows, links): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let (alo, ahi) = inst.a.log_bounds_f64();
    let report = CheckReport::from_rows(
        format!("coeff_level {} p={}", inst.seq, inst.p),
        format!(
            "n! A^(pn) M'_(pn)/(pn)! <= (eA)^(pn) M'_(pn)/n^((p-1)n) for 1 <= n <= {}",
            inst.n_max
        ),
        &["n"],
        Scale::Log,
        rows,
    )
    .with_note(format!("ln A in [{alo:.17e}, {ahi:.17e}]; C = 1"))
    .with_note("each row combines n^(pn) <= e^(pn) (pn)!, n! <= n^n and the assembled comparison");
    Ok(CoeffLevelCheck { report, links })
}

/// `{1, (1/2)^p, (1/4)^p}`.
pub fn default_samples(p: u32) -> Vec<ExactRational> {
    [1i64, 2, 4]
        .iter()
        .map(|d| {
            ExactRational::new(1, *d)
                .and_then(|q| q.pow(i64::from(p)))
                .expect("non-zero base")
        })
        .collect()
}

/// Exponents of `x` and `n` in the product of the two factors of the k-th
/// summand: `x^{(pn−k)/p}·x^{−(pn−k)/p}` and `n^{−(pn−k)}·n^{n−k}`.
pub fn summand_exponents(p: u32, n: u64, k: u64) -> (ExactRational, i64) {
    let shift = (u64::from(p) * n) as i64 - k as i64;
    let up = ExactRational::new(shift, i64::from(p)).expect("p > 0");
    let down = ExactRational::new(-shift, i64::from(p)).expect("p > 0");
    let x_total = &up + &down;
    let n_total = -shift + (n as i64 - k as i64);
    (x_total, n_total)
}

/// Re-assembles the final bound at each sample `x = q^p ∈ (0, 1]`.
///
/// Per `(n, k)` it checks the factorial inequality and the α-diagonal bound,
/// and that the exponents of `x` and `n` combine to `0` and `−(p−1)n`. Per
/// `(n, x)` it checks exactly that
/// `Σ_k |α_k^{(n)}(x,x)|·x^{(pn−k)/p}/(pn−k)! ≤ n (2e)^n e^{pn} / n^{(p−1)n}`,
/// the common factor `A^{pn} M'_{pn}` having been divided out.
pub fn final_bound_assembly(
    inst: &TheoremInstance,
    x_samples: &[ExactRational],
) -> Result<CheckReport> {
    let p = inst.p;
    let roots = x_samples
        .iter()
        .map(|x| {
            if *x > ExactRational::one() || !x.is_positive() {
                return Err(Error::InvalidArgument(format!("sample {x} outside (0, 1]")));
            }
            x.exact_root(p).ok_or_else(|| Error::NotExactPower {
                value: x.to_string(),
                p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let seq = inst.sequence()?;
    let bits = seq.bits();
    let table = AlphaTable::new(p, inst.n_max as u32, inst.n_max as usize)?;
    let e = e_enclosure();
    let grid: Vec<(u64, usize)> = (1..=inst.n_max)
        .flat_map(|n| (0..x_samples.len()).map(move |i| (n, i)))
        .collect();
    let rows = grid
        .into_par_iter()
        .map(|(n, xi)| -> Result<EvidenceRow> {
            let x = &x_samples[xi];
            let q = &roots[xi];
            let pn = u64::from(p) * n;
            let e_pow = e_powers(pn);
            let mut outcome = Outcome::Confirmed;
            let mut sum = ExactRational::zero();
            for k in 1..=n {
                outcome = outcome.combine(factorial_bound_row(p, n, k, &e_pow).outcome);
                let diag = alpha_diag_from_table(&table, k as u32, n, x)?;
                outcome = outcome.combine(
                    diag.bound
                        .as_ref()
                        .map_or(Outcome::Confirmed, |r| r.outcome),
                );
                let (x_exp, n_exp) = summand_exponents(p, n, k);
                if !x_exp.is_zero() || n_exp != -(((u64::from(p) - 1) * n) as i64) {
                    outcome = Outcome::Refuted;
                }
                let taylor = &q.pow((pn - k) as i64)? / &ExactRational::from(factorial(pn - k));
                sum = &sum + &(&diag.value.abs() * &taylor);
            }
            // n·2^n·e^{n+pn}/n^{(p−1)n}, increasing in e.
            let scale = Rational::from((int_pow(2, n) * n, int_pow(n, (u64::from(p) - 1) * n)));
            let e_term =
                |e: &Rational| Rational::from(rug::ops::Pow::pow(e, (n + pn) as u32)) * &scale;
            let bound_lo = e_term(&e.lo);
            outcome = outcome.combine(bracket_le(sum.as_rational(), &bound_lo, &e_term(&e.hi)));
            let common = inst.a.powi(pn as i64).mul(&seq.log_mprime(pn)?);
            let value = if sum.is_zero() {
                Enclosure64::point(f64::NEG_INFINITY)
            } else {
                Enclosure64::of_log(&LogReal::from_rational(bits, sum.as_rational())?.mul(&common))
            };
            let bound = LogReal::from_rational(bits, &bound_lo)?.mul(&common);
            Ok(EvidenceRow::new(
                vec![n as i64, xi as i64],
                value,
                Some(Enclosure64::of_log(&bound)),
                outcome,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = x_samples
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    Ok(CheckReport::from_rows(
        format!("final_bound {} p={}", inst.seq, inst.p),
        format!(
            "sum_k |alpha_k^(n)(x,x)| A^(pn) M'_(pn) x^((pn-k)/p)/(pn-k)! <= n (2e)^n (eA)^(pn) M'_(pn)/n^((p-1)n) for 1 <= n <= {}",
            inst.n_max
        ),
        &["n", "x_index"],
        Scale::Log,
        rows,
    )
    .with_note(format!("x samples by index: [{samples}]")))
}

/// Carleman verdict for `M^{(p)}`; `p = 1` reports the base sequence.
pub fn transform_report(spec: &SequenceSpec, p: u32, n_max: u64) -> Result<CheckReport> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let target = if p == 1 {
        spec.clone()
    } else {
        SequenceSpec::transformed(spec.clone(), p).with_precision(spec.precision)
    };
    let seq = WeightSequence::new(&target)?;
    let mut report = carleman_partial_sums(&seq, n_max)?.report;
    report.name = format!("transform {spec} p={p}");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Finding;

    #[test]
    fn coefficient_level_small() {
        let inst =
            TheoremInstance::with_integer_radius(SequenceSpec::gevrey_int(1), 2, 1, 10).unwrap();
        let c = coeff_level_check(&inst).unwrap();
        assert!(c.report.is_confirmed());
        assert!(c.links.iter().all(|l| l.outcome() == Outcome::Confirmed));
    }

    #[test]
    fn exponents_cancel() {
        for (p, n, k) in [(2, 1, 1), (3, 5, 2), (5, 7, 7)] {
            let (x, e) = summand_exponents(p, n, k);
            assert!(x.is_zero());
            assert_eq!(e, -((p as i64 - 1) * n as i64));
        }
    }

    #[test]
    fn assembly_small() {
        let inst =
            TheoremInstance::with_integer_radius(SequenceSpec::gevrey_int(1), 2, 1, 6).unwrap();
        let r = final_bound_assembly(&inst, &default_samples(2)).unwrap();
        assert!(r.is_confirmed(), "{:?}", r.verdict);
        assert_eq!(r.rows.len(), 18);
        let bad = final_bound_assembly(&inst, &[ExactRational::new(1, 2).unwrap()]);
        assert!(matches!(bad, Err(Error::NotExactPower { .. })));
    }

    #[test]
    fn alpha_rows_match_standalone() {
        let table = AlphaTable::new(3, 8, 8).unwrap();
        for x in default_samples(3) {
            for n in 1..=8u64 {
                for k in 1..=n as u32 {
                    let shared = alpha_diag_from_table(&table, k, n, &x).unwrap();
                    let alone = crate::coefficients::alpha_diag_derivative(3, k, n, &x).unwrap();
                    assert_eq!(shared.value, alone.value);
                    assert_eq!(shared.bound, alone.bound);
                }
            }
        }
    }

    #[test]
    fn transform_verdicts() {
        let r = transform_report(&SequenceSpec::iterated_log(1), 2, 200).unwrap();
        assert_eq!(r.finding, Some(Finding::Convergent));
        let r = transform_report(&SequenceSpec::iterated_log(2), 2, 200).unwrap();
        assert_eq!(r.finding, Some(Finding::Divergent));
        let r = transform_report(&SequenceSpec::iterated_log(1), 1, 200).unwrap();
        assert_eq!(r.finding, Some(Finding::Divergent));
    }
}
