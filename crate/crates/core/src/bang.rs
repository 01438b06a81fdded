//! Bang's function `F(ξ) = Σ_k M'_k (2m_k)^{−k} cos(2 m_k ξ)`, `m_k = M'_{k+1}/M'_k`.
//!
//! Every derivative of `F` at 0 is a positive series times a sign, and
//! log-convexity of `M'` gives `M'_k (2m_k)^{n−k} ≤ M'_n 2^{n−k}` for `k > n`,
//! so the tail after `K ≥ n` is at most `M'_n 2^{n−K}`. We use the looser
//! `M'_n 2^{n−K+1}` throughout.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, ExactRational};
use crate::interval::Interval;
use crate::logreal::LogReal;
use crate::sequence::criteria::{check_log_convex, shape, Shape, Variant};
use crate::sequence::{BoundCertificate, WeightSequence};
use crate::verdict::{format_f64, CheckReport, Enclosure64, EvidenceRow, Outcome, Scale};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

/// A real number as a sign and an enclosure of its magnitude.
#[derive(Clone, Debug)]
pub struct SignedEnclosure {
    sign: Sign,
    magnitude: Option<LogReal>,
}

impl SignedEnclosure {
    pub fn zero() -> Self {
        SignedEnclosure {
            sign: Sign::Zero,
            magnitude: None,
        }
    }

    pub fn new(sign: Sign, magnitude: LogReal) -> Self {
        assert!(sign != Sign::Zero, "zero carries no magnitude");
        SignedEnclosure {
            sign,
            magnitude: Some(magnitude),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `None` exactly when the value is zero.
    pub fn magnitude(&self) -> Option<&LogReal> {
        self.magnitude.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn to_interval(&self, prec: u32) -> Result<Interval> {
        match (&self.magnitude, self.sign) {
            (None, _) => Ok(Interval::zero(prec)),
            (Some(m), Sign::Negative) => Ok(m.to_linear()?.neg()),
            (Some(m), _) => m.to_linear(),
        }
    }

    fn scale(&self, factor: &LogReal) -> Self {
        SignedEnclosure {
            sign: self.sign,
            magnitude: self.magnitude.as_ref().map(|m| m.mul(factor)),
        }
    }
}

fn sign_of_even_order(j: u64) -> Sign {
    if j.is_multiple_of(2) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// One row of the per-order table: `S_n = Σ_k M'_k (2m_k)^{n−k}` against
/// the floor `M'_n` and the ceiling `2^{n+1} M'_n`, all in log scale.
#[derive(Clone, Debug, Serialize)]
pub struct BangRow {
    pub n: u64,
    pub lower_bound_log: Enclosure64,
    pub value_log: Enclosure64,
    pub ceiling_log: Enclosure64,
    pub outcome: Outcome,
}

impl BangRow {
    pub const CSV_HEADER: [&'static str; 6] = [
        "n",
        "lower_bound_log",
        "value_log_lo",
        "value_log_hi",
        "ceiling_log",
        "verdict",
    ];

    pub fn csv_record(&self) -> [String; 6] {
        [
            self.n.to_string(),
            format_f64(self.lower_bound_log.hi),
            format_f64(self.value_log.lo),
            format_f64(self.value_log.hi),
            format_f64(self.ceiling_log.lo),
            self.outcome.to_string(),
        ]
    }
}

pub struct BangSeries {
    seq: WeightSequence,
    range: u64,
    convexity: CheckReport,
    convexity_basis: String,
    terms: RwLock<HashMap<u64, (LogReal, LogReal)>>,
}

impl BangSeries {
    /// Prepares derivatives up to order `max_order`. Log-convexity of `M'` is
    /// checked on the whole truncation range; failure rejects the sequence.
    pub fn new(seq: WeightSequence, max_order: u64) -> Result<Self> {
        let range = max_order + u64::from(seq.bits()) + 2;
        if range + 1 > seq.index_limit() {
            return Err(Error::IndexOutOfRange {
                index: range + 1,
                max: seq.index_limit(),
            });
        }
        let convexity = check_log_convex(&seq, Variant::Mprime, range + 1)?;
        if let Some(bad) = convexity
            .rows
            .iter()
            .find(|r| r.outcome != Outcome::Confirmed)
        {
            return Err(Error::ConvexityUnconfirmed(bad.index[0] as u64));
        }
        let convexity_basis = match shape(seq.spec()) {
            (Shape::Constant, 1) => "M'_n = n!: log-convex for every n".to_string(),
            (Shape::Gevrey(_), 1) => "M'_n = (n!)^(1+s): log-convex for every n".to_string(),
            _ => format!(
                "M' log-convexity confirmed on 1 <= n <= {range}; tail bounds assume it continues beyond"
            ),
        };
        Ok(BangSeries {
            seq,
            range,
            convexity,
            convexity_basis,
            terms: RwLock::new(HashMap::new()),
        })
    }

    pub fn seq(&self) -> &WeightSequence {
        &self.seq
    }

    /// Largest term index available for truncation.
    pub fn range(&self) -> u64 {
        self.range
    }

    pub fn convexity_report(&self) -> &CheckReport {
        &self.convexity
    }

    pub fn convexity_basis(&self) -> &str {
        &self.convexity_basis
    }

    fn bits(&self) -> u32 {
        self.seq.bits()
    }

    /// `(M'_k, 2m_k)`.
    fn term(&self, k: u64) -> Result<(LogReal, LogReal)> {
        if k > self.range {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.range,
            });
        }
        if let Some(t) = self.terms.read().expect("term cache").get(&k) {
            return Ok(t.clone());
        }
        let mp = self.seq.log_mprime(k)?;
        let two_m = self
            .seq
            .ratio_m(k)?
            .mul(&LogReal::from_u64(self.bits(), 2)?);
        let mut cache = self.terms.write().expect("term cache");
        Ok(cache.entry(k).or_insert((mp, two_m)).clone())
    }

    /// `M'_k (2m_k)^{n−k}`, the magnitude of the n-th derivative of the k-th term at 0.
    pub fn deriv_term(&self, k: u64, n: u64) -> Result<LogReal> {
        let (mp, two_m) = self.term(k)?;
        Ok(mp.mul(&two_m.powi(n as i64 - k as i64)))
    }

    /// Smallest `K` whose tail bound falls below `2^{−bits}·M'_n`, at least `n + 8`.
    pub fn default_truncation(&self, n: u64) -> u64 {
        (n + u64::from(self.bits()) + 2).max(n + 8)
    }

    /// `M'_n 2^{n−K+1}`.
    fn tail_bound(&self, n: u64, k_trunc: u64) -> Result<LogReal> {
        let (mp, _) = self.term(n)?;
        Ok(mp.mul(&LogReal::from_u64(self.bits(), 2)?.powi(n as i64 - k_trunc as i64 + 1)))
    }

    fn truncation(&self, n: u64, k_trunc: Option<u64>) -> Result<u64> {
        let k = k_trunc.unwrap_or_else(|| self.default_truncation(n));
        if k < n {
            return Err(Error::InvalidArgument(format!(
                "truncation {k} below derivative order {n}"
            )));
        }
        if k > self.range {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.range,
            });
        }
        Ok(k)
    }

    /// Enclosure of `S_n = Σ_{k≥0} M'_k (2m_k)^{n−k}`.
    pub fn derivative_sum(&self, n: u64, k_trunc: Option<u64>) -> Result<LogReal> {
        let k_trunc = self.truncation(n, k_trunc)?;
        let mut acc = self.deriv_term(0, n)?;
        for k in 1..=k_trunc {
            acc = acc.add(&self.deriv_term(k, n)?);
        }
        Ok(acc.add_upper(&self.tail_bound(n, k_trunc)?))
    }

    /// `F^{(n)}(0)`: zero for odd `n`, `(−1)^{n/2} S_n` for even `n`.
    pub fn big_deriv_at_zero(&self, n: u64, k_trunc: Option<u64>) -> Result<SignedEnclosure> {
        if n % 2 == 1 {
            return Ok(SignedEnclosure::zero());
        }
        let mag = self.derivative_sum(n, k_trunc)?;
        Ok(SignedEnclosure::new(sign_of_even_order(n / 2), mag))
    }

    /// `f^{(n)}(0) = n!/(2n)!·F^{(2n)}(0)` for `f(ξ²) = F(ξ)`.
    pub fn f_deriv_at_zero(&self, n: u64, k_trunc: Option<u64>) -> Result<SignedEnclosure> {
        let big = self.big_deriv_at_zero(2 * n, k_trunc)?;
        Ok(big.scale(&self.f_factor(n)?))
    }

    /// `n!/(2n)!`.
    fn f_factor(&self, n: u64) -> Result<LogReal> {
        LogReal::from_rational(
            self.bits(),
            &Rational::from((factorial(n), factorial(2 * n))),
        )
    }

    /// Rows `n ≤ n_max`: sign of `F^{(2n)}(0)` is `(−1)^n` and `M'_{2n} ≤ |F^{(2n)}(0)|`.
    pub fn verify_lower_bound(&self, n_max: u64) -> Result<CheckReport> {
        let rows = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let d = self.big_deriv_at_zero(2 * n, None)?;
                let mag = d.magnitude().expect("even order is non-zero");
                let floor = self.term(2 * n)?.0;
                let sign_ok = d.sign() == sign_of_even_order(n);
                let outcome = if sign_ok {
                    floor.le(mag)
                } else {
                    Outcome::Refuted
                };
                Ok(EvidenceRow::new(
                    vec![n as i64],
                    Enclosure64::of_log(&floor),
                    Some(Enclosure64::of_log(mag)),
                    outcome,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::from_rows(
            format!("bang_lower {}", self.seq.spec()),
            format!("sign F^(2n)(0) = (-1)^n and M'_(2n) <= |F^(2n)(0)| for 0 <= n <= {n_max}"),
            &["n"],
            Scale::Log,
            rows,
        ))
    }

    /// Rows `n ≤ n_max`: `n! M'_{2n}/(2n)! ≤ |f^{(n)}(0)|` and sign `(−1)^n`.
    pub fn verify_f_lower_bound(&self, n_max: u64) -> Result<CheckReport> {
        let rows = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let f = self.f_deriv_at_zero(n, None)?;
                let mag = f.magnitude().expect("non-zero");
                let floor = self.term(2 * n)?.0.mul(&self.f_factor(n)?);
                let outcome = if f.sign() == sign_of_even_order(n) {
                    floor.le(mag)
                } else {
                    Outcome::Refuted
                };
                Ok(EvidenceRow::new(
                    vec![n as i64],
                    Enclosure64::of_log(&floor),
                    Some(Enclosure64::of_log(mag)),
                    outcome,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::from_rows(
            format!("bang_f_lower {}", self.seq.spec()),
            format!("n! M'_(2n)/(2n)! <= |f^(n)(0)| with sign (-1)^n for 0 <= n <= {n_max}"),
            &["n"],
            Scale::Log,
            rows,
        ))
    }

    /// The derived membership constants: `|F^{(n)}| ≤ 2·2^n·M'_n` on the line.
    pub fn certificate(&self) -> Result<BoundCertificate> {
        let two = LogReal::from_u64(self.bits(), 2)?;
        BoundCertificate::new(two.clone(), two, "R", self.seq.spec().clone())
    }

    /// Rows `1 ≤ n ≤ n_max`: `S_n ≤ 2^{n+1} M'_n`.
    ///
    /// For `k ≤ n`, `m_k^{n−k} ≤ m_k⋯m_{n−1} = M'_n/M'_k` bounds the term by
    /// `2^{n−k} M'_n`; for `k > n` the term is at most `2^{n−k} M'_n`. The two
    /// geometric sums give `2^{n+1} M'_n`.
    pub fn verify_membership(&self, n_max: u64) -> Result<CheckReport> {
        let cert = self.certificate()?;
        let rows = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let s = self.derivative_sum(n, None)?;
                let ceiling = cert.log_ceiling(n, &self.term(n)?.0);
                Ok(EvidenceRow::new(
                    vec![n as i64],
                    Enclosure64::of_log(&s),
                    Some(Enclosure64::of_log(&ceiling)),
                    s.le(&ceiling),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::from_rows(
            format!("bang_membership {}", self.seq.spec()),
            format!("sum_k M'_k (2 m_k)^(n-k) <= 2^(n+1) M'_n for 1 <= n <= {n_max}"),
            &["n"],
            Scale::Log,
            rows,
        )
        .with_note(self.convexity_basis.clone()))
    }

    /// Per-order table for CSV output, `0 ≤ n ≤ n_max`.
    pub fn table(&self, n_max: u64) -> Result<Vec<BangRow>> {
        let cert = self.certificate()?;
        (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let s = self.derivative_sum(n, None)?;
                let floor = self.term(n)?.0;
                let ceiling = cert.log_ceiling(n, &floor);
                Ok(BangRow {
                    n,
                    lower_bound_log: Enclosure64::of_log(&floor),
                    value_log: Enclosure64::of_log(&s),
                    ceiling_log: Enclosure64::of_log(&ceiling),
                    outcome: floor.le(&s).combine(s.le(&ceiling)),
                })
            })
            .collect()
    }

    /// Rows `0 ≤ n ≤ n_max`: `0 ≤ ln(|f^{(n)}(0)|·(2n)!/(n! M'_{2n})) ≤ (n+2) ln 4`.
    /// Only `p = 2` is supported, matching `f(ξ²) = F(ξ)`.
    pub fn sharpness_evidence(&self, p: u32, n_max: u64) -> Result<CheckReport> {
        if p != 2 {
            return Err(Error::InvalidArgument(format!(
                "sharpness evidence needs p = 2, got {p}"
            )));
        }
        let bits = self.bits();
        let zero = Interval::zero(bits);
        let ln4 = Interval::from_u64(bits, 4).ln()?;
        let rows = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let f = self.f_deriv_at_zero(n, None)?;
                let mag = f.magnitude().expect("non-zero");
                let ratio = mag.div(&self.f_factor(n)?).div(&self.term(2 * n)?.0);
                let cap = ln4.mul_u64(n + 2);
                let outcome = zero.le(ratio.log()).combine(ratio.log().le(&cap));
                Ok(EvidenceRow::new(
                    vec![n as i64],
                    Enclosure64::of_interval(ratio.log()),
                    Some(Enclosure64::of_interval(&cap)),
                    outcome,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::from_rows(
            format!("bang_sharpness {}", self.seq.spec()),
            format!("0 <= ln(|f^(n)(0)| (2n)!/(n! M'_(2n))) <= (n+2) ln 4 for 0 <= n <= {n_max}"),
            &["n"],
            Scale::Log,
            rows,
        )
        .with_note("evidence for the size of f's Taylor coefficients, not a minimality proof"))
    }

    /// Enclosure of `F(ξ)` for `ξ ∈ [−1, 1]`, truncated after `K` terms.
    pub fn eval(&self, xi: &ExactRational, k_trunc: u64) -> Result<Interval> {
        if xi.abs() > ExactRational::one() {
            return Err(Error::InvalidArgument(format!("xi = {xi} outside [-1, 1]")));
        }
        let k_trunc = self.truncation(0, Some(k_trunc.max(1)))?;
        let bits = self.bits();
        let mut acc = Interval::zero(bits);
        for k in 0..=k_trunc {
            let (_, two_m) = self.term(k)?;
            let coeff = self.deriv_term(k, 0)?.to_linear()?;
            let arg = two_m.to_linear()?.mul_rational(xi.as_rational());
            acc = acc.add(&coeff.mul(&arg.cos()));
        }
        let tail = self.tail_bound(0, k_trunc)?.to_linear()?;
        // [−t, t] for the tail bound t.
        let spread = tail.hull(&tail.neg()).hull(&Interval::zero(bits));
        Ok(acc.add(&spread))
    }

    /// `(ξ, F(ξ))` at `points` equally spaced rationals in `[−1, 1]`.
    pub fn plot_data(&self, points: u32, k_trunc: u64) -> Result<Vec<(ExactRational, Interval)>> {
        if points < 2 {
            return Err(Error::InvalidArgument(
                "need at least two plot points".into(),
            ));
        }
        (0..points)
            .into_par_iter()
            .map(|i| {
                let xi = ExactRational::new(
                    2 * i64::from(i) - i64::from(points - 1),
                    i64::from(points - 1),
                )?;
                let v = self.eval(&xi, k_trunc)?;
                Ok((xi, v))
            })
            .collect()
    }
}
