//! Coefficients of `(1+t)^{1/p} − 1 = Σ a_i t^i` and of its powers.
//!
//! `a_i = (−1)^{i−1} (1/i!) Π_{j=1}^{i−1} (jp − 1) / p^i` and
//! `b_j = [t^j] A(t)^k / k!`. The diagonal derivative of `α_k` at `(x, x)`
//! is `n!·b_n·x^{−(pn−k)/p}`.

use rayon::prelude::*;
use rug::{Integer, Rational};

use super::ckn::CknTable;
use super::e_monotone_le;
use super::series::SeriesPoly;
use crate::error::{Error, Result};
use crate::exact::{factorial, ExactRational};
use crate::verdict::{CheckReport, Enclosure64, EvidenceRow, Outcome, Scale};

fn check_p(p: u32) -> Result<()> {
    if p < 2 {
        Err(Error::InvalidArgument(format!(
            "p must be at least 2, got {p}"
        )))
    } else {
        Ok(())
    }
}

/// Signed `a_i` for `0 ≤ i ≤ i_max`, with `a_0 = 0`.
pub fn alpha_a_signed(p: u32, i_max: usize) -> Result<Vec<ExactRational>> {
    check_p(p)?;
    let mut out = Vec::with_capacity(i_max + 1);
    out.push(ExactRational::zero());
    // Running (−1)^{i−1} Π_{j<i}(jp − 1) / (i!·p^i).
    let mut cur = Rational::new();
    for i in 1..=i_max {
        if i == 1 {
            cur = Rational::from((1u32, p));
        } else {
            let j = (i - 1) as i64;
            let num = Integer::from(j * i64::from(p) - 1);
            let den = Integer::from(i as u64) * p;
            cur = -(cur * Rational::from((num, den)));
        }
        out.push(ExactRational::from(cur.clone()));
    }
    Ok(out)
}

/// `|a_i|` for `0 ≤ i ≤ i_max`.
pub fn alpha_a(p: u32, i_max: usize) -> Result<Vec<ExactRational>> {
    Ok(alpha_a_signed(p, i_max)?
        .iter()
        .map(ExactRational::abs)
        .collect())
}

/// Rows `i·|a_i| ≤ 1` for `1 ≤ i ≤ i_max`, decided exactly.
pub fn verify_alpha_a(p: u32, i_max: usize) -> Result<CheckReport> {
    let a = alpha_a(p, i_max)?;
    let one = Rational::from(1);
    let rows = (1..=i_max)
        .map(|i| {
            let lhs = Rational::from(a[i].as_rational() * i as u64);
            let bound = Rational::from((1u64, i as u64));
            EvidenceRow::new(
                vec![i64::from(p), i as i64],
                Enclosure64::log_of_rational(a[i].as_rational()),
                Some(Enclosure64::log_of_rational(&bound)),
                Outcome::from_ordering_le(lhs.cmp(&one)),
            )
        })
        .collect();
    Ok(CheckReport::from_rows(
        format!("alpha_a p={p}"),
        format!("|a_i| <= 1/i for 1 <= i <= {i_max}"),
        &["p", "i"],
        Scale::Log,
        rows,
    ))
}

/// `b^{(k)}` for `1 ≤ k ≤ k_max`, each up to order `n_max`.
#[derive(Clone, Debug)]
pub struct AlphaTable {
    p: u32,
    b: Vec<SeriesPoly>,
}

impl AlphaTable {
    pub fn new(p: u32, k_max: u32, n_max: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let a = SeriesPoly::new(alpha_a_signed(p, n_max)?);
        let mut b = Vec::with_capacity(k_max as usize);
        let mut power = a.clone();
        for k in 1..=k_max {
            let inv = ExactRational::from(Rational::from((1, factorial(u64::from(k)))));
            b.push(power.scale(&inv));
            if k < k_max {
                power = power.mul(&a);
            }
        }
        Ok(AlphaTable { p, b })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k_max(&self) -> u32 {
        self.b.len() as u32
    }

    pub fn n_max(&self) -> usize {
        self.b[0].n_max()
    }

    /// Signed `b_n` for the `k`-th power.
    pub fn b(&self, k: u32, n: u64) -> &ExactRational {
        self.b[k as usize - 1].coeff(n as usize)
    }

    pub fn series(&self, k: u32) -> &SeriesPoly {
        &self.b[k as usize - 1]
    }
}

/// `|b_j|` for `0 ≤ j ≤ n_max`.
pub fn alpha_b(p: u32, k: u32, n_max: usize) -> Result<Vec<ExactRational>> {
    let t = AlphaTable::new(p, k, n_max)?;
    Ok(t.series(k).abs().coeffs().to_vec())
}

/// Rows for `1 ≤ n ≤ n_max`: `|b_n| ≤ c_{k,n}/k!` exactly and
/// `|b_n| ≤ (2e)^n/n^k` against the rational enclosure of e.
pub fn verify_alpha_b(p: u32, k: u32, n_max: usize) -> Result<CheckReport> {
    let table = AlphaTable::new(p, k, n_max)?;
    let c = CknTable::new(k, n_max as u64);
    let kf = Rational::from(factorial(u64::from(k)));
    let rows = (1..=n_max as u64)
        .into_par_iter()
        .map(|n| {
            let b = table.b(k, n).abs();
            let ck = Rational::from(c.get(k, n).as_rational() / &kf);
            let exact = Outcome::from_ordering_le(b.as_rational().cmp(&ck));
            let nk = crate::exact::int_pow(n, u64::from(k));
            let safe = e_monotone_le(b.as_rational(), |e| {
                let two_e = Rational::from(e * 2u32);
                Rational::from(rug::ops::Pow::pow(&two_e, n as u32)) / &nk
            });
            EvidenceRow::new(
                vec![i64::from(k), n as i64],
                Enclosure64::log_of_rational(b.as_rational()),
                Some(Enclosure64::log_of_rational(&ck)),
                exact.combine(safe),
            )
        })
        .collect();
    Ok(CheckReport::from_rows(
        format!("alpha_b p={p} k={k}"),
        format!("|b_n| <= c_(k,n)/k! <= (2e)^n/n^k for 1 <= n <= {n_max}"),
        &["k", "n"],
        Scale::Log,
        rows,
    ))
}

/// Exact diagonal derivative together with its bound check.
#[derive(Clone, Debug)]
pub struct AlphaDiag {
    pub value: ExactRational,
    /// Row for `|value| ≤ (2e)^n·n^{n−k}·x^{−(pn−k)/p}`; absent for `n = 0`.
    pub bound: Option<EvidenceRow>,
}

/// `α_k^{(n)}(x, x) = n!·b_n·q^{−(pn−k)}` where `x = q^p`.
pub fn alpha_diag_derivative(p: u32, k: u32, n: u64, x: &ExactRational) -> Result<AlphaDiag> {
    let table = AlphaTable::new(p, k, n as usize)?;
    alpha_diag_from_table(&table, k, n, x)
}

pub(crate) fn alpha_diag_from_table(
    table: &AlphaTable,
    k: u32,
    n: u64,
    x: &ExactRational,
) -> Result<AlphaDiag> {
    let p = table.p();
    let q = x.exact_root(p).ok_or_else(|| Error::NotExactPower {
        value: x.to_string(),
        p,
    })?;
    let shift = (u64::from(p) * n) as i64 - i64::from(k);
    let x_factor = q.pow(-shift)?;
    let nf = ExactRational::from(factorial(n));
    let value = &(&nf * table.b(k, n)) * &x_factor;
    if n == 0 {
        return Ok(AlphaDiag { value, bound: None });
    }
    let n_pow = ExactRational::from(n).pow(n as i64 - i64::from(k))?;
    let tail = Rational::from(n_pow.as_rational() * x_factor.as_rational());
    let mag = value.abs();
    let outcome = e_monotone_le(mag.as_rational(), |e| {
        let two_e = Rational::from(e * 2u32);
        Rational::from(rug::ops::Pow::pow(&two_e, n as u32)) * &tail
    });
    let bound = Rational::from(rug::ops::Pow::pow(
        &Rational::from(&crate::constants::e_enclosure().lo * 2u32),
        n as u32,
    )) * &tail;
    let row = EvidenceRow::new(
        vec![i64::from(p), i64::from(k), n as i64],
        Enclosure64::log_of_rational(mag.as_rational()),
        Some(Enclosure64::log_of_rational(&bound)),
        outcome,
    );
    Ok(AlphaDiag {
        value,
        bound: Some(row),
    })
}
