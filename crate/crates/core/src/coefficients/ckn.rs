//! `c_{k,n} = [x^n] (−log(1−x))^k = Σ_{i_1+…+i_k=n} 1/(i_1⋯i_k)`.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use super::{e_monotone_le, series::SeriesPoly};
use crate::error::{Error, Result};
use crate::exact::{factorial, int_pow, ExactRational};
use crate::verdict::{format_f64, CheckReport, Enclosure64, EvidenceRow, Outcome, Scale};

/// Largest `n` accepted by [`ckn_bruteforce`]; there are `2^{n−1}` compositions.
pub const BRUTEFORCE_CAP: u64 = 18;

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidArgument(
            "c_{k,n} is defined for k >= 1".into(),
        ))
    } else {
        Ok(())
    }
}

/// Exact `c_{k,n}` by k-fold truncated convolution; `c_{k,0} = 0`.
pub fn ckn(k: u32, n: u64) -> Result<ExactRational> {
    check_k(k)?;
    let s = SeriesPoly::log_series(n as usize).pow(k);
    Ok(s.coeff(n as usize).clone())
}

/// Sum over explicit compositions of `n` into `k` positive parts.
pub fn ckn_bruteforce(k: u32, n: u64) -> Result<ExactRational> {
    check_k(k)?;
    if n > BRUTEFORCE_CAP {
        return Err(Error::DepthRefused {
            n,
            cap: BRUTEFORCE_CAP,
        });
    }
    fn walk(parts_left: u32, remaining: u64, denom: &Integer, acc: &mut Rational) {
        if parts_left == 1 {
            if remaining >= 1 {
                *acc += Rational::from((1, Integer::from(denom * remaining)));
            }
            return;
        }
        // Leave at least one for each later part.
        let room = remaining.saturating_sub(u64::from(parts_left - 1));
        for i in 1..=room {
            walk(
                parts_left - 1,
                remaining - i,
                &Integer::from(denom * i),
                acc,
            );
        }
    }
    let mut acc = Rational::new();
    walk(k, n, &Integer::from(1), &mut acc);
    Ok(ExactRational::from(acc))
}

/// `c_{k,n}` for `1 ≤ k ≤ k_max`, `0 ≤ n ≤ n_max`.
#[derive(Clone, Debug)]
pub struct CknTable {
    powers: Vec<SeriesPoly>,
}

impl CknTable {
    pub fn new(k_max: u32, n_max: u64) -> Self {
        let base = SeriesPoly::log_series(n_max as usize);
        let mut powers = Vec::with_capacity(k_max as usize);
        let mut acc = base.clone();
        for _ in 0..k_max {
            powers.push(acc.clone());
            acc = acc.mul(&base);
        }
        CknTable { powers }
    }

    pub fn k_max(&self) -> u32 {
        self.powers.len() as u32
    }

    pub fn n_max(&self) -> u64 {
        self.powers.first().map_or(0, |s| s.n_max() as u64)
    }

    pub fn get(&self, k: u32, n: u64) -> &ExactRational {
        self.powers[k as usize - 1].coeff(n as usize)
    }
}

/// One row of the `c_{k,n}` bound sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CknRow {
    pub k: u32,
    pub n: u64,
    pub c: ExactRational,
    /// Upper rounding of the lemma bound `(2·e_lo)^n k!/n^k` actually used.
    pub bound_upper: f64,
    /// Combined outcome of the lemma bound and `c ≤ 2^n`.
    pub outcome: Outcome,
}

impl CknRow {
    pub const CSV_HEADER: [&'static str; 6] =
        ["k", "n", "c_num", "c_den", "bound_upper", "verdict"];

    pub fn csv_record(&self) -> [String; 6] {
        [
            self.k.to_string(),
            self.n.to_string(),
            self.c.numer().to_string(),
            self.c.denom().to_string(),
            format_f64(self.bound_upper),
            self.outcome.to_string(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct CknBoundSweep {
    /// `c_{k,n} ≤ (2e)^n k!/n^k`.
    pub lemma: CheckReport,
    /// `c_{k,n} ≤ 2^n`.
    pub cauchy: CheckReport,
    pub rows: Vec<CknRow>,
}

/// Checks both bounds on `1 ≤ k ≤ k_max`, `1 ≤ n ≤ n_max`.
pub fn verify_ckn_bound(k_max: u32, n_max: u64) -> Result<CknBoundSweep> {
    if k_max == 0 || n_max == 0 {
        return Err(Error::InvalidArgument(
            "k_max and n_max must be positive".into(),
        ));
    }
    let table = CknTable::new(k_max, n_max);
    let grid: Vec<(u32, u64)> = (1..=k_max)
        .flat_map(|k| (1..=n_max).map(move |n| (k, n)))
        .collect();
    let results: Vec<(EvidenceRow, EvidenceRow, CknRow)> = grid
        .into_par_iter()
        .map(|(k, n)| {
            let c = table.get(k, n);
            let kf = Rational::from(factorial(u64::from(k)));
            let nk = int_pow(n, u64::from(k));
            // (2e)^n k!/n^k is increasing in e.
            let rhs = |e: &Rational| -> Rational {
                let two_e = Rational::from(e * 2u32);
                let pow = Rational::from(rug::ops::Pow::pow(&two_e, n as u32));
                Rational::from(&pow * &kf) / &nk
            };
            let lemma_outcome = e_monotone_le(c.as_rational(), rhs);
            let lemma_bound = rhs(&crate::constants::e_enclosure().lo);
            let two_n = Rational::from(int_pow(2, n));
            let cauchy_outcome = Outcome::from_ordering_le(c.as_rational().cmp(&two_n));
            let idx = vec![i64::from(k), n as i64];
            let value = Enclosure64::log_of_rational(c.as_rational());
            let lemma_row = EvidenceRow::new(
                idx.clone(),
                value,
                Some(Enclosure64::log_of_rational(&lemma_bound)),
                lemma_outcome,
            );
            let cauchy_row = EvidenceRow::new(
                idx,
                value,
                Some(Enclosure64::log_of_rational(&two_n)),
                cauchy_outcome,
            );
            let row = CknRow {
                k,
                n,
                c: c.clone(),
                bound_upper: Enclosure64::of_rational(&lemma_bound).hi,
                outcome: lemma_outcome.combine(cauchy_outcome),
            };
            (lemma_row, cauchy_row, row)
        })
        .collect();
    let mut lemma_rows = Vec::with_capacity(results.len());
    let mut cauchy_rows = Vec::with_capacity(results.len());
    let mut rows = Vec::with_capacity(results.len());
    for (a, b, r) in results {
        lemma_rows.push(a);
        cauchy_rows.push(b);
        rows.push(r);
    }
    Ok(CknBoundSweep {
        lemma: CheckReport::from_rows(
            "ckn_bound",
            format!("c_(k,n) <= (2e)^n k!/n^k for 1 <= k <= {k_max}, 1 <= n <= {n_max}"),
            &["k", "n"],
            Scale::Log,
            lemma_rows,
        ),
        cauchy: CheckReport::from_rows(
            "ckn_cauchy",
            format!("c_(k,n) <= 2^n for 1 <= k <= {k_max}, 1 <= n <= {n_max}"),
            &["k", "n"],
            Scale::Log,
            cauchy_rows,
        ),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(ckn(2, 3).unwrap(), q(1, 1));
        assert_eq!(ckn(3, 3).unwrap(), q(1, 1));
        assert_eq!(ckn(2, 2).unwrap(), q(1, 1));
        assert_eq!(ckn(2, 1).unwrap(), q(0, 1));
        assert_eq!(ckn(4, 0).unwrap(), q(0, 1));
        for n in 1..10 {
            assert_eq!(ckn(1, n).unwrap(), ExactRational::recip_u64(n));
        }
        assert!(ckn(0, 3).is_err());
    }

    #[test]
    fn bruteforce_examples_and_cap() {
        assert_eq!(ckn_bruteforce(3, 3).unwrap(), q(1, 1));
        assert_eq!(ckn_bruteforce(2, 2).unwrap(), q(1, 1));
        assert_eq!(ckn_bruteforce(2, 1).unwrap(), q(0, 1));
        assert!(matches!(
            ckn_bruteforce(2, 19),
            Err(Error::DepthRefused { n: 19, cap: 18 })
        ));
    }

    #[test]
    fn table_matches_direct() {
        let t = CknTable::new(5, 12);
        for k in 1..=5 {
            for n in 0..=12 {
                assert_eq!(t.get(k, n), &ckn(k, n).unwrap());
            }
        }
    }

    #[test]
    fn small_sweep_confirms() {
        let s = verify_ckn_bound(4, 8).unwrap();
        assert!(s.lemma.is_confirmed());
        assert!(s.cauchy.is_confirmed());
        assert_eq!(s.rows.len(), 32);
        let r = s.rows.iter().find(|r| r.k == 2 && r.n == 2).unwrap();
        assert!((r.bound_upper - 14.778).abs() < 1e-2);
    }
}
