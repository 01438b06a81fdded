//! `n^{pn−k} ≤ e^{pn}·(pn−k)!` for `1 ≤ n`, `0 ≤ k < pn`, equivalently
//! `1/(pn−k)! ≤ e^{pn}/n^{pn−k}`.

use rayon::prelude::*;
use rug::Rational;

use super::bracket_le;
use crate::constants::e_enclosure;
use crate::error::{Error, Result};
use crate::exact::{factorial, int_pow};
use crate::verdict::{CheckReport, Enclosure64, EvidenceRow, Scale, Verdict};

fn check_args(p: u32, n: u64, k: u64) -> Result<()> {
    if p < 1 || n < 1 || k >= u64::from(p) * n {
        return Err(Error::InvalidArgument(format!(
            "need p >= 1, n >= 1 and k < pn; got p={p}, n={n}, k={k}"
        )));
    }
    Ok(())
}

/// `e_lo^{pn}` and `e_hi^{pn}`.
pub(crate) fn e_powers(pn: u64) -> (Rational, Rational) {
    let e = e_enclosure();
    let pow = |x: &Rational| Rational::from(rug::ops::Pow::pow(x, pn as u32));
    (pow(&e.lo), pow(&e.hi))
}

pub(crate) fn row(p: u32, n: u64, k: u64, e_pow: &(Rational, Rational)) -> EvidenceRow {
    let m = u64::from(p) * n - k;
    let lhs = Rational::from(int_pow(n, m));
    let fact = factorial(m);
    let bound = Rational::from(&e_pow.0 * &fact);
    let outcome = bracket_le(&lhs, &bound, &Rational::from(&e_pow.1 * &fact));
    EvidenceRow::new(
        vec![i64::from(p), n as i64, k as i64],
        Enclosure64::log_of_rational(&lhs),
        Some(Enclosure64::log_of_rational(&bound)),
        outcome,
    )
}

/// Single instance, decided exactly against the rational enclosure of e.
pub fn verify_factorial_bound(p: u32, n: u64, k: u64) -> Result<Verdict> {
    check_args(p, n, k)?;
    let e_pow = e_powers(u64::from(p) * n);
    let r = row(p, n, k, &e_pow);
    let outcome = r.outcome;
    let mut v = Verdict::aggregate(std::slice::from_ref(&r));
    if outcome == crate::verdict::Outcome::Confirmed {
        v.evidence.push(r);
    }
    Ok(v)
}

/// All `1 ≤ n ≤ n_max`, `0 ≤ k < pn`.
pub fn sweep_factorial_bound(p: u32, n_max: u64) -> Result<CheckReport> {
    check_args(p, n_max.max(1), 0)?;
    let rows: Vec<EvidenceRow> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let pn = u64::from(p) * n;
            let e_pow = e_powers(pn);
            (0..pn)
                .map(move |k| row(p, n, k, &e_pow))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(CheckReport::from_rows(
        format!("factorial_bound p={p}"),
        format!("n^(pn-k) <= e^(pn) (pn-k)! for 1 <= n <= {n_max}, 0 <= k < pn"),
        &["p", "n", "k"],
        Scale::Log,
        rows,
    ))
}

/// `n! ≤ n^n`, exactly.
pub fn factorial_le_power(n: u64) -> bool {
    factorial(n) <= int_pow(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Outcome;

    #[test]
    fn examples() {
        for (p, n, k) in [(2, 1, 1), (2, 1, 0), (3, 7, 20), (5, 40, 199)] {
            let v = verify_factorial_bound(p, n, k).unwrap();
            assert_eq!(v.outcome, Outcome::Confirmed, "{p} {n} {k}");
            assert_eq!(v.evidence.len(), 1);
        }
        assert!(verify_factorial_bound(2, 1, 2).is_err());
        assert!(verify_factorial_bound(2, 0, 0).is_err());
    }

    #[test]
    fn sweep_has_every_row() {
        let r = sweep_factorial_bound(3, 6).unwrap();
        assert!(r.is_confirmed());
        assert_eq!(r.rows.len(), (1..=6).map(|n| 3 * n).sum::<usize>());
    }

    #[test]
    fn factorial_vs_power() {
        assert!((0..30).all(factorial_le_power));
    }
}
