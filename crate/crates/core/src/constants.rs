//! Rational enclosure of e and log-factorial enclosures.

use std::sync::OnceLock;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::interval::Interval;

/// `lo < e < hi` with both endpoints rational.
#[derive(Clone, Debug)]
pub struct EEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

/// Smallest denominator accepted for the closing convergents; keeps the
/// enclosure width below `1e-40`.
const MIN_DENOMINATOR_DIGITS: usize = 21;

/// Partial quotients of e: `[2; 1, 2, 1, 1, 4, 1, 1, 6, ...]`.
fn e_partial_quotient(i: u32) -> u32 {
    match i {
        0 => 2,
        _ if i % 3 == 2 => 2 * (i + 1) / 3,
        _ => 1,
    }
}

fn build_enclosure() -> EEnclosure {
    // Even-indexed convergents lie below e, odd-indexed above.
    let (mut h_prev, mut h) = (Integer::from(1), Integer::from(2));
    let (mut k_prev, mut k) = (Integer::from(0), Integer::from(1));
    let mut below = Rational::from(2);
    let mut above = None;
    let mut i = 0u32;
    loop {
        i += 1;
        let a = e_partial_quotient(i);
        let h_next = Integer::from(&h * a) + &h_prev;
        let k_next = Integer::from(&k * a) + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let conv = Rational::from((h.clone(), k.clone()));
        if i.is_multiple_of(2) {
            below = conv;
        } else {
            above = Some(conv);
        }
        if k_prev.to_string().len() >= MIN_DENOMINATOR_DIGITS && i.is_multiple_of(2) {
            break;
        }
    }
    EEnclosure {
        lo: below,
        hi: above.expect("at least one odd convergent"),
    }
}

pub fn e_enclosure() -> &'static EEnclosure {
    static E: OnceLock<EEnclosure> = OnceLock::new();
    E.get_or_init(build_enclosure)
}

/// Enclosure of `ln n!`. Exact zero for `n ≤ 1`; otherwise MPFR's correctly
/// rounded `lngamma(n + 1)` in both directions.
pub fn ln_factorial(prec: u32, n: u64) -> Interval {
    if n <= 1 {
        return Interval::zero(prec);
    }
    let arg = Float::with_val(prec.max(64), n + 1);
    let mut lo = Float::with_val(prec, &arg);
    lo.ln_gamma_round(Round::Down);
    let mut hi = Float::with_val(prec, &arg);
    hi.ln_gamma_round(Round::Up);
    Interval::new(lo, hi).expect("finite lngamma")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::factorial;

    /// Independent bounds from the factorial series:
    /// `Σ_{j≤N} 1/j! < e < Σ_{j≤N} 1/j! + 1/(N!·N)`.
    fn series_bounds(n: u64) -> (Rational, Rational) {
        let mut s = Rational::new();
        for j in 0..=n {
            s += Rational::from((1, factorial(j)));
        }
        let tail = Rational::from((1, factorial(n) * n));
        let hi = Rational::from(&s + &tail);
        (s, hi)
    }

    #[test]
    fn enclosure_brackets_e_tightly() {
        let e = e_enclosure();
        let (slo, shi) = series_bounds(40);
        // The series bracket is ~1e-49 wide, so it separates from convergents.
        assert!(e.lo < shi);
        assert!(e.hi > slo);
        assert!(e.lo < slo, "convergent below the series lower bound");
        assert!(e.hi > shi, "convergent above the series upper bound");
        let width = Rational::from(&e.hi - &e.lo);
        assert!(width < Rational::from((1, crate::exact::int_pow(10, 30))));
    }

    #[test]
    fn ln_factorial_encloses_exact_logs() {
        for n in [0u64, 1, 2, 5, 20, 30] {
            let iv = ln_factorial(256, n);
            let exact = Interval::from_integer(256, &factorial(n)).ln().unwrap();
            assert!(iv.lo() <= exact.hi() && exact.lo() <= iv.hi(), "n = {n}");
        }
        assert!(ln_factorial(256, 1).is_exact());
    }
}
