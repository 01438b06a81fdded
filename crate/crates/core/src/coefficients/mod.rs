//! Exact coefficient computations: `c_{k,n}`, the α-series and the
//! factorial inequality used in the power-substitution bound.

pub mod alpha;
pub mod ckn;
pub mod ineq;
pub mod series;

use rug::Rational;

use crate::constants::e_enclosure;
use crate::verdict::Outcome;

pub use alpha::{
    alpha_a, alpha_a_signed, alpha_b, alpha_diag_derivative, verify_alpha_a, verify_alpha_b,
    AlphaDiag, AlphaTable,
};
pub use ckn::{
    ckn, ckn_bruteforce, verify_ckn_bound, CknBoundSweep, CknRow, CknTable, BRUTEFORCE_CAP,
};
pub use ineq::{factorial_le_power, sweep_factorial_bound, verify_factorial_bound};
pub use series::SeriesPoly;

/// Decides `lhs ≤ rhs(e)` for `rhs` non-decreasing in `e`: confirmed at the
/// lower end of the enclosure, refuted only past the upper end.
pub(crate) fn e_monotone_le(lhs: &Rational, rhs: impl Fn(&Rational) -> Rational) -> Outcome {
    let e = e_enclosure();
    if *lhs <= rhs(&e.lo) {
        Outcome::Confirmed
    } else if *lhs > rhs(&e.hi) {
        Outcome::Refuted
    } else {
        Outcome::Inconclusive
    }
}

/// Decides `lhs ≤ rhs` given `rhs_lo ≤ rhs ≤ rhs_hi`.
pub(crate) fn bracket_le(lhs: &Rational, rhs_lo: &Rational, rhs_hi: &Rational) -> Outcome {
    if lhs <= rhs_lo {
        Outcome::Confirmed
    } else if lhs > rhs_hi {
        Outcome::Refuted
    } else {
        Outcome::Inconclusive
    }
}
