use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use quasiseq::bang::BangSeries;
use quasiseq::coefficients::{
    ckn, factorial_le_power, verify_factorial_bound, AlphaTable, SeriesPoly,
};
use quasiseq::exact::factorial;
use quasiseq::sequence::{check_log_convex, Variant};
use quasiseq::substitution::{coeff_level_check, TheoremInstance};
use quasiseq::{
    EvidenceRow, ExactRational, Interval, LogReal, Outcome, SequenceSpec, Verdict, WeightSequence,
};

const BITS: u32 = 200;

fn builtin(idx: usize) -> SequenceSpec {
    match idx {
        0 => SequenceSpec::constant(),
        1 => SequenceSpec::gevrey_int(1),
        2 => SequenceSpec::gevrey(ExactRational::new(1, 2).unwrap()),
        3 => SequenceSpec::iterated_log(1),
        4 => SequenceSpec::iterated_log(2),
        _ => SequenceSpec::gevrey(ExactRational::new(5, 3).unwrap()),
    }
}

fn rat_interval(a: i64, b: i64, den: u32) -> Interval {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let lo = Float::with_val(BITS, Rational::from((lo, den)));
    let hi = Float::with_val(BITS, Rational::from((hi, den)));
    Interval::new(lo, hi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `M_n^b = (n!)^a` for `s = a/b`, checked against the enclosure raised to `b`.
    #[test]
    fn gevrey_enclosure_contains_exact(a in 1u32..5, b in 1u32..4, n in 0u64..=30) {
        let s = ExactRational::new(a, b).unwrap();
        let seq = WeightSequence::new(&SequenceSpec::gevrey(s)).unwrap();
        let m = seq.log_m(n).unwrap().powi(i64::from(b));
        let exact = factorial(n).pow(a);
        prop_assert!(m.contains_rational(&Rational::from(exact)));
        let mp = seq.log_mprime(n).unwrap().powi(i64::from(b));
        let exact_p = factorial(n).pow(a + b);
        prop_assert!(mp.contains_rational(&Rational::from(exact_p)));
    }

    #[test]
    fn table_enclosure_is_exact_log(vals in proptest::collection::vec(0i64..50, 1..12)) {
        let mut acc = 0i64;
        let mut logs = vec![ExactRational::zero()];
        for v in &vals {
            acc += v;
            logs.push(ExactRational::new(acc, 7).unwrap());
        }
        let seq = WeightSequence::new(&SequenceSpec::table(logs.clone())).unwrap();
        for (n, l) in logs.iter().enumerate() {
            let m = seq.log_m(n as u64).unwrap();
            prop_assert!(m.log().contains_rational(l.as_rational()));
        }
        prop_assert!(seq.log_m(logs.len() as u64).is_err());
    }

    #[test]
    fn constant_is_exactly_one(n in 0u64..100_000) {
        let seq = WeightSequence::new(&SequenceSpec::constant()).unwrap();
        let m = seq.log_m(n).unwrap();
        prop_assert!(m.is_exact());
        prop_assert!(m.contains_rational(&Rational::from(1)));
    }

    #[test]
    fn builtin_families_non_decreasing(idx in 0usize..6, n in 0u64..400) {
        let seq = WeightSequence::new(&builtin(idx)).unwrap();
        let a = seq.log_m(n).unwrap();
        let b = seq.log_m(n + 1).unwrap();
        prop_assert_ne!(a.le(&b), Outcome::Refuted);
    }

    #[test]
    fn memo_refill_is_identical(idx in 0usize..6, n in 0u64..300) {
        let spec = builtin(idx);
        let warm = WeightSequence::new(&spec).unwrap();
        let first = warm.log_m(n).unwrap();
        let second = warm.log_m(n).unwrap();
        let cold = WeightSequence::new(&spec).unwrap().log_m(n).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(&first, &cold);
    }

    #[test]
    fn ratios_non_decreasing_under_convexity(idx in 0usize..6, top in 3u64..60) {
        let seq = WeightSequence::new(&builtin(idx)).unwrap();
        let convex = check_log_convex(&seq, Variant::Mprime, top).unwrap();
        if convex.is_confirmed() {
            for k in 0..top - 1 {
                let lhs = seq.ratio_m(k).unwrap();
                let rhs = seq.ratio_m(k + 1).unwrap();
                prop_assert_ne!(lhs.le(&rhs), Outcome::Refuted, "k = {}", k);
            }
        }
    }

    #[test]
    fn transform_composition_is_exact(idx in 0usize..6, p in 2u32..5, q in 2u32..5, n in 0u64..40) {
        let base = builtin(idx);
        let twice = SequenceSpec::transformed(SequenceSpec::transformed(base.clone(), p), q);
        let once = SequenceSpec::transformed(base, p * q);
        let a = WeightSequence::new(&twice).unwrap().log_m(n).unwrap();
        let b = WeightSequence::new(&once).unwrap().log_m(n).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ckn_positive_exactly_from_k(k in 1u32..7, n in 0u64..30) {
        let c = ckn(k, n).unwrap();
        if n < u64::from(k) {
            prop_assert!(c.is_zero());
        } else {
            prop_assert!(c.is_positive());
            prop_assert!(c.as_rational() <= &Rational::from(Integer::from(1) << n as u32));
        }
    }

    #[test]
    fn factorial_bound_confirmed(p in 2u32..6, n in 1u64..30, k_frac in 0.0f64..1.0) {
        let pn = u64::from(p) * n;
        let k = ((pn as f64) * k_frac) as u64;
        prop_assume!(k < pn);
        let v = verify_factorial_bound(p, n, k).unwrap();
        prop_assert_eq!(v.outcome, Outcome::Confirmed);
        prop_assert!(factorial_le_power(n));
    }

    /// Safe comparison never claims more than the endpoints allow.
    #[test]
    fn comparison_is_sound(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
        let x = rat_interval(a, b, 3);
        let y = rat_interval(c, d, 3);
        let out = x.le(&y);
        match out {
            Outcome::Confirmed => prop_assert!(x.hi() <= y.lo()),
            Outcome::Refuted => prop_assert!(x.lo() > y.hi()),
            Outcome::Inconclusive => prop_assert!(x.hi() > y.lo() && x.lo() <= y.hi()),
        }
        let lx = LogReal::from_log(x.clone());
        let ly = LogReal::from_log(y.clone());
        prop_assert_eq!(lx.le(&ly), out);
    }

    #[test]
    fn refuted_verdicts_carry_witnesses(outs in proptest::collection::vec(0u8..3, 1..20)) {
        let rows: Vec<EvidenceRow> = outs
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let outcome = match o {
                    0 => Outcome::Confirmed,
                    1 => Outcome::Refuted,
                    _ => Outcome::Inconclusive,
                };
                EvidenceRow::new(vec![i as i64], quasiseq::verdict::Enclosure64::point(0.0), None, outcome)
            })
            .collect();
        let v = Verdict::aggregate(&rows);
        let any_refuted = rows.iter().any(|r| r.outcome == Outcome::Refuted);
        let any_open = rows.iter().any(|r| r.outcome == Outcome::Inconclusive);
        if any_refuted {
            prop_assert_eq!(v.outcome, Outcome::Refuted);
            prop_assert!(v.evidence.iter().any(|r| r.outcome == Outcome::Refuted));
        } else if any_open {
            prop_assert_eq!(v.outcome, Outcome::Inconclusive);
        } else {
            prop_assert_eq!(v.outcome, Outcome::Confirmed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn larger_truncation_refines(idx in 0usize..2, n in 0u64..12, extra in 1u64..20) {
        let spec = if idx == 0 { SequenceSpec::constant() } else { SequenceSpec::gevrey_int(1) };
        let b = BangSeries::new(WeightSequence::new(&spec).unwrap(), 40).unwrap();
        let k = n + 4;
        let coarse = b.derivative_sum(n, Some(k)).unwrap();
        let fine = b.derivative_sum(n, Some(k + extra)).unwrap();
        prop_assert!(fine.log().is_subset_of(coarse.log()));
    }

    #[test]
    fn small_f_is_scaled_big_f(idx in 0usize..2, n in 0u64..15) {
        let spec = if idx == 0 { SequenceSpec::constant() } else { SequenceSpec::gevrey_int(1) };
        let b = BangSeries::new(WeightSequence::new(&spec).unwrap(), 32).unwrap();
        let small = b.f_deriv_at_zero(n, None).unwrap();
        let big = b.big_deriv_at_zero(2 * n, None).unwrap();
        prop_assert_eq!(small.sign(), big.sign());
        let factor = LogReal::from_rational(b.seq().bits(), &Rational::from((factorial(n), factorial(2 * n)))).unwrap();
        let scaled = big.magnitude().unwrap().mul(&factor);
        prop_assert_eq!(small.magnitude().unwrap(), &scaled);
    }

    #[test]
    fn raising_radius_never_refutes(p in 2u32..4, a in 1u64..5, n_max in 1u64..15) {
        let lo = coeff_level_check(&TheoremInstance::with_integer_radius(SequenceSpec::gevrey_int(1), p, a, n_max).unwrap()).unwrap();
        let hi = coeff_level_check(&TheoremInstance::with_integer_radius(SequenceSpec::gevrey_int(1), p, a + 2, n_max + 3).unwrap()).unwrap();
        for (r_lo, r_hi) in lo.report.rows.iter().zip(&hi.report.rows) {
            prop_assert_eq!(&r_lo.index, &r_hi.index);
            if r_lo.outcome == Outcome::Confirmed {
                prop_assert_ne!(r_hi.outcome, Outcome::Refuted);
            }
        }
    }
}

#[test]
fn generating_function_identity_at_60() {
    let s = SeriesPoly::log_series(60);
    for k in 1..=8 {
        let direct = s.pow(k);
        let squared = s.pow_by_squaring(k);
        assert_eq!(direct, squared, "k = {k}");
        for n in 0..=60 {
            assert_eq!(direct.coeff(n as usize), &ckn(k, n).unwrap());
        }
    }
}

#[test]
fn b_series_is_half_the_squared_a_series() {
    let a = SeriesPoly::new(quasiseq::coefficients::alpha_a_signed(2, 40).unwrap());
    let half = ExactRational::new(1, 2).unwrap();
    let expected = a.mul(&a).scale(&half);
    let table = AlphaTable::new(2, 2, 40).unwrap();
    assert_eq!(table.series(2), &expected);
    let mags = quasiseq::coefficients::alpha_b(2, 2, 40).unwrap();
    for (j, m) in mags.iter().enumerate() {
        assert_eq!(m, &expected.coeff(j).abs());
    }
}
