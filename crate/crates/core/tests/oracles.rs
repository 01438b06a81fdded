use rug::Rational;

use quasiseq::bang::{BangSeries, Sign};
use quasiseq::coefficients::{
    alpha_diag_derivative, ckn, ckn_bruteforce, verify_alpha_a, verify_ckn_bound,
};
use quasiseq::sequence::{
    carleman_partial_sums, check_derivation_closed, check_inclusion, check_log_convex,
    power_substitute, Variant,
};
use quasiseq::substitution::{
    coeff_level_check, default_samples, final_bound_assembly, transform_report, TheoremInstance,
};
use quasiseq::{ExactRational, Finding, LogReal, Outcome, SequenceSpec, WeightSequence};

fn seq(spec: SequenceSpec) -> WeightSequence {
    WeightSequence::new(&spec).unwrap()
}

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d).unwrap()
}

#[test]
fn composition_enumeration_matches_convolution() {
    for k in 1..=6 {
        for n in 0..=18 {
            assert_eq!(
                ckn(k, n).unwrap(),
                ckn_bruteforce(k, n).unwrap(),
                "k={k} n={n}"
            );
        }
    }
}

#[test]
fn c_values_from_independent_sum() {
    // c_{2,n} = Σ_{i=1}^{n-1} 1/(i(n-i)) = 2 H_{n-1} / n.
    for n in 2..40u64 {
        let h: Rational = (1..n).map(|i| Rational::from((1, i))).sum();
        let expect = h * Rational::from((2, n));
        assert_eq!(ckn(2, n).unwrap().as_rational(), &expect, "n={n}");
    }
}

#[test]
fn small_weight_values() {
    let g = seq(SequenceSpec::gevrey_int(1));
    assert!(g.log_m(3).unwrap().contains_rational(&Rational::from(6)));
    assert!(g
        .log_mprime(4)
        .unwrap()
        .contains_rational(&Rational::from(576)));
    assert!(g.ratio_m(2).unwrap().contains_rational(&Rational::from(9)));
    let c = seq(SequenceSpec::constant());
    assert!(c.log_m(17).unwrap().is_exact());
    assert!(c
        .log_mprime(4)
        .unwrap()
        .contains_rational(&Rational::from(24)));
    assert!(c.ratio_m(3).unwrap().contains_rational(&Rational::from(4)));
    let l = seq(SequenceSpec::iterated_log(1));
    assert!(l.log_m(0).unwrap().is_exact());
}

#[test]
fn substitution_values() {
    let ps = power_substitute(&SequenceSpec::gevrey_int(1), 2).unwrap();
    for n in 0..8u64 {
        let fact = quasiseq::exact::factorial(2 * n);
        assert!(ps
            .log_m(n)
            .unwrap()
            .contains_rational(&Rational::from(fact)));
    }
    assert!(ps
        .log_mprime(2)
        .unwrap()
        .contains_rational(&Rational::from(144)));
    assert!(ps.log_mprime(0).unwrap().is_exact());
}

#[test]
fn criteria_examples() {
    assert!(
        check_log_convex(&seq(SequenceSpec::constant()), Variant::M, 100)
            .unwrap()
            .is_confirmed()
    );
    assert!(
        check_log_convex(&seq(SequenceSpec::gevrey_int(1)), Variant::Mprime, 50)
            .unwrap()
            .is_confirmed()
    );
    let shifted = check_log_convex(&seq(SequenceSpec::shifted_loglog()), Variant::M, 50).unwrap();
    assert_eq!(shifted.rows.len(), 49);

    let c = carleman_partial_sums(&seq(SequenceSpec::constant()), 100).unwrap();
    assert_eq!(c.report.finding, Some(Finding::Divergent));
    let c = carleman_partial_sums(&seq(SequenceSpec::iterated_log(2)), 100).unwrap();
    assert_eq!(c.report.finding, Some(Finding::Divergent));

    let d = check_derivation_closed(&seq(SequenceSpec::constant()), 50).unwrap();
    assert_eq!(d.report.finding, Some(Finding::Bounded));
    assert!(d.sup.is_exact());
    let d = check_derivation_closed(&seq(SequenceSpec::iterated_log(1)), 50).unwrap();
    assert_eq!(d.report.finding, Some(Finding::Bounded));

    let g = seq(SequenceSpec::gevrey_int(1));
    let same = check_inclusion(&g, &g, 40).unwrap();
    assert_eq!(same.report.finding, Some(Finding::Bounded));
    let unb = check_inclusion(&g, &seq(SequenceSpec::constant()), 40).unwrap();
    assert_eq!(unb.report.finding, Some(Finding::Unbounded));
    assert!(!unb.report.verdict.evidence.is_empty());
}

#[test]
fn lemma_sweep_and_a_bounds() {
    let s = verify_ckn_bound(6, 20).unwrap();
    assert!(s.lemma.is_confirmed() && s.cauchy.is_confirmed());
    for p in [2, 3, 5, 7] {
        assert!(verify_alpha_a(p, 60).unwrap().is_confirmed());
    }
}

#[test]
fn alpha_bound_example() {
    let d = alpha_diag_derivative(2, 1, 2, &ExactRational::one()).unwrap();
    assert_eq!(d.value.abs(), q(1, 4));
    assert_eq!(d.bound.unwrap().outcome, Outcome::Confirmed);
    assert!(alpha_diag_derivative(2, 3, 2, &q(1, 9))
        .unwrap()
        .value
        .is_zero());
}

#[test]
fn bang_examples() {
    let b = BangSeries::new(seq(SequenceSpec::constant()), 20).unwrap();
    assert!(b
        .deriv_term(0, 1)
        .unwrap()
        .contains_rational(&Rational::from(2)));
    let m5 = seq(SequenceSpec::constant()).log_mprime(5).unwrap();
    assert_eq!(b.deriv_term(5, 5).unwrap(), m5);
    assert!(b.big_deriv_at_zero(3, None).unwrap().is_zero());
    assert_eq!(b.big_deriv_at_zero(2, None).unwrap().sign(), Sign::Negative);
    assert_eq!(b.f_deriv_at_zero(0, None).unwrap().sign(), Sign::Positive);
    assert_eq!(b.f_deriv_at_zero(3, None).unwrap().sign(), Sign::Negative);
    let s1 = b.derivative_sum(1, None).unwrap();
    assert_eq!(
        s1.le(&LogReal::from_u64(b.seq().bits(), 4).unwrap()),
        Outcome::Confirmed
    );
    assert!(b.verify_membership(10).unwrap().is_confirmed());
    assert!(b.sharpness_evidence(2, 8).unwrap().is_confirmed());
    assert!(b.sharpness_evidence(3, 8).is_err());
}

#[test]
fn bang_eval_at_zero_agrees() {
    let b = BangSeries::new(seq(SequenceSpec::gevrey_int(1)), 10).unwrap();
    let at0 = b.eval(&ExactRational::zero(), 30).unwrap();
    let s0 = b.derivative_sum(0, Some(30)).unwrap().to_linear().unwrap();
    assert_eq!(at0.le(&s0), Outcome::Inconclusive);
    let elsewhere = b.eval(&q(1, 3), 30).unwrap();
    assert_ne!(elsewhere.le(&s0), Outcome::Refuted);
    assert_ne!(s0.neg().le(&elsewhere), Outcome::Refuted);
}

#[test]
fn substitution_instances() {
    let inst =
        TheoremInstance::with_integer_radius(SequenceSpec::shifted_loglog(), 3, 1, 12).unwrap();
    assert!(coeff_level_check(&inst).unwrap().report.is_confirmed());
    let inst = TheoremInstance::with_integer_radius(SequenceSpec::gevrey_int(1), 3, 2, 5).unwrap();
    assert!(final_bound_assembly(&inst, &default_samples(3))
        .unwrap()
        .is_confirmed());
    let tbl = SequenceSpec::table(vec![q(0, 1), q(1, 1), q(3, 1), q(6, 1), q(10, 1)]);
    let r = transform_report(&tbl, 2, 2).unwrap();
    assert_eq!(r.outcome(), Outcome::Inconclusive);
}
