use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use simplexdet_core::construction::build_generalized;
use simplexdet_core::uepoly::{evaluate_dual, pow_rat, pue_from_full_distribution, pue_of};
use simplexdet_core::weights::dual_distribution;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn dual_form_matches_enumerated_dual() {
    let ps = [r(0, 1), r(1, 7), r(1, 4), r(1, 3), r(2, 5), r(1, 2)];
    for k in 2..=6u32 {
        for n in (1u64 << (k - 1)) + 1..(1u64 << (k - 1)) * 5 {
            let h = build_generalized(k, n).unwrap();
            let a = dual_distribution(&h).unwrap();
            let total: BigUint = a.iter().sum();
            assert_eq!(total, BigUint::one() << (n - k as u64), "k={k} n={n}");
            for p in &ps {
                let direct = pue_from_full_distribution(&a, p).unwrap();
                assert_eq!(direct, evaluate_dual(k, n, p).unwrap(), "k={k} n={n} p={p}");
            }
        }
    }
}

#[test]
fn named_dual_examples() {
    for (k, n, p) in [(4u32, 11u64, r(1, 3)), (6, 40, r(1, 4))] {
        let a = dual_distribution(&build_generalized(k, n).unwrap()).unwrap();
        assert_eq!(pue_from_full_distribution(&a, &p).unwrap(), evaluate_dual(k, n, &p).unwrap());
    }
}

#[test]
fn value_at_half() {
    for k in 2..=10u32 {
        for n in [(1u64 << (k - 1)) + 1, (1u64 << k) - 1, 3 << (k - 1)] {
            let v = pue_of(k, n).unwrap().evaluate(&r(1, 2)).unwrap();
            let expect = BigRational::new(BigInt::from((1u64 << k) - 1), BigInt::one() << n);
            assert_eq!(v, expect, "k={k} n={n}");
        }
    }
}

#[test]
fn primal_matches_term_sum() {
    let poly = pue_of(9, 320).unwrap();
    let p = r(3, 8);
    let by_terms = (0..poly.terms().len())
        .map(|i| poly.evaluate_term(i, &p).unwrap())
        .fold(BigRational::zero(), |a, b| a + b);
    assert_eq!(by_terms, poly.evaluate(&p).unwrap());
    let q = r(5, 8);
    let hand = r(2, 1) * pow_rat(&p, 128) * pow_rat(&q, 192)
        + r(504, 1) * pow_rat(&p, 160) * pow_rat(&q, 160)
        + r(4, 1) * pow_rat(&p, 192) * pow_rat(&q, 128)
        + pow_rat(&p, 256) * pow_rat(&q, 64);
    assert_eq!(hand, poly.evaluate(&p).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // A single term p^w (1-p)^(n-w) increases on [0, w/n].
    #[test]
    fn single_term_monotone_below_its_peak(w in 1u64..40, extra in 1u64..40, a in 1i64..1000, b in 1i64..1000) {
        let n = w + extra;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(lo < hi);
        let peak = BigRational::new(BigInt::from(w), BigInt::from(n));
        let x = &peak * r(lo, 1000);
        let y = &peak * r(hi, 1000);
        let term = |p: &BigRational| pow_rat(p, w) * pow_rat(&(BigRational::one() - p), n - w);
        prop_assert!(term(&x) < term(&y));
    }
}
