use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use simplexdet_core::classifier::{
    check_proper, classify, decide, derivative_polynomial, derivative_sign_at, is_dual, proper_shortcut,
    term_ratio, ugly_by_per, ugly_by_weight, Budget, ClassifyOptions, DecidedBy, Route, Tri,
};
use simplexdet_core::targets::Property;
use simplexdet_core::uepoly::{pow_rat, pue_of, UePolynomial};
use simplexdet_core::weights::{min_distance, weight_distribution};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn proper_on(k: u32, n: u64, skip: bool, route: Route) -> Tri {
    check_proper(k, n, skip, route, &Budget::default()).unwrap().value
}

fn single_copy(k: u32) -> std::ops::Range<u64> {
    (1u64 << (k - 1)) + 1..1u64 << k
}

#[test]
fn sparse_and_dense_routes_agree() {
    for k in 3..=9u32 {
        for n in single_copy(k) {
            for skip in [false, true] {
                let s = proper_on(k, n, skip, Route::Sparse);
                let d = proper_on(k, n, skip, Route::Dense);
                assert_ne!(d, Tri::Unknown, "k={k} n={n} skip={skip}");
                if s != Tri::Unknown {
                    assert_eq!(s, d, "k={k} n={n} skip={skip}");
                }
            }
        }
    }
}

#[test]
fn level_properties_agree_across_routes() {
    for k in 3..=7u32 {
        for n in (1u64 << (k - 1)) + 1..3 << (k - 1) {
            let dist = weight_distribution(k, n).unwrap();
            for prop in [Property::Good, Property::Satisfactory] {
                let s = decide(&dist, prop, false, Route::Sparse, &Budget::default()).value;
                let d = decide(&dist, prop, false, Route::Dense, &Budget::default()).value;
                assert_eq!(s, d, "k={k} n={n} {prop:?}");
            }
        }
    }
}

#[test]
fn shortcuts_are_sound() {
    for k in 3..=10u32 {
        for n in (1u64 << (k - 1)) + 1..3 << (k - 1) {
            if proper_shortcut(k, n).unwrap().is_some() {
                assert_eq!(proper_on(k, n, false, Route::Dense), Tri::Yes, "k={k} n={n}");
            }
        }
    }
}

#[test]
fn per_criterion_implies_not_satisfactory() {
    let mut fired = 0;
    for k in 3..=10u32 {
        for n in single_copy(k) {
            if ugly_by_per(k, n).unwrap() {
                fired += 1;
                let dist = weight_distribution(k, n).unwrap();
                let sat = decide(&dist, Property::Satisfactory, false, Route::Dense, &Budget::default());
                assert_eq!(sat.value, Tri::No, "k={k} n={n}");
            }
        }
    }
    assert!(fired > 0);
}

#[test]
fn lifting_preserves_properness() {
    for k in 3..=8u32 {
        let half = 1u64 << (k - 1);
        for n in half + 1..3 * half {
            if proper_on(k, n, true, Route::Dense) == Tri::Yes {
                for u in 1..=3 {
                    assert_eq!(proper_on(k, n + half * u, false, Route::Dense), Tri::Yes, "k={k} n={n} u={u}");
                }
            }
        }
    }
}

#[test]
fn dual_satisfactory_iff_primal_satisfactory() {
    for k in 3..=6u32 {
        for n in (1u64 << (k - 1)) + 1..(1u64 << (k - 1)) * 5 {
            let dist = weight_distribution(k, n).unwrap();
            let primal = decide(&dist, Property::Satisfactory, false, Route::Dense, &Budget::default());
            let dual = is_dual(k, n, Property::Satisfactory).unwrap();
            assert_eq!(primal.value, Tri::from_bool(dual), "k={k} n={n}");
        }
    }
}

#[test]
fn duals_are_proper_for_small_k() {
    for k in 3..=7u32 {
        for n in single_copy(k) {
            assert!(is_dual(k, n, Property::Proper).unwrap(), "k={k} n={n}");
        }
    }
}

/// `dP/dp` summed term by term.
fn derivative_by_terms(poly: &UePolynomial, p: &BigRational) -> BigRational {
    let q = BigRational::one() - p;
    let n = poly.n;
    poly.terms()
        .iter()
        .map(|(c, w)| {
            let c = BigRational::from_integer(BigInt::from(c.clone()));
            let lin = BigRational::from_integer(BigInt::from(*w)) - p * BigRational::from_integer(BigInt::from(n));
            c * pow_rat(p, w - 1) * pow_rat(&q, n - w - 1) * lin
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

#[test]
fn derivative_factorisation_identity() {
    for (k, n) in [(5u32, 27u64), (6, 40), (9, 320), (9, 308), (7, 100)] {
        let poly = pue_of(k, n).unwrap();
        let dq = derivative_polynomial(&poly).unwrap();
        let qpoly = simplexdet_core::dense::IntPoly::new(dq.coeffs.clone());
        for p in [r(1, 9), r(1, 3), r(2, 5), r(49, 100)] {
            let factor = pow_rat(&p, dq.d - 1) * pow_rat(&(BigRational::one() - &p), n - dq.max_weight - 1);
            assert_eq!(qpoly.eval(&p) * factor, derivative_by_terms(&poly, &p), "k={k} n={n} p={p}");
        }
    }
}

#[test]
fn single_term_derivative() {
    let poly = UePolynomial::from_terms(3, 7, vec![(BigUint::from(7u32), 4)]).unwrap();
    let q = derivative_polynomial(&poly).unwrap();
    assert_eq!(q.coeffs, vec![BigInt::from(28), BigInt::from(-49)]);
    let q = derivative_polynomial(&pue_of(9, 320).unwrap()).unwrap();
    assert_eq!(q.coeffs[0], BigInt::from(256));
}

#[test]
fn derivative_sign_matches_finite_difference() {
    let poly = pue_of(9, 320).unwrap();
    let q = derivative_polynomial(&poly).unwrap();
    let eps = r(1, 1 << 20);
    for p in [r(1, 2) - &eps * r(4, 1), r(1, 4), r(2, 5), r(21, 50)] {
        let diff = poly.evaluate(&(&p + &eps)).unwrap() - poly.evaluate(&(&p - &eps)).unwrap();
        let fd = diff.cmp(&BigRational::zero());
        assert_eq!(derivative_sign_at(&q, &p), fd, "p={p}");
    }
    // Not proper: the derivative takes both signs on (0, 1/2).
    let signs: Vec<Ordering> = (1..50).map(|i| derivative_sign_at(&q, &r(i, 100))).collect();
    assert!(signs.contains(&Ordering::Less) && signs.contains(&Ordering::Greater));
}

#[test]
fn named_properness_cases() {
    assert_eq!(proper_on(9, 307, false, Route::Dense), Tri::Yes);
    assert_eq!(proper_on(9, 308, false, Route::Dense), Tri::No);
    assert_eq!(proper_on(9, 384, false, Route::Dense), Tri::Yes);
    assert_eq!(proper_on(9, 320, false, Route::Dense), Tri::No);
    assert_eq!(proper_on(9, 320, false, Route::Sparse), Tri::No);
}

#[test]
fn k12_second_block_gap_is_not_proper() {
    // The ends of [5353, 5398] fail and their outer neighbours pass.
    for (n, expect) in [(5352u64, Tri::Yes), (5353, Tri::No), (5398, Tri::No), (5399, Tri::Yes)] {
        assert_eq!(proper_on(12, n, false, Route::Dense), expect, "n={n}");
    }
}

#[test]
fn second_weight_refines_criterion() {
    let (k, n) = (16u32, 58369u64);
    let d = min_distance(k, n).unwrap();
    assert_eq!(d, (1 << 15) - (1 << 12));
    assert!(!ugly_by_per(k, n).unwrap());
    assert!(!ugly_by_weight(k, n, d).unwrap());
    assert!(ugly_by_weight(k, n, d + 1).unwrap());
    let low = term_ratio(k, n, d, false, 128).unwrap().mid_f64();
    let next = term_ratio(k, n, d + 1, false, 128).unwrap().mid_f64();
    assert!((low - 0.989).abs() < 5e-4, "{low}");
    assert!((next - 1.9106).abs() < 5e-5, "{next}");
    let v = classify(k, n, false, &ClassifyOptions::default(), None).unwrap();
    assert_eq!((v.satisfactory, v.decided_by, v.ugly_witness_weight), (Tri::No, DecidedBy::WeightRefinement, Some(d + 1)));
}

#[test]
fn half_weight_single_term_never_fires() {
    // A lone codeword of weight n/2 contributes at most 2^-n < 2^(k-n).
    for k in 3..=8u32 {
        let n = 1u64 << k;
        let dist = weight_distribution(k, n).unwrap();
        if dist.count(n / 2) == BigUint::one() {
            assert!(!ugly_by_weight(k, n, n / 2).unwrap(), "k={k}");
        }
    }
}

#[test]
fn classify_cascade_and_chain() {
    let opts = ClassifyOptions::default();
    assert_eq!(classify(9, 384, false, &opts, None).unwrap().decided_by, DecidedBy::PowerGapEnd);
    let v = classify(9, 320, false, &opts, None).unwrap();
    assert_eq!((v.decided_by, v.satisfactory), (DecidedBy::MinWeightTerm, Tri::No));
    for k in 4..=9u32 {
        for n in single_copy(k) {
            let v = classify(k, n, false, &opts, None).unwrap();
            v.check_chain().unwrap();
            assert_ne!(v.proper, Tri::Unknown, "k={k} n={n}");
        }
    }
}
