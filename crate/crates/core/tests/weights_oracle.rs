use num_bigint::BigUint;
use simplexdet_core::construction::{build_dkst, build_generalized, build_hk_prefix, CodeParams};
use simplexdet_core::weights::{
    a_d, alpha_vector, brute_force_distribution, check_row_ordering, min_distance, row_weights,
    weight_distribution,
};

#[test]
fn closed_form_matches_enumeration_single_copy() {
    for k in 2..=8u32 {
        for n in (1u64 << (k - 1)) + 1..(1u64 << k) {
            let g = build_hk_prefix(k, n).unwrap();
            let brute = brute_force_distribution(&g).unwrap();
            let closed = weight_distribution(k, n).unwrap();
            assert_eq!(brute, closed, "k={k} n={n}");
        }
    }
}

#[test]
fn closed_form_matches_enumeration_with_copies() {
    for k in 2..=6u32 {
        for n in (1u64 << (k - 1))..(1u64 << (k - 1)) * 5 {
            let g = build_generalized(k, n).unwrap();
            let brute = brute_force_distribution(&g).unwrap();
            assert_eq!(brute, weight_distribution(k, n).unwrap(), "k={k} n={n}");
        }
    }
}

#[test]
fn row_weights_match_matrix_rows() {
    for k in 3..=7u32 {
        for n in (1u64 << (k - 1))..(1u64 << (k - 1)) * 3 {
            let g = build_generalized(k, n).unwrap();
            let direct: Vec<u64> = (0..k as usize).map(|i| g.row_weight(i)).collect();
            assert_eq!(direct, row_weights(k, n).unwrap().w, "k={k} n={n}");
        }
    }
}

#[test]
fn minimum_distance_formulas_match_distribution() {
    for k in 2..=12u32 {
        for n in (1u64 << (k - 1))..(1u64 << (k - 1)) * 4 {
            let d = weight_distribution(k, n).unwrap();
            let dmin = d.min_weight().unwrap();
            assert_eq!(min_distance(k, n).unwrap(), dmin, "k={k} n={n}");
            assert_eq!(a_d(k, n).unwrap(), d.count(dmin), "k={k} n={n}");
            assert_eq!(d.total(), (BigUint::from(1u32) << k) - 1u32);
            let p = CodeParams::new(k, n).unwrap();
            if let Some(m) = p.m {
                assert!(a_d(k, n).unwrap() >= BigUint::from(1u32) << m);
                check_row_ordering(k, n).unwrap();
            }
        }
    }
}

#[test]
fn alpha_is_last_column() {
    for k in 3..=9u32 {
        for n in (1u64 << (k - 1)) + 1..(1u64 << k) {
            let last = *build_hk_prefix(k, n).unwrap().columns().unwrap().last().unwrap();
            let a = alpha_vector(k, n).unwrap();
            let word = a.alpha.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            assert_eq!(word, last, "k={k} n={n}");
        }
    }
}

#[test]
fn descending_columns_generate_same_distribution() {
    for n in 9..16 {
        let a = brute_force_distribution(&build_hk_prefix(4, n).unwrap()).unwrap();
        let b = brute_force_distribution(&build_dkst(4, n).unwrap()).unwrap();
        assert_eq!(a, b, "n={n}");
    }
    for n in 65..128 {
        let a = brute_force_distribution(&build_hk_prefix(7, n).unwrap()).unwrap();
        let b = brute_force_distribution(&build_dkst(7, n).unwrap()).unwrap();
        assert_eq!(a, b, "n={n}");
    }
}

#[test]
fn power_gap_end_distribution() {
    // n = 2^k - 2^(k-m-1) has minimum distance n/2 and 2^(m+1) - 1 words of weight 2^(k-1).
    for k in 3..=10u32 {
        for m in 1..k - 1 {
            let n = (1u64 << k) - (1u64 << (k - m - 1));
            let d = weight_distribution(k, n).unwrap();
            let map = d.to_u64_map().unwrap();
            let mut expect = std::collections::BTreeMap::new();
            expect.insert(n / 2, (1u64 << k) - (1u64 << (m + 1)));
            expect.insert(1u64 << (k - 1), (1u64 << (m + 1)) - 1);
            assert_eq!(map, expect, "k={k} m={m}");
        }
    }
}

#[test]
fn band_centre_table() {
    // Weight distribution at the centre of each band, as a closed table.
    for k in 4..=14u32 {
        for m in 1..=k - 3 {
            let n = (1u64 << k) - 3 * (1u64 << (k - m - 2));
            let map = weight_distribution(k, n).unwrap().to_u64_map().unwrap();
            let mut expect = std::collections::BTreeMap::new();
            expect.insert((1u64 << (k - 1)) - (1u64 << (k - m - 1)), 1u64 << m);
            expect.insert((1u64 << (k - 1)) - 3 * (1u64 << (k - m - 3)), (1u64 << k) - (1u64 << (m + 2)));
            expect.insert((1u64 << (k - 1)) - (1u64 << (k - m - 2)), 1u64 << (m + 1));
            expect.insert(1u64 << (k - 1), (1u64 << m) - 1);
            expect.retain(|_, c| *c > 0);
            assert_eq!(map, expect, "k={k} m={m}");
        }
    }
}

#[test]
fn large_parameter_examples() {
    assert_eq!(min_distance(16, 58369).unwrap(), 28672);
    assert_eq!(a_d(16, 58369).unwrap(), BigUint::from(8u32));
    let d = weight_distribution(16, 58369).unwrap();
    assert_eq!(d.count(28673), BigUint::from(16u32));
    for (n, ad) in [(66545u64, 62u32), (66546, 62), (66560, 62), (66561, 30), (66592, 30), (66593, 30)] {
        assert_eq!(a_d(17, n).unwrap(), BigUint::from(ad), "n={n}");
    }
}
