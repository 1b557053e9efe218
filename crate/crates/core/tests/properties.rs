mod common;

use levelposet::algebra::{a_minus_b_power, ab_to_ae, ab_to_cd, delta, AbPolynomial, AbWord};
use levelposet::enumeration::{
    ab_index_interval, psi_truncation, verify_derivation_identity, verify_doubling_functoriality,
};
use levelposet::matrix::{
    bin_power, cyclic_classes, exponent, horizontal_double, is_indecomposable, period_index,
    vertical_double,
};
use levelposet::poset::{is_level_eulerian, is_level_half_eulerian};
use levelposet::shelling::{find_vertex_shelling_order, interval_facet_components};
use levelposet::{fixtures, BinaryMatrix, LevelPoset};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_matrix(max_n: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut m = BinaryMatrix::zeros(n);
            for (i, b) in bits.into_iter().enumerate() {
                m.set(i / n, i % n, b);
            }
            m
        })
    })
}

fn arb_indecomposable(max_n: usize) -> impl Strategy<Value = BinaryMatrix> {
    (any::<u64>(), 1..=max_n, 0.05f64..0.7).prop_map(|(seed, n, density)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_indecomposable(&mut rng, n, density)
    })
}

#[test]
fn parity_and_doubling_properties_hold() {
    let stats = common::suites::property_suite(0x5eed, 400).unwrap();
    assert!(stats.indecomposable_odd > 50, "{stats:?}");
    assert!(stats.primitive_even > 20, "{stats:?}");
    assert!(stats.half_eulerian > 20, "{stats:?}");
}

#[test]
fn oracle_equivalences_hold() {
    let stats = common::suites::oracle_suite(0x0dd, 150).unwrap();
    assert!(stats.intervals > 200, "{stats:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn powers_compose(m in arb_matrix(5), j in 1usize..8, k in 1usize..8) {
        let lhs = bin_power(&m, j + k);
        prop_assert_eq!(lhs, bin_power(&m, j).bool_mul(&bin_power(&m, k)));
    }

    #[test]
    fn period_and_index_are_minimal(m in arb_matrix(5)) {
        let p = period_index(&m);
        let (g, d) = (p.index, p.period);
        prop_assert!(g >= 1 && d >= 1);
        for t in g..g + 3 * d {
            prop_assert_eq!(bin_power(&m, t + d), bin_power(&m, t));
        }
        if g > 1 {
            prop_assert_ne!(bin_power(&m, g - 1 + d), bin_power(&m, g - 1));
        }
        for d2 in 1..d {
            prop_assert_ne!(bin_power(&m, g + d2), bin_power(&m, g));
        }
    }

    #[test]
    fn index_bounded_for_indecomposable(m in arb_indecomposable(6)) {
        let p = period_index(&m);
        let (n, d) = (m.order(), p.period);
        let (q, r) = (n / d, n % d);
        prop_assert!(p.index <= (q * q + 2 - 2 * q) * d + 2 * r, "n={} d={} γ={}", n, d, p.index);
    }

    #[test]
    fn exponent_bounded_for_primitive(m in arb_indecomposable(6)) {
        if let Some(e) = exponent(&m) {
            let n = m.order();
            prop_assert!(e <= n * n + 2 - 2 * n);
            prop_assert!(bin_power(&m, e).is_all_ones());
        }
    }

    #[test]
    fn cyclic_class_edges_advance(m in arb_indecomposable(6)) {
        let c = cyclic_classes(&m).unwrap();
        let d = c.period();
        prop_assert_eq!(d, period_index(&m).period);
        for (u, v) in m.edges() {
            prop_assert_eq!(c.class_of(v), (c.class_of(u) + 1) % d);
        }
    }

    #[test]
    fn vertical_doubles_are_half_eulerian(m in arb_matrix(3)) {
        prop_assert!(is_level_half_eulerian(&vertical_double(&m)));
    }

    #[test]
    fn derivation_identity_on_truncations(m in arb_matrix(3)) {
        let poset = LevelPoset::new(m);
        let series = psi_truncation(&poset, 6);
        prop_assert!(verify_derivation_identity(&poset, &series).passed);
    }

    #[test]
    fn doubling_commutes_with_series(m in arb_matrix(3)) {
        let r = verify_doubling_functoriality(&m, 6);
        prop_assert!(r.passed, "{:?}", r.failure);
    }
}

/// Degree-`n` kernel of `Δ` has dimension 1 and contains `(a-b)^n`. The
/// rank over `F_p` bounds the rational rank from below, and `(a-b)^n`
/// bounds it from above.
#[test]
fn delta_kernel_is_spanned_by_a_minus_b_powers() {
    const P: u64 = (1 << 61) - 1;
    for n in 1..=6 {
        assert!(delta(&a_minus_b_power(n)).is_zero());
        let words: Vec<AbWord> = (0..1u64 << n).map(|bits| AbWord::new(n, bits)).collect();
        let images: Vec<_> = words
            .iter()
            .map(|w| delta(&AbPolynomial::monomial(*w, 1)))
            .collect();
        let mut targets = std::collections::BTreeMap::new();
        for img in &images {
            for (w, _) in img.terms() {
                let next = targets.len();
                targets.entry(w.clone()).or_insert(next);
            }
        }
        let mut rows: Vec<Vec<u64>> = images
            .iter()
            .map(|img| {
                let mut row = vec![0u64; targets.len()];
                for (w, c) in img.terms() {
                    let c = i64::try_from(c).unwrap();
                    row[targets[w]] = c.rem_euclid(P as i64) as u64;
                }
                row
            })
            .collect();
        assert_eq!(rank_mod_p(&mut rows, P), words.len() - 1, "degree {n}");
    }
}

fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut base, mut e, mut acc) = (a, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = mul(*x, scale);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..cols {
                    let sub = mul(f, rows[rank][c]);
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Eulerian and half-Eulerian instances built from random doubles.
fn doubled_instances(seed: u64, count: usize) -> Vec<(BinaryMatrix, BinaryMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=2);
            let m = common::random_matrix(&mut rng, n, 0.6);
            let half = vertical_double(&m);
            (horizontal_double(&half), half)
        })
        .collect()
}

#[test]
fn eulerian_intervals_are_cd_expressible() {
    let mut cases = vec![fixtures::figure_one(), fixtures::butterfly()];
    cases.extend(doubled_instances(7, 12).into_iter().map(|(e, _)| e));
    for m in cases {
        assert!(is_level_eulerian(&m), "{m:?}");
        let poset = LevelPoset::new(m.clone());
        let cap = if m.order() > 4 { 6 } else { 8 };
        for rank in 1..=cap + 1 {
            for u in 0..m.order() {
                for v in 0..m.order() {
                    let Ok(iv) = poset.interval(u, v, rank) else {
                        continue;
                    };
                    let ab = ab_index_interval(&poset, &iv).unwrap();
                    assert!(ab_to_cd(&ab).is_ok(), "{m:?} {iv:?}");
                }
            }
        }
    }
}

#[test]
fn half_eulerian_intervals_lie_in_the_a_e_span() {
    let mut cases = vec![fixtures::three_by_three()];
    cases.extend(doubled_instances(11, 12).into_iter().map(|(_, h)| h));
    for m in cases {
        assert!(is_level_half_eulerian(&m), "{m:?}");
        let poset = LevelPoset::new(m.clone());
        for rank in 1..=8 {
            for u in 0..m.order() {
                for v in 0..m.order() {
                    let Ok(iv) = poset.interval(u, v, rank) else {
                        continue;
                    };
                    let ab = ab_index_interval(&poset, &iv).unwrap();
                    assert!(ab_to_ae(&ab).is_ok(), "{m:?} {iv:?} {ab}");
                }
            }
        }
    }
}

#[test]
fn non_eulerian_interval_fails_cd_rewriting() {
    let m = BinaryMatrix::ones(1);
    let poset = LevelPoset::new(m);
    let iv = poset.interval(0, 0, 3).unwrap();
    assert!(ab_to_cd(&ab_index_interval(&poset, &iv).unwrap()).is_err());
}

/// Shellable Eulerian level posets have connected facet graphs in every
/// interval within the walk bound.
#[test]
fn shellable_eulerian_intervals_are_connected() {
    let mut cases = vec![fixtures::figure_one(), fixtures::butterfly()];
    cases.extend(
        doubled_instances(3, 20)
            .into_iter()
            .map(|(e, _)| e)
            .filter(|e| e.order() <= 4 && is_indecomposable(e)),
    );
    let mut shellable = 0;
    for m in cases {
        let Some(_) = find_vertex_shelling_order(&m, None).unwrap() else {
            continue;
        };
        shellable += 1;
        let p = period_index(&m);
        let poset = LevelPoset::new(m.clone());
        for rank in 1..=p.index + p.period + 1 {
            for u in 0..m.order() {
                for v in 0..m.order() {
                    let Ok(iv) = poset.interval(u, v, rank) else {
                        continue;
                    };
                    assert_eq!(
                        interval_facet_components(&poset, &iv).unwrap(),
                        1,
                        "{m:?} {iv:?}"
                    );
                }
            }
        }
    }
    assert!(shellable >= 2);
}
