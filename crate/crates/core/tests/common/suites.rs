//! Seeded suites run both by the property tests and the acceptance target.

use super::*;
use levelposet::enumeration::{ab_index_interval, ab_index_via_chains, psi_truncation};
use levelposet::matrix::{horizontal_double, is_indecomposable, is_primitive, vertical_double};
use levelposet::poset::{flag_f_matrix, is_level_eulerian, is_level_half_eulerian, RankSubset};
use levelposet::shelling::{
    definition_check_bruteforce, is_vertex_shelling_order, surviving_walk_count,
};
use levelposet::LevelPoset;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Default)]
pub struct PropertyStats {
    pub matrices: usize,
    pub indecomposable_odd: usize,
    pub primitive_even: usize,
    pub half_eulerian: usize,
}

fn sample<R: Rng>(rng: &mut R) -> BinaryMatrix {
    let n = rng.gen_range(1..=5);
    let density = rng.gen_range(0.15..0.85);
    match rng.gen_range(0..4) {
        0 => random_matrix(rng, n, density),
        1 | 2 => random_indecomposable(rng, n, density),
        // vertical doubles keep the equivalence check from being vacuous
        _ => {
            let half = rng.gen_range(1..=2);
            vertical_double(&random_matrix(rng, half, density))
        }
    }
}

/// The four parity/doubling properties over `count` seeded matrices of
/// order at most 5.
pub fn property_suite(seed: u64, count: usize) -> Result<PropertyStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = PropertyStats::default();
    for _ in 0..count {
        let m = sample(&mut rng);
        let n = m.order();
        stats.matrices += 1;
        if !is_level_eulerian(&horizontal_double(&vertical_double(&m))) {
            return Err(format!("double-double of {m:?} is not Eulerian"));
        }
        if n % 2 == 1 && is_indecomposable(&m) {
            stats.indecomposable_odd += 1;
            if is_level_eulerian(&m) {
                return Err(format!("odd indecomposable {m:?} passed eulerian"));
            }
        }
        let half = is_level_half_eulerian(&m);
        if n % 2 == 0 && is_primitive(&m) {
            stats.primitive_even += 1;
            if half {
                return Err(format!("even primitive {m:?} passed half-eulerian"));
            }
        }
        if half {
            stats.half_eulerian += 1;
        }
        if half != is_level_eulerian(&horizontal_double(&m)) {
            return Err(format!("half-eulerian/double mismatch on {m:?}"));
        }
    }
    Ok(stats)
}

#[derive(Debug, Default)]
pub struct OracleStats {
    pub matrices: usize,
    pub flag_entries: usize,
    pub intervals: usize,
    pub walk_counts: usize,
    pub orders: usize,
}

/// The five exact oracle comparisons over `count` seeded matrices with
/// `n <= 4` and ranks up to 6.
pub fn oracle_suite(seed: u64, count: usize) -> Result<OracleStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = OracleStats::default();
    for _ in 0..count {
        let n = rng.gen_range(1..=4);
        let density = rng.gen_range(0.2..0.9);
        let m = if rng.gen_bool(0.5) {
            random_indecomposable(&mut rng, n, density)
        } else {
            random_matrix(&mut rng, n, density)
        };
        let poset = LevelPoset::new(m.clone());
        stats.matrices += 1;

        let inner = rng.gen_range(0..=5);
        let s = RankSubset::from_mask(inner, rng.gen_range(0..(1u64 << inner)));
        let f = flag_f_matrix(&poset, &s);
        for u in 0..n {
            for v in 0..n {
                let brute = count_chains(&m, u, v, inner + 1, &s.elements());
                if *f.get(u, v) != BigUint::from(brute) {
                    return Err(format!("flag f mismatch on {m:?}, S={:?}", s.elements()));
                }
                stats.flag_entries += 1;
            }
        }

        let series = psi_truncation(&poset, 5);
        for rank in 1..=6 {
            for u in 0..n {
                for v in 0..n {
                    let slice = series.entry(rank - 1, u, v);
                    let Ok(iv) = poset.interval(u, v, rank) else {
                        if !slice.is_zero() {
                            return Err(format!("nonzero series entry off the poset on {m:?}"));
                        }
                        continue;
                    };
                    let fast = ab_index_interval(&poset, &iv).map_err(|e| e.to_string())?;
                    let chains = ab_index_via_chains(&poset, &iv).map_err(|e| e.to_string())?;
                    if fast != chains {
                        return Err(format!("ab-index mismatch on {m:?} at {iv:?}"));
                    }
                    if *slice != fast {
                        return Err(format!("series slice mismatch on {m:?} at {iv:?}"));
                    }
                    stats.intervals += 1;
                }
            }
        }

        let order = random_order(&mut rng, n);
        for k in 1..=6 {
            for u in 0..n {
                for v in 0..n {
                    let dp = surviving_walk_count(&m, &order, u, v, k);
                    let brute = count_locally_minimal_walks(&m, &order, u, v, k);
                    if dp != BigUint::from(brute) {
                        return Err(format!("walk survival mismatch on {m:?}"));
                    }
                    stats.walk_counts += 1;
                }
            }
        }

        let k_max = rng.gen_range(1..=5);
        let verdict =
            is_vertex_shelling_order(&m, &order, Some(k_max)).map_err(|e| e.to_string())?;
        if verdict.shelling != definition_check_bruteforce(&m, &order, k_max) {
            return Err(format!("shelling verdict mismatch on {m:?} with {order:?}"));
        }
        stats.orders += 1;
    }
    Ok(stats)
}
