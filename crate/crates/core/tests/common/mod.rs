//! Random instances and brute-force oracles shared by the integration
//! tests. Nothing here calls the power tables of the library; reachability
//! is recomputed from single edges.
#![allow(dead_code)]

use levelposet::algebra::AbPolynomial;
use levelposet::shelling::VertexOrder;
use levelposet::BinaryMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub mod suites;

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, density: f64) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// A random matrix with a Hamiltonian cycle added, so it is indecomposable.
pub fn random_indecomposable<R: Rng>(rng: &mut R, n: usize, density: f64) -> BinaryMatrix {
    let mut m = random_matrix(rng, n, density);
    let mut cycle: Vec<usize> = (0..n).collect();
    cycle.shuffle(rng);
    for i in 0..n {
        m.set(cycle[i], cycle[(i + 1) % n], true);
    }
    m
}

pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> VertexOrder {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    VertexOrder::new(seq).unwrap()
}

/// `reach[k][u][v]`: a walk of length exactly `k` from `u` to `v`.
pub fn naive_reach(m: &BinaryMatrix, k_max: usize) -> Vec<Vec<Vec<bool>>> {
    let n = m.order();
    let mut reach = vec![vec![vec![false; n]; n]];
    for u in 0..n {
        reach[0][u][u] = true;
    }
    for k in 1..=k_max {
        let mut next = vec![vec![false; n]; n];
        for u in 0..n {
            for w in 0..n {
                if reach[k - 1][u][w] {
                    for v in 0..n {
                        if m.get(w, v) {
                            next[u][v] = true;
                        }
                    }
                }
            }
        }
        reach.push(next);
    }
    reach
}

/// Every walk of length `k` from `u`, as vertex sequences.
pub fn walks_from(m: &BinaryMatrix, u: usize, k: usize) -> Vec<Vec<usize>> {
    let n = m.order();
    let mut out = Vec::new();
    let mut stack = vec![vec![u]];
    while let Some(w) = stack.pop() {
        if w.len() == k + 1 {
            out.push(w);
            continue;
        }
        let last = *w.last().unwrap();
        for x in 0..n {
            if m.get(last, x) {
                let mut w2 = w.clone();
                w2.push(x);
                stack.push(w2);
            }
        }
    }
    out
}

/// Chains of `[(u,0),(v,m+1)]` using exactly the ranks in `ranks`
/// (sorted, inside `1..=m`), by enumerating vertex tuples.
pub fn count_chains(m: &BinaryMatrix, u: usize, v: usize, top: usize, ranks: &[usize]) -> u64 {
    let n = m.order();
    let reach = naive_reach(m, top);
    if !reach[top][u][v] {
        return 0;
    }
    let mut total = 0u64;
    let mut tuple = vec![0usize; ranks.len()];
    loop {
        let mut prev = (u, 0usize);
        let mut ok = true;
        for (i, &r) in ranks.iter().enumerate() {
            let cur = (tuple[i], r);
            if !reach[cur.1 - prev.1][prev.0][cur.0] {
                ok = false;
                break;
            }
            prev = cur;
        }
        if ok && reach[top - prev.1][prev.0][v] {
            total += 1;
        }
        // next tuple in base n
        let mut i = 0;
        loop {
            if i == tuple.len() {
                return total;
            }
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// Walks of length `k` from `u` to `v` whose every internal vertex is the
/// least vertex completing its triple.
pub fn count_locally_minimal_walks(
    m: &BinaryMatrix,
    order: &VertexOrder,
    u: usize,
    v: usize,
    k: usize,
) -> u64 {
    let n = m.order();
    walks_from(m, u, k)
        .into_iter()
        .filter(|w| w[k] == v)
        .filter(|w| {
            (1..k).all(|j| {
                (0..n).all(|x| !(order.less(x, w[j]) && m.get(w[j - 1], x) && m.get(x, w[j + 1])))
            })
        })
        .count() as u64
}

/// ab-index straight from the flag f-vector: `Σ_S Σ_{T ⊆ S} (-1)^|S-T| f_T u_S`.
pub fn ab_index_oracle(m: &BinaryMatrix, u: usize, v: usize, top: usize) -> AbPolynomial {
    let inner = top - 1;
    let mut out = AbPolynomial::zero();
    for s in 0u64..(1 << inner) {
        let mut h: i64 = 0;
        let mut t = s;
        loop {
            let ranks: Vec<usize> = (0..inner)
                .filter(|i| t >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            let sign = if (s ^ t).count_ones() % 2 == 0 { 1 } else { -1 };
            h += sign * count_chains(m, u, v, top, &ranks) as i64;
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        let word: String = (0..inner)
            .map(|i| if s >> i & 1 == 1 { 'b' } else { 'a' })
            .collect();
        if h != 0 {
            out += &AbPolynomial::parse(&format!("{h}{word}")).unwrap();
        }
    }
    out
}
