//! Vertex shelling orders.
//!
//! Reducing the powers of the walk matrix `Z` modulo the ideal of
//! non-locally-minimal walks leaves, in each entry, exactly the walks whose
//! every internal vertex is the least vertex (in the chosen order) that
//! connects its two neighbours. Counting those survivors is a transfer-matrix
//! DP over ordered pairs `(previous, current)`.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{self, BinaryMatrix};
use crate::poset::{IntervalRef, LevelPoset};

/// A linear order on the vertices: `sequence[0]` is the least vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexOrder {
    sequence: Vec<usize>,
    #[serde(skip)]
    position: Vec<usize>,
}

impl VertexOrder {
    pub fn new(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (pos, &v) in sequence.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrder(format!(
                    "vertex {} out of range",
                    v + 1
                )));
            }
            if position[v] != usize::MAX {
                return Err(Error::InvalidOrder(format!("vertex {} repeated", v + 1)));
            }
            position[v] = pos;
        }
        Ok(VertexOrder { sequence, position })
    }

    /// The order `1 < 2 < ... < n`.
    pub fn natural(n: usize) -> Self {
        VertexOrder::new((0..n).collect()).unwrap()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }

    fn rank(&self, v: usize) -> usize {
        self.position[v]
    }
}

/// For each pair `(p, x)`, the least `w` with `p → w → x`.
fn least_midpoints(m: &BinaryMatrix, order: &VertexOrder) -> Vec<Option<usize>> {
    let n = m.order();
    let mut table = vec![None; n * n];
    for p in 0..n {
        for x in 0..n {
            table[p * n + x] = m
                .successors(p)
                .filter(|&w| m.get(w, x))
                .min_by_key(|&w| order.rank(w));
        }
    }
    table
}

/// Surviving-walk counts from a fixed source for lengths `1..=k_max`.
///
/// `counts[k-1][(p, c)]` is the number of surviving walks of length `k`
/// whose last edge is `p → c`.
#[derive(Clone, Debug)]
pub struct SurvivalDp {
    n: usize,
    source: usize,
    mids: Vec<Option<usize>>,
    counts: Vec<Vec<BigUint>>,
}

impl SurvivalDp {
    pub fn new(m: &BinaryMatrix, order: &VertexOrder, source: usize, k_max: usize) -> Self {
        let n = m.order();
        let mids = least_midpoints(m, order);
        let mut counts = Vec::with_capacity(k_max);
        if k_max >= 1 {
            let mut first = vec![BigUint::zero(); n * n];
            for w in m.successors(source) {
                first[source * n + w] = BigUint::one();
            }
            counts.push(first);
        }
        for _ in 1..k_max {
            let prev = counts.last().unwrap();
            let mut next = vec![BigUint::zero(); n * n];
            for p in 0..n {
                for c in 0..n {
                    let cnt = &prev[p * n + c];
                    if cnt.is_zero() {
                        continue;
                    }
                    for x in m.successors(c) {
                        if mids[p * n + x] == Some(c) {
                            next[c * n + x] += cnt;
                        }
                    }
                }
            }
            counts.push(next);
        }
        SurvivalDp {
            n,
            source,
            mids,
            counts,
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn count(&self, target: usize, k: usize) -> BigUint {
        let n = self.n;
        (0..n).map(|p| &self.counts[k - 1][p * n + target]).sum()
    }

    /// The unique surviving walk when exactly one exists.
    pub fn witness(&self, target: usize, k: usize) -> Option<Vec<usize>> {
        if !self.count(target, k).is_one() {
            return None;
        }
        let n = self.n;
        let mut prev = (0..n).find(|&p| !self.counts[k - 1][p * n + target].is_zero())?;
        let mut cur = target;
        let mut walk = vec![cur, prev];
        for step in (1..k).rev() {
            let pp = (0..n).find(|&pp| {
                !self.counts[step - 1][pp * n + prev].is_zero()
                    && self.mids[pp * n + cur] == Some(prev)
            })?;
            walk.push(pp);
            cur = prev;
            prev = pp;
        }
        walk.reverse();
        Some(walk)
    }
}

/// Number of length-`k` walks `u → v` that survive the reduction.
pub fn surviving_walk_count(
    m: &BinaryMatrix,
    order: &VertexOrder,
    u: usize,
    v: usize,
    k: usize,
) -> BigUint {
    assert!(k >= 1, "walk length must be positive");
    SurvivalDp::new(m, order, u, k).count(v, k)
}

pub fn surviving_walk_witness(
    m: &BinaryMatrix,
    order: &VertexOrder,
    u: usize,
    v: usize,
    k: usize,
) -> Option<Vec<usize>> {
    SurvivalDp::new(m, order, u, k).witness(v, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellingViolation {
    pub from: usize,
    pub to: usize,
    pub k: usize,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellingVerdict {
    pub shelling: bool,
    pub k_max: usize,
    pub violation: Option<ShellingViolation>,
}

/// `γ + d` for indecomposable matrices; decomposable ones need an explicit
/// bound.
pub fn default_walk_bound(m: &BinaryMatrix) -> Result<usize> {
    if !matrix::is_indecomposable(m) {
        return Err(Error::DecomposableNeedsBound);
    }
    let p = matrix::period_index(m);
    Ok(p.index + p.period)
}

/// Every entry of every reduced `Z^k`, `k <= k_max`, has at most one
/// surviving walk.
pub fn is_vertex_shelling_order(
    m: &BinaryMatrix,
    order: &VertexOrder,
    k_max: Option<usize>,
) -> Result<ShellingVerdict> {
    check_order_len(m, order)?;
    let k_max = match k_max {
        Some(k) => k,
        None => default_walk_bound(m)?,
    };
    Ok(check_with_bound(m, order, k_max))
}

fn check_order_len(m: &BinaryMatrix, order: &VertexOrder) -> Result<()> {
    if order.len() != m.order() {
        return Err(Error::InvalidOrder(format!(
            "order lists {} vertices, matrix has {}",
            order.len(),
            m.order()
        )));
    }
    Ok(())
}

fn check_with_bound(m: &BinaryMatrix, order: &VertexOrder, k_max: usize) -> ShellingVerdict {
    let n = m.order();
    let dps: Vec<SurvivalDp> = (0..n)
        .map(|u| SurvivalDp::new(m, order, u, k_max))
        .collect();
    for k in 1..=k_max {
        for (u, dp) in dps.iter().enumerate() {
            for v in 0..n {
                let c = dp.count(v, k);
                if c > BigUint::one() {
                    return ShellingVerdict {
                        shelling: false,
                        k_max,
                        violation: Some(ShellingViolation {
                            from: u,
                            to: v,
                            k,
                            count: c.to_string(),
                        }),
                    };
                }
            }
        }
    }
    ShellingVerdict {
        shelling: true,
        k_max,
        violation: None,
    }
}

fn all_walks(m: &BinaryMatrix, u: usize, k: usize) -> Vec<Vec<usize>> {
    let mut walks = vec![vec![u]];
    for _ in 0..k {
        walks = walks
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                m.successors(last)
                    .map(|x| {
                        let mut w2 = w.clone();
                        w2.push(x);
                        w2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    walks
}

/// The pairs-of-walks condition checked literally: whenever two walks of
/// equal length share endpoints and the second starts with a smaller first
/// step, the first walk has an internal vertex that can be replaced by a
/// smaller one. Exponential; meant for small instances.
pub fn definition_check_bruteforce(m: &BinaryMatrix, order: &VertexOrder, k_max: usize) -> bool {
    let n = m.order();
    let has_smaller_midpoint = |w: &[usize]| {
        (1..w.len() - 1).any(|j| {
            (0..n).any(|x| order.less(x, w[j]) && m.get(w[j - 1], x) && m.get(x, w[j + 1]))
        })
    };
    for k in 2..=k_max {
        for u in 0..n {
            let mut by_target: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
            for w in all_walks(m, u, k) {
                by_target.entry(w[k]).or_default().push(w);
            }
            for walks in by_target.values() {
                for w in walks {
                    let dominated = walks.iter().any(|w2| order.less(w2[1], w[1]));
                    if dominated && !has_smaller_midpoint(w) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// First order in lexicographic enumeration of vertex permutations that
/// passes [`is_vertex_shelling_order`].
pub fn find_vertex_shelling_order(
    m: &BinaryMatrix,
    k_max: Option<usize>,
) -> Result<Option<VertexOrder>> {
    let k_max = match k_max {
        Some(k) => k,
        None => default_walk_bound(m)?,
    };
    let n = m.order();
    for perm in (0..n).permutations(n) {
        let order = VertexOrder::new(perm).unwrap();
        if check_with_bound(m, &order, k_max).shelling {
            return Ok(Some(order));
        }
    }
    Ok(None)
}

/// Reduced `Z^k`: each entry is its surviving walk or `None` for zero.
pub fn reduced_z_power_table(
    m: &BinaryMatrix,
    order: &VertexOrder,
    k: usize,
) -> Result<Vec<Vec<Option<Vec<usize>>>>> {
    check_order_len(m, order)?;
    let n = m.order();
    let mut table = Vec::with_capacity(n);
    for u in 0..n {
        let dp = SurvivalDp::new(m, order, u, k);
        let mut row = Vec::with_capacity(n);
        for v in 0..n {
            let c = dp.count(v, k);
            if c > BigUint::one() {
                return Err(Error::MultipleSurvivors {
                    from: u + 1,
                    to: v + 1,
                    k,
                    count: c.to_string(),
                });
            }
            row.push(dp.witness(v, k));
        }
        table.push(row);
    }
    Ok(table)
}

/// `x_{v0,v1,...,vk}` with 1-based vertex indices, or `0`.
pub fn render_walk(walk: &Option<Vec<usize>>) -> String {
    match walk {
        None => "0".into(),
        Some(w) => format!("x_{{{}}}", w.iter().map(|v| v + 1).join(",")),
    }
}

pub fn render_z_table(table: &[Vec<Option<Vec<usize>>>]) -> String {
    let cells: Vec<Vec<String>> = table
        .iter()
        .map(|r| r.iter().map(render_walk).collect())
        .collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| format!("{s:<width$}"))
                .join("  ")
                .trim_end()
                .to_string()
        })
        .join("\n")
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Connected components of the facet graph of the interval's order
/// complex. Facets are internal-vertex sequences of walks; two are
/// adjacent when they differ in exactly one position. In rank 2 all facets
/// share the empty face and count as one component.
pub fn interval_facet_components(poset: &LevelPoset, iv: &IntervalRef) -> Result<usize> {
    let m = poset.matrix();
    let facets: Vec<Vec<usize>> = all_walks(m, iv.from, iv.rank)
        .into_iter()
        .filter(|w| w[iv.rank] == iv.to)
        .map(|w| w[1..iv.rank].to_vec())
        .collect();
    if facets.is_empty() {
        return Err(Error::EmptyInterval {
            from: iv.from,
            to: iv.to,
            rank: iv.rank,
        });
    }
    if iv.rank <= 2 {
        return Ok(1);
    }
    let mut uf = UnionFind((0..facets.len()).collect());
    let mut buckets: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for (idx, f) in facets.iter().enumerate() {
        for pos in 0..f.len() {
            let mut key = f.clone();
            key[pos] = usize::MAX;
            match buckets.entry((pos, key)) {
                std::collections::hash_map::Entry::Occupied(e) => uf.union(idx, *e.get()),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(idx);
                }
            }
        }
    }
    let roots: std::collections::HashSet<usize> = (0..facets.len()).map(|i| uf.find(i)).collect();
    Ok(roots.len())
}
