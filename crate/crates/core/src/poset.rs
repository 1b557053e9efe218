//! The level poset on `V × ℤ` determined by a binary matrix: comparability,
//! flag vectors of intervals, and the finite Eulerian / half-Eulerian checks.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{self, BinaryMatrix, IntMatrix, PeriodIndexProfile};

/// A level poset together with its lazily computed period/index profile.
#[derive(Debug)]
pub struct LevelPoset {
    matrix: BinaryMatrix,
    profile: OnceLock<PeriodIndexProfile>,
}

impl Clone for LevelPoset {
    fn clone(&self) -> Self {
        let profile = OnceLock::new();
        if let Some(p) = self.profile.get() {
            let _ = profile.set(p.clone());
        }
        LevelPoset {
            matrix: self.matrix.clone(),
            profile,
        }
    }
}

impl LevelPoset {
    pub fn new(matrix: BinaryMatrix) -> Self {
        LevelPoset {
            matrix,
            profile: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn profile(&self) -> &PeriodIndexProfile {
        self.profile
            .get_or_init(|| matrix::period_index(&self.matrix))
    }

    /// `Bin(M^k)[u, v]` via the memoized profile.
    pub fn walk_exists(&self, k: usize, u: usize, v: usize) -> bool {
        self.profile().entry(k, u, v)
    }

    /// `(u, i) < (v, j)`.
    pub fn less_than(&self, (u, i): (usize, i64), (v, j): (usize, i64)) -> bool {
        i < j && self.walk_exists((j - i) as usize, u, v)
    }

    pub fn interval(&self, from: usize, to: usize, rank: usize) -> Result<IntervalRef> {
        IntervalRef::new(self, from, to, rank)
    }
}

/// The interval `[(from, 0), (to, rank)]`, checked to be nonempty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalRef {
    pub from: usize,
    pub to: usize,
    pub rank: usize,
}

impl IntervalRef {
    pub fn new(poset: &LevelPoset, from: usize, to: usize, rank: usize) -> Result<Self> {
        let n = poset.order();
        if from >= n {
            return Err(Error::UnknownVertex((from + 1).to_string()));
        }
        if to >= n {
            return Err(Error::UnknownVertex((to + 1).to_string()));
        }
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if !poset.walk_exists(rank, from, to) {
            return Err(Error::EmptyInterval { from, to, rank });
        }
        Ok(IntervalRef { from, to, rank })
    }

    /// Number of internal ranks, `m = rank - 1`.
    pub fn inner_ranks(&self) -> usize {
        self.rank - 1
    }
}

/// A subset `S ⊆ {1, ..., m}`, stored as a bitmask (bit `i-1` for `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankSubset {
    m: usize,
    mask: u64,
}

impl RankSubset {
    pub fn new(m: usize, elements: &[usize]) -> Result<Self> {
        if m >= 64 {
            return Err(Error::DegreeTooLarge(m));
        }
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > m {
                return Err(Error::InvalidRankSubset {
                    subset: elements.to_vec(),
                    max: m,
                });
            }
            mask |= 1 << (e - 1);
        }
        Ok(RankSubset { m, mask })
    }

    pub fn from_mask(m: usize, mask: u64) -> Self {
        assert!(m < 64 && mask >> m == 0);
        RankSubset { m, mask }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn elements(&self) -> Vec<usize> {
        (1..=self.m)
            .filter(|i| self.mask >> (i - 1) & 1 == 1)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// The composition `(α_1, ..., α_r)` of `m + 1` whose partial sums are `S`.
    pub fn composition(&self) -> Vec<usize> {
        let mut parts = Vec::new();
        let mut last = 0;
        for s in self.elements() {
            parts.push(s - last);
            last = s;
        }
        parts.push(self.m + 1 - last);
        parts
    }
}

/// `F_S = Bin(M^α_1) · ... · Bin(M^α_r)`: entry `(u, v)` counts maximal
/// chains of `[(u,0),(v,m+1)]` restricted to the ranks in `S`.
pub fn flag_f_matrix(poset: &LevelPoset, subset: &RankSubset) -> IntMatrix {
    let mut parts = subset.composition().into_iter();
    let first = parts.next().unwrap();
    let mut acc = IntMatrix::from(poset.profile().power_ref(first));
    for a in parts {
        acc = acc.mul(&IntMatrix::from(poset.profile().power_ref(a)));
    }
    acc
}

/// Values indexed by subset bitmask, `2^m` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector<T> {
    m: usize,
    values: Vec<T>,
}

impl<T> FlagVector<T> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, s: &RankSubset) -> &T {
        assert_eq!(s.m(), self.m);
        &self.values[s.mask() as usize]
    }

    pub fn by_mask(&self, mask: u64) -> &T {
        &self.values[mask as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (RankSubset, &T)> {
        let m = self.m;
        self.values
            .iter()
            .enumerate()
            .map(move |(mask, v)| (RankSubset::from_mask(m, mask as u64), v))
    }
}

/// Chain counts of one interval by rank set, via a row-vector product for
/// each subset.
pub fn flag_f_vector(poset: &LevelPoset, iv: &IntervalRef) -> Result<FlagVector<BigUint>> {
    let m = iv.inner_ranks();
    if m >= 63 {
        return Err(Error::DegreeTooLarge(m));
    }
    let n = poset.order();
    let profile = poset.profile();
    let mut values = Vec::with_capacity(1 << m);
    for mask in 0..(1u64 << m) {
        let s = RankSubset::from_mask(m, mask);
        let mut row: Vec<BigUint> = vec![BigUint::zero(); n];
        row[iv.from] = BigUint::one();
        for a in s.composition() {
            let p = profile.power_ref(a);
            let mut next = vec![BigUint::zero(); n];
            for (x, cx) in row.iter().enumerate() {
                if cx.is_zero() {
                    continue;
                }
                for y in p.successors(x) {
                    next[y] += cx;
                }
            }
            row = next;
        }
        values.push(std::mem::take(&mut row[iv.to]));
    }
    Ok(FlagVector { m, values })
}

/// `h_S = Σ_{T ⊆ S} (-1)^{|S-T|} f_T`, by the subset Möbius transform.
pub fn flag_h_from_f(f: &FlagVector<BigUint>) -> FlagVector<BigInt> {
    let m = f.m;
    let mut values: Vec<BigInt> = f.values.iter().map(|x| BigInt::from(x.clone())).collect();
    for bit in 0..m {
        for mask in 0..values.len() {
            if mask >> bit & 1 == 1 {
                let lower = values[mask ^ (1 << bit)].clone();
                values[mask] -= lower;
            }
        }
    }
    FlagVector { m, values }
}

pub fn flag_h_vector(poset: &LevelPoset, iv: &IntervalRef) -> Result<FlagVector<BigInt>> {
    Ok(flag_h_from_f(&flag_f_vector(poset, iv)?))
}

/// Where the walk-length bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// Proven bound for an indecomposable matrix.
    Indecomposable,
    /// The same formula applied to a decomposable matrix, whose
    /// derivation uses only eventual periodicity of the binary powers.
    Generalized,
}

/// Outcome of an Eulerian or half-Eulerian check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub d: usize,
    pub gamma: usize,
    /// Exclusive upper bound on the checked values of `p`.
    pub bound: usize,
    pub bound_source: BoundSource,
    pub checked_p: Vec<usize>,
    pub failed_p: Option<usize>,
    pub eulerian: bool,
}

/// `p < 2γ + 4d`, improved to `p < 2γ + 2d` when `d` is odd.
pub fn eulerian_bound(profile: &PeriodIndexProfile) -> usize {
    let (d, g) = (profile.period, profile.index);
    if d % 2 == 1 {
        2 * g + 2 * d
    } else {
        2 * g + 4 * d
    }
}

/// `Σ_{i=lo}^{hi} (-1)^(i - lo) Bin(M^i) Bin(M^(p-i))` as a signed
/// integer matrix in row-major order.
fn alternating_sum(profile: &PeriodIndexProfile, p: usize, lo: usize, hi: usize) -> Vec<i64> {
    let n = profile.order();
    let mut total = vec![0i64; n * n];
    for i in lo..=hi {
        let sign = if (i - lo).is_multiple_of(2) { 1 } else { -1 };
        let left = profile.power(i);
        let right = profile.power(p - i);
        for (x, z) in left.edges() {
            for y in right.successors(z) {
                total[x * n + y] += sign;
            }
        }
    }
    total
}

/// Checks `Σ_{i=0}^{p} (-1)^i Bin(M^i) Bin(M^(p-i)) = 0` at a single `p`.
pub fn eulerian_condition_holds(profile: &PeriodIndexProfile, p: usize) -> bool {
    alternating_sum(profile, p, 0, p).iter().all(|&x| x == 0)
}

/// Checks `Σ_{i=1}^{p-1} (-1)^(i-1) Bin(M^i) Bin(M^(p-i))` equals
/// `Bin(M^p)` for even `p` and `0` for odd `p`.
///
/// Entry `(u, v)` of the sum is the alternating count of middle elements of
/// `[(u,0),(v,p)]`, which must be 1 only where that interval is nonempty;
/// the target therefore agrees with `J` exactly when `Bin(M^p) = J`.
pub fn half_eulerian_condition_holds(profile: &PeriodIndexProfile, p: usize) -> bool {
    if p < 2 {
        return p == 1;
    }
    let n = profile.order();
    let sum = alternating_sum(profile, p, 1, p - 1);
    if p % 2 == 1 {
        return sum.iter().all(|&x| x == 0);
    }
    let reach = profile.power_ref(p);
    (0..n).all(|u| (0..n).all(|v| sum[u * n + v] == reach.get(u, v) as i64))
}

/// Options for the finite Eulerian checks.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Also evaluate odd `p` (implied by the even ones; for auditing).
    pub include_odd: bool,
}

fn run_check(
    poset: &LevelPoset,
    opts: CheckOptions,
    holds: impl Fn(&PeriodIndexProfile, usize) -> bool,
) -> VerificationReport {
    let profile = poset.profile();
    let bound = eulerian_bound(profile);
    let bound_source = if matrix::is_indecomposable(poset.matrix()) {
        BoundSource::Indecomposable
    } else {
        BoundSource::Generalized
    };
    let mut checked_p = Vec::new();
    let mut failed_p = None;
    for p in 1..bound {
        if p % 2 == 1 && !opts.include_odd {
            continue;
        }
        checked_p.push(p);
        if !holds(profile, p) {
            failed_p = Some(p);
            break;
        }
    }
    VerificationReport {
        d: profile.period,
        gamma: profile.index,
        bound,
        bound_source,
        checked_p,
        failed_p,
        eulerian: failed_p.is_none(),
    }
}

pub fn check_level_eulerian(poset: &LevelPoset, opts: CheckOptions) -> VerificationReport {
    run_check(poset, opts, eulerian_condition_holds)
}

pub fn check_level_half_eulerian(poset: &LevelPoset, opts: CheckOptions) -> VerificationReport {
    run_check(poset, opts, half_eulerian_condition_holds)
}

pub fn is_level_eulerian(m: &BinaryMatrix) -> bool {
    check_level_eulerian(&LevelPoset::new(m.clone()), CheckOptions::default()).eulerian
}

pub fn is_level_half_eulerian(m: &BinaryMatrix) -> bool {
    check_level_half_eulerian(&LevelPoset::new(m.clone()), CheckOptions::default()).eulerian
}

/// Hasse diagram connectivity for a strongly connected digraph, which
/// holds exactly when the period is 1.
pub fn hasse_connected(poset: &LevelPoset) -> Result<bool> {
    if !matrix::is_indecomposable(poset.matrix()) {
        return Err(Error::NotIndecomposable);
    }
    Ok(poset.profile().period == 1)
}
