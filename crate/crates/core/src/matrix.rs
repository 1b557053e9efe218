//! Boolean and exact-integer square matrices, binary reduction, the
//! eventually periodic sequence of binary powers, and the doubling
//! constructions.
//!
//! A [`BinaryMatrix`] stores each row as a packed bitset so that products
//! over the boolean semiring reduce to word-wise ORs.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Square 0/1 matrix over a set of named vertices.
///
/// Equality and hashing compare entries only; labels are descriptive.
#[derive(Clone)]
pub struct BinaryMatrix {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix order must be positive");
        let stride = n.div_ceil(WORD);
        BinaryMatrix {
            n,
            stride,
            bits: vec![0; n * stride],
            labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values, rejecting ragged or
    /// non-binary input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NonSquare {
                    row: i + 1,
                    found: row.len(),
                    expected: n,
                });
            }
            for (j, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 => m.set(i, j, true),
                    v => {
                        return Err(Error::InvalidEntry {
                            row: i + 1,
                            col: j + 1,
                            value: v as i64,
                        })
                    }
                }
            }
        }
        Ok(m)
    }

    /// Attaches vertex names; they must be distinct and exactly `n` of them.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LabelCount {
                expected: self.n,
                found: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[i * self.stride + j / WORD];
        if value {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    /// Name of vertex `i` (0-based). Defaults to `"1"`..`"n"`.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.n).map(|i| self.label(i)).collect()
    }

    pub fn has_custom_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Resolves a vertex given either by label or by 1-based index.
    pub fn resolve_vertex(&self, name: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Ok(i);
            }
        }
        match name.trim().parse::<usize>() {
            Ok(k) if (1..=self.n).contains(&k) => Ok(k - 1),
            _ => Err(Error::UnknownVertex(name.to_string())),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.successors(i).map(move |j| (i, j)))
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        *self == Self::ones(self.n)
    }

    /// Product over the boolean semiring: `Bin(A * B)`.
    pub fn bool_mul(&self, rhs: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.n, rhs.n, "order mismatch");
        let mut out = BinaryMatrix::zeros(self.n);
        for i in 0..self.n {
            let base = i * out.stride;
            for k in self.successors(i) {
                for (dst, src) in out.bits[base..base + out.stride]
                    .iter_mut()
                    .zip(rhs.row_words(k))
                {
                    *dst |= *src;
                }
            }
        }
        out
    }

    /// Exact integer product (walk counts, not reduced).
    pub fn int_mul(&self, rhs: &BinaryMatrix) -> IntMatrix {
        IntMatrix::from(self).mul(&IntMatrix::from(rhs))
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.n);
        for (i, j) in self.edges() {
            t.set(j, i, true);
        }
        t
    }

    fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }
}

impl PartialEq for BinaryMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl Eq for BinaryMatrix {}

impl Hash for BinaryMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for BinaryMatrix {
    /// Text format: `n` lines of `n` space-separated digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n)
                .map(|j| if self.get(i, j) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Square matrix of nonnegative arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigUint::zero(); n * n],
        }
    }

    pub fn from_rows<T: Into<BigUint> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    row: i + 1,
                    found: row.len(),
                    expected: n,
                });
            }
            for (j, x) in row.iter().enumerate() {
                m.entries[i * n + j] = x.clone().into();
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "order mismatch");
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<BigUint>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl From<&BinaryMatrix> for IntMatrix {
    fn from(m: &BinaryMatrix) -> Self {
        let mut out = IntMatrix::zeros(m.n);
        for (i, j) in m.edges() {
            out.entries[i * m.n + j] = BigUint::from(1u8);
        }
        out
    }
}

/// Binary reduction: every positive entry becomes 1.
pub fn bin(a: &IntMatrix) -> BinaryMatrix {
    let mut out = BinaryMatrix::zeros(a.n);
    for i in 0..a.n {
        for j in 0..a.n {
            if !a.get(i, j).is_zero() {
                out.set(i, j, true);
            }
        }
    }
    out
}

/// `Bin(M^k)` by square-and-multiply over the boolean semiring; `k = 0`
/// gives the identity.
pub fn bin_power(m: &BinaryMatrix, k: usize) -> BinaryMatrix {
    let mut result = BinaryMatrix::identity(m.n);
    let mut base = m.clone().without_labels();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = result.bool_mul(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.bool_mul(&base);
        }
    }
    result
}

/// Period `d`, index `γ`, and the binary powers that realize them.
///
/// `prefix[t-1] = Bin(M^t)` for `1 <= t < γ`, and
/// `cycle[s] = Bin(M^(γ+s))` for `0 <= s < d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodIndexProfile {
    pub period: usize,
    pub index: usize,
    pub prefix: Vec<BinaryMatrix>,
    pub cycle: Vec<BinaryMatrix>,
}

impl PeriodIndexProfile {
    /// `Bin(M^k)` for any `k >= 0`, read off the memoized tables.
    pub fn power(&self, k: usize) -> BinaryMatrix {
        if k == 0 {
            return BinaryMatrix::identity(self.order());
        }
        self.power_ref(k).clone()
    }

    /// Borrowing variant of [`power`](Self::power) for `k >= 1`.
    pub fn power_ref(&self, k: usize) -> &BinaryMatrix {
        assert!(k >= 1, "power_ref needs a positive exponent");
        if k < self.index {
            &self.prefix[k - 1]
        } else {
            &self.cycle[(k - self.index) % self.period]
        }
    }

    pub fn order(&self) -> usize {
        self.cycle[0].order()
    }

    /// Entry `(u, v)` of `Bin(M^k)`; `k = 0` is the identity.
    pub fn entry(&self, k: usize, u: usize, v: usize) -> bool {
        if k == 0 {
            u == v
        } else {
            self.power_ref(k).get(u, v)
        }
    }
}

/// Minimal `(d, γ)` with `Bin(M^(t+d)) = Bin(M^t)` for all `t >= γ`,
/// indexing powers from `t = 1`.
pub fn period_index(m: &BinaryMatrix) -> PeriodIndexProfile {
    let base = m.clone().without_labels();
    let mut seen: HashMap<BinaryMatrix, usize> = HashMap::new();
    let mut powers: Vec<BinaryMatrix> = Vec::new();
    let mut current = base.clone();
    let mut t = 1;
    loop {
        if let Some(&first) = seen.get(&current) {
            let index = first;
            let period = t - first;
            let cycle = powers.split_off(index - 1);
            return PeriodIndexProfile {
                period,
                index,
                prefix: powers,
                cycle,
            };
        }
        seen.insert(current.clone(), t);
        let next = current.bool_mul(&base);
        powers.push(current);
        current = next;
        t += 1;
    }
}

/// Vertices reachable from `start` by walks of positive length.
fn positive_reach(m: &BinaryMatrix, start: usize, forward: bool) -> Vec<bool> {
    let n = m.order();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let step = |u: usize| -> Vec<usize> {
        if forward {
            m.successors(u).collect()
        } else {
            (0..n).filter(|&w| m.get(w, u)).collect()
        }
    };
    for v in step(start) {
        if !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for v in step(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Strong connectivity in the sense that every ordered pair (including
/// `(i, i)`) is joined by a walk of positive length.
pub fn is_indecomposable(m: &BinaryMatrix) -> bool {
    positive_reach(m, 0, true).iter().all(|&x| x) && positive_reach(m, 0, false).iter().all(|&x| x)
}

pub fn is_primitive(m: &BinaryMatrix) -> bool {
    is_indecomposable(m) && period_index(m).period == 1
}

/// Exponent of a primitive matrix: the least `γ` with `Bin(M^γ) = J`.
pub fn exponent(m: &BinaryMatrix) -> Option<usize> {
    if !is_indecomposable(m) {
        return None;
    }
    let p = period_index(m);
    (p.period == 1).then_some(p.index)
}

/// Ordered partition `C_0, ..., C_(d-1)` with every edge going from
/// `C_q` to `C_(q+1 mod d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicClassPartition {
    pub classes: Vec<Vec<usize>>,
}

impl CyclicClassPartition {
    pub fn period(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&v))
            .expect("vertex not in partition")
    }
}

/// Cyclic classes from BFS levels: the period is the gcd of
/// `level(u) + 1 - level(v)` over all edges, and the class of `v` is
/// `level(v) mod d`. Vertex 0 always lands in `C_0`.
pub fn cyclic_classes(m: &BinaryMatrix) -> Result<CyclicClassPartition> {
    if !is_indecomposable(m) {
        return Err(Error::NotIndecomposable);
    }
    let n = m.order();
    let mut level: Vec<Option<i64>> = vec![None; n];
    level[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for v in m.successors(u) {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    let mut d: i64 = 0;
    for (u, v) in m.edges() {
        let diff = level[u].unwrap() + 1 - level[v].unwrap();
        d = d.gcd(&diff);
    }
    let d = d.unsigned_abs() as usize;
    let mut classes = vec![Vec::new(); d];
    for (v, l) in level.iter().enumerate() {
        classes[(l.unwrap() as usize) % d].push(v);
    }
    Ok(CyclicClassPartition { classes })
}

fn copy_labels(m: &BinaryMatrix) -> Vec<String> {
    let base = m.labels();
    base.iter()
        .map(|l| format!("{l}_1"))
        .chain(base.iter().map(|l| format!("{l}_2")))
        .collect()
}

/// `D↔(M) = (M M; M M)`.
pub fn horizontal_double(m: &BinaryMatrix) -> BinaryMatrix {
    let n = m.order();
    let mut out = BinaryMatrix::zeros(2 * n);
    for (i, j) in m.edges() {
        for bi in [0, n] {
            for bj in [0, n] {
                out.set(bi + i, bj + j, true);
            }
        }
    }
    out.with_labels(copy_labels(m))
        .expect("labels are distinct")
}

/// `D↕(M) = (0 I; M 0)`.
pub fn vertical_double(m: &BinaryMatrix) -> BinaryMatrix {
    let n = m.order();
    let mut out = BinaryMatrix::zeros(2 * n);
    for i in 0..n {
        out.set(i, n + i, true);
    }
    for (i, j) in m.edges() {
        out.set(n + i, j, true);
    }
    out.with_labels(copy_labels(m))
        .expect("labels are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn bin_reduces_positive_entries() {
        let a = IntMatrix::from_rows(&[vec![0u32, 3], vec![2, 0]]).unwrap();
        assert_eq!(bin(&a), m(&[&[0, 1], &[1, 0]]));
        let j = IntMatrix::from(&BinaryMatrix::ones(3));
        assert!(bin(&j).is_all_ones());
        assert!(bin(&IntMatrix::zeros(2)).is_zero());
    }

    #[test]
    fn bin_power_matches_displayed_powers() {
        let fig = fixtures::figure_one();
        assert_eq!(
            bin_power(&fig, 2),
            m(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 0, 1, 1], &[1, 1, 1, 1]])
        );
        assert!(bin_power(&fig, 3).is_all_ones());
        let three = fixtures::three_by_three();
        assert_eq!(
            bin_power(&three, 3),
            m(&[&[1, 1, 1], &[1, 1, 0], &[1, 1, 1]])
        );
        assert_eq!(
            bin_power(&three, 2),
            m(&[&[1, 1, 1], &[1, 0, 0], &[1, 1, 0]])
        );
        assert_eq!(bin_power(&fig, 0), BinaryMatrix::identity(4));
    }

    #[test]
    fn period_and_index_of_examples() {
        let b = period_index(&fixtures::butterfly());
        assert_eq!((b.period, b.index), (1, 1));
        let f = period_index(&fixtures::figure_one());
        assert_eq!((f.period, f.index), (1, 3));
        let c = period_index(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((c.period, c.index), (2, 1));
        let t = period_index(&fixtures::three_by_three());
        assert_eq!((t.period, t.index), (1, 4));
        let z = period_index(&BinaryMatrix::zeros(3));
        assert_eq!((z.period, z.index), (1, 1));
    }

    #[test]
    fn profile_power_folds_into_cycle() {
        let mat = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 1]]);
        let p = period_index(&mat);
        for k in 0..40 {
            assert_eq!(p.power(k), bin_power(&mat, k), "k = {k}");
        }
    }

    #[test]
    fn indecomposable_and_primitive() {
        assert!(!is_indecomposable(&m(&[&[0, 1], &[0, 1]])));
        let fig = fixtures::figure_one();
        assert!(is_primitive(&fig));
        assert_eq!(exponent(&fig), Some(3));
        let cyc = m(&[&[0, 1], &[1, 0]]);
        assert!(is_indecomposable(&cyc));
        assert!(!is_primitive(&cyc));
        assert_eq!(exponent(&cyc), None);
        assert!(!is_indecomposable(&m(&[&[0]])));
        assert!(is_primitive(&m(&[&[1]])));
    }

    #[test]
    fn cyclic_classes_examples() {
        let cyc = cyclic_classes(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(cyc.classes, vec![vec![0], vec![1]]);
        let fig = cyclic_classes(&fixtures::figure_one()).unwrap();
        assert_eq!(fig.classes, vec![vec![0, 1, 2, 3]]);
        let vd = cyclic_classes(&vertical_double(&fixtures::butterfly())).unwrap();
        assert_eq!(vd.classes, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            cyclic_classes(&m(&[&[0, 1], &[0, 1]])),
            Err(Error::NotIndecomposable)
        );
    }

    #[test]
    fn doubling_block_formulas() {
        let one = m(&[&[1]]);
        assert!(horizontal_double(&one).is_all_ones());
        assert!(horizontal_double(&fixtures::butterfly()).is_all_ones());
        assert_eq!(vertical_double(&one), m(&[&[0, 1], &[1, 0]]));
        assert_eq!(
            vertical_double(&fixtures::butterfly()),
            m(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 0, 0], &[1, 1, 0, 0]])
        );
        let three = fixtures::three_by_three();
        let h = horizontal_double(&three);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(h.get(i, j), three.get(i % 3, j % 3));
            }
        }
        assert_eq!(h.label(0), "1_1");
        assert_eq!(h.label(4), "2_2");
    }

    #[test]
    fn ragged_and_nonbinary_input_rejected() {
        assert!(matches!(
            BinaryMatrix::from_rows(&[vec![0u8, 1], vec![1]]),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(
            BinaryMatrix::from_rows(&[vec![2u8]]),
            Err(Error::InvalidEntry { .. })
        ));
    }

    #[test]
    fn wide_matrices_use_multiple_words() {
        let n = 70;
        let mut c = BinaryMatrix::zeros(n);
        for i in 0..n {
            c.set(i, (i + 1) % n, true);
        }
        let p = period_index(&c);
        assert_eq!((p.period, p.index), (70, 1));
        assert!(bin_power(&c, 70) == BinaryMatrix::identity(n));
    }
}
