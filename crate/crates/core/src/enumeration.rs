//! ab- and cd-indices of intervals, the truncated ab-series matrix and
//! the derivation-identity verifiers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{
    self, a_minus_b_power, ab_to_cd, delta, f_horizontal, f_vertical, join_with_t, AbPolynomial,
    AbWord, AbtPolynomial, CdPolynomial, CdWord, GradedMatrixSeries, NotCdExpressible,
    SeriesLocation, MAX_AB_DEGREE,
};
use crate::error::{Error, Result};
use crate::matrix::{horizontal_double, vertical_double, BinaryMatrix};
use crate::poset::{flag_h_vector, IntervalRef, LevelPoset};

/// Default degree cap for series truncations.
pub const DEFAULT_DEGREE_CAP: usize = 12;

pub type AbSeries = GradedMatrixSeries<AbWord>;
pub type CdSeries = GradedMatrixSeries<CdWord>;

/// `Ψ = Σ_S h_S u_S` from the flag h-vector.
pub fn ab_index_interval(poset: &LevelPoset, iv: &IntervalRef) -> Result<AbPolynomial> {
    let m = iv.inner_ranks();
    if m > MAX_AB_DEGREE {
        return Err(Error::DegreeTooLarge(m));
    }
    let h = flag_h_vector(poset, iv)?;
    Ok(AbPolynomial::from_terms(h.iter().map(|(s, c)| {
        (AbWord::from_subset_mask(m, s.mask()), c.clone())
    })))
}

/// Sums `(a-b)^(ρ-1) b (a-b)^(ρ-1) b ... (a-b)^(ρ-1)` over every chain of
/// the interval, enumerating chains explicitly.
pub fn ab_index_via_chains(poset: &LevelPoset, iv: &IntervalRef) -> Result<AbPolynomial> {
    let top = iv.rank;
    let powers: Vec<AbPolynomial> = (0..top).map(a_minus_b_power).collect();
    let b = AbPolynomial::letter(b'b');

    // weight of every chain continuing from (x, r) up to the top
    fn extend(
        poset: &LevelPoset,
        iv: &IntervalRef,
        x: usize,
        r: usize,
        powers: &[AbPolynomial],
        b: &AbPolynomial,
    ) -> AbPolynomial {
        let top = iv.rank;
        let mut total = AbPolynomial::zero();
        if poset.walk_exists(top - r, x, iv.to) {
            total += &powers[top - r - 1];
        }
        for s in (r + 1)..top {
            for y in 0..poset.order() {
                if poset.walk_exists(s - r, x, y) && poset.walk_exists(top - s, y, iv.to) {
                    let head = &powers[s - r - 1] * b;
                    total += &(&head * &extend(poset, iv, y, s, powers, b));
                }
            }
        }
        total
    }

    Ok(extend(poset, iv, iv.from, 0, &powers, &b))
}

fn with_location(mut e: Box<NotCdExpressible>, loc: Option<SeriesLocation>) -> Error {
    e.location = loc;
    Error::NotCdExpressible(e)
}

pub fn cd_index_interval(poset: &LevelPoset, iv: &IntervalRef) -> Result<CdPolynomial> {
    let ab = ab_index_interval(poset, iv)?;
    ab_to_cd(&ab).map_err(|e| with_location(e, None))
}

/// `Ψ_m = Bin(M^(m+1)) (a-b)^m + Σ_{i<m} Bin(M^(i+1)) (a-b)^i b Ψ_(m-1-i)`
/// for `m = 0..=cap`.
pub fn psi_truncation(poset: &LevelPoset, cap: usize) -> AbSeries {
    assert!(cap <= MAX_AB_DEGREE, "degree cap above {MAX_AB_DEGREE}");
    let n = poset.order();
    let profile = poset.profile();
    let mut series = GradedMatrixSeries::new(n, Vec::new());
    let b = AbPolynomial::letter(b'b');
    let heads: Vec<AbPolynomial> = (0..cap.max(1)).map(|i| &a_minus_b_power(i) * &b).collect();
    for m in 0..=cap {
        let lead = a_minus_b_power(m);
        let mut slice = vec![AbPolynomial::zero(); n * n];
        for (x, y) in profile.power_ref(m + 1).edges() {
            slice[x * n + y] += &lead;
        }
        for (i, head) in heads.iter().enumerate().take(m) {
            let step = profile.power_ref(i + 1);
            let tail = series.slice(m - 1 - i);
            for x in 0..n {
                for y in 0..n {
                    let mut acc = AbPolynomial::zero();
                    for z in step.successors(x) {
                        acc += &tail[z * n + y];
                    }
                    if !acc.is_zero() {
                        slice[x * n + y] += &(head * &acc);
                    }
                }
            }
        }
        series.push_slice(slice);
    }
    series
}

/// cd-rewriting of every slice of the ab-series truncation.
pub fn cd_series_truncation(poset: &LevelPoset, cap: usize) -> Result<CdSeries> {
    cd_series_from_ab(&psi_truncation(poset, cap))
}

pub fn cd_series_from_ab(series: &AbSeries) -> Result<CdSeries> {
    series.try_map(|degree, row, col, p| {
        ab_to_cd(p).map_err(|e| with_location(e, Some(SeriesLocation { row, col, degree })))
    })
}

/// The cd-series expanded back to {a,b}.
pub fn ab_series_from_cd(series: &CdSeries) -> AbSeries {
    series
        .try_map::<AbWord, std::convert::Infallible>(|_, _, _, p| Ok(algebra::cd_expand(p)))
        .unwrap()
}

/// Which of the two characterizing conditions failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityCondition {
    /// Slice not homogeneous of its degree.
    Grading,
    /// `Ψ|_{a=t, b=0}` differs from `K(t)`.
    Specialization,
    /// `Δ(Ψ_m) ≠ Σ Ψ_i t Ψ_(m-1-i)`.
    Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub condition: IdentityCondition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub passed: bool,
    pub max_degree: usize,
    pub failure: Option<IdentityFailure>,
}

/// Checks a candidate series against the two conditions that determine
/// the ab-series uniquely, degree by degree, reporting the first
/// counterexample.
pub fn verify_derivation_identity(poset: &LevelPoset, series: &AbSeries) -> IdentityReport {
    let n = poset.order();
    assert_eq!(series.order(), n, "series order must match the matrix");
    let profile = poset.profile();
    let fail = |degree, row, col, condition| IdentityReport {
        passed: false,
        max_degree: series.cap(),
        failure: Some(IdentityFailure {
            degree,
            row,
            col,
            condition,
        }),
    };
    for m in 0..=series.cap() {
        for x in 0..n {
            for y in 0..n {
                let p = series.entry(m, x, y);
                if !p.is_homogeneous_of(m) {
                    return fail(m, x, y, IdentityCondition::Grading);
                }
                let k = if profile.entry(m + 1, x, y) {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                if algebra::specialize_b_zero(p, m) != k {
                    return fail(m, x, y, IdentityCondition::Specialization);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = delta(series.entry(m, x, y));
                let mut rhs = AbtPolynomial::zero();
                for i in 0..m {
                    for z in 0..n {
                        let l = series.entry(i, x, z);
                        let r = series.entry(m - 1 - i, z, y);
                        if !l.is_zero() && !r.is_zero() {
                            rhs += &join_with_t(l, r);
                        }
                    }
                }
                if lhs != rhs {
                    return fail(m, x, y, IdentityCondition::Derivation);
                }
            }
        }
    }
    IdentityReport {
        passed: true,
        max_degree: series.cap(),
        failure: None,
    }
}

/// `Δ(Ψ(I)) = Σ_z Ψ([bottom, z]) t Ψ([z, top])` over the proper middle
/// elements `z` of the interval.
pub fn verify_coalgebra_splitting(poset: &LevelPoset, iv: &IntervalRef) -> Result<bool> {
    let lhs = delta(&ab_index_interval(poset, iv)?);
    let mut rhs = AbtPolynomial::zero();
    for r in 1..iv.rank {
        for w in 0..poset.order() {
            if poset.walk_exists(r, iv.from, w) && poset.walk_exists(iv.rank - r, w, iv.to) {
                let lower = ab_index_interval(poset, &IntervalRef::new(poset, iv.from, w, r)?)?;
                let upper =
                    ab_index_interval(poset, &IntervalRef::new(poset, w, iv.to, iv.rank - r)?)?;
                rhs += &join_with_t(&lower, &upper);
            }
        }
    }
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingFailure {
    /// `"horizontal"` or `"vertical"`.
    pub construction: &'static str,
    pub degree: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    pub passed: bool,
    pub max_degree: usize,
    pub failure: Option<DoublingFailure>,
}

/// Expected vertical-double block at `(row, col)` and degree `k`, built
/// from the `f↕` images of the original series.
fn vertical_block(original: &AbSeries, n: usize, row: usize, col: usize, k: usize) -> AbPolynomial {
    let a = AbPolynomial::letter(b'a');
    let (bi, bj) = (row / n, col / n);
    let (x, y) = (row % n, col % n);
    // f↕ doubles degrees, so the block's extra `a` factors fix the parity
    let extra = match (bi, bj) {
        (0, 0) | (1, 1) => 1,
        (0, 1) => 2,
        _ => 0,
    };
    let mut out = AbPolynomial::zero();
    if (bi, bj) == (0, 1) && k == 0 && x == y {
        out += &AbPolynomial::one();
    }
    if k >= extra && (k - extra).is_multiple_of(2) {
        let m = (k - extra) / 2;
        if m <= original.cap() {
            let img = f_vertical(original.entry(m, x, y));
            out += &match (bi, bj) {
                (0, 0) => &a * &img,
                (0, 1) => &(&a * &img) * &a,
                (1, 0) => img,
                _ => &img * &a,
            };
        }
    }
    out
}

/// Compares the series of both doubles with the images of the original
/// series under `f↔` and `f↕`, entrywise up to degree `cap`.
pub fn verify_doubling_functoriality(m: &BinaryMatrix, cap: usize) -> DoublingReport {
    let n = m.order();
    let original = psi_truncation(&LevelPoset::new(m.clone()), cap);
    let fail = |construction, degree, row, col| DoublingReport {
        passed: false,
        max_degree: cap,
        failure: Some(DoublingFailure {
            construction,
            degree,
            row,
            col,
        }),
    };

    let h = psi_truncation(&LevelPoset::new(horizontal_double(m)), cap);
    for k in 0..=cap {
        for row in 0..2 * n {
            for col in 0..2 * n {
                let expected = f_horizontal(original.entry(k, row % n, col % n));
                if *h.entry(k, row, col) != expected {
                    return fail("horizontal", k, row, col);
                }
            }
        }
    }

    let v = psi_truncation(&LevelPoset::new(vertical_double(m)), cap);
    for k in 0..=cap {
        for row in 0..2 * n {
            for col in 0..2 * n {
                if *v.entry(k, row, col) != vertical_block(&original, n, row, col, k) {
                    return fail("vertical", k, row, col);
                }
            }
        }
    }
    DoublingReport {
        passed: true,
        max_degree: cap,
        failure: None,
    }
}
