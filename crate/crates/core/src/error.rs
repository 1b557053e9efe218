use thiserror::Error;

use crate::algebra::NotCdExpressible;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("matrix must have at least one row")]
    EmptyMatrix,
    #[error("entry ({row}, {col}) is {value}, expected 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("matrix is not indecomposable (its digraph is not strongly connected)")]
    NotIndecomposable,
    #[error("interval from vertex {} to vertex {} of rank {rank} is empty", .from + 1, .to + 1)]
    EmptyInterval { from: usize, to: usize, rank: usize },
    #[error("interval rank must be at least 1")]
    ZeroRank,
    #[error("rank subset {subset:?} is not contained in 1..={max}")]
    InvalidRankSubset { subset: Vec<usize>, max: usize },
    #[error(transparent)]
    NotCdExpressible(#[from] Box<NotCdExpressible>),
    #[error("matrix is decomposable: an explicit walk-length bound is required")]
    DecomposableNeedsBound,
    #[error("entry ({from}, {to}) of Z^{k} has {count} surviving walks")]
    MultipleSurvivors {
        from: usize,
        to: usize,
        k: usize,
        count: String,
    },
    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),
    #[error("degree {0} exceeds the supported maximum of {max}", max = crate::algebra::MAX_AB_DEGREE)]
    DegreeTooLarge(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
