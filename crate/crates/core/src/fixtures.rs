//! Named matrices used throughout the tests, the CLI and the demo page.

use crate::matrix::BinaryMatrix;

/// The 4×4 level Eulerian matrix with exponent 3.
pub fn figure_one() -> BinaryMatrix {
    BinaryMatrix::from_rows(&[[1, 1, 1, 0], [1, 0, 1, 1], [0, 1, 0, 1], [1, 0, 1, 1]]).unwrap()
}

/// All-ones 2×2 matrix; every rank `m+1` interval has cd-index `c^m`.
pub fn butterfly() -> BinaryMatrix {
    BinaryMatrix::ones(2)
}

/// Primitive, half-Eulerian, with a non-shellable horizontal double.
pub fn three_by_three() -> BinaryMatrix {
    BinaryMatrix::from_rows(&[[1, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap()
}

pub fn two_cycle() -> BinaryMatrix {
    BinaryMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap()
}

pub fn by_name(name: &str) -> Option<BinaryMatrix> {
    match name {
        "figure1" | "figure-one" => Some(figure_one()),
        "butterfly" => Some(butterfly()),
        "three" | "three-by-three" => Some(three_by_three()),
        "two-cycle" => Some(two_cycle()),
        _ => None,
    }
}
