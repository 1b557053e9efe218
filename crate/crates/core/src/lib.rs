//! Level posets: infinite graded posets on `V × ℤ` whose cover relations
//! repeat at every rank and are encoded by a square 0/1 matrix.
//!
//! The crate decides whether such a poset is (half-)Eulerian using finite
//! bounds derived from the period and index of the matrix, computes flag
//! vectors and ab/cd-indices of intervals, truncates the ab/cd-series
//! matrix, checks the derivation identity that characterizes it, and
//! verifies vertex shelling orders through reduced walk matrices.

pub mod algebra;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod matrix;
pub mod poset;
pub mod shelling;

pub use error::{Error, Result};
pub use matrix::BinaryMatrix;
pub use poset::LevelPoset;
