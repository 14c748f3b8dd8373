//! Exact field arithmetic, dense matrices, the characteristic polynomial
//! and an incremental echelon basis over vectorized matrices.

mod echelon;
mod field;
mod matrix;

pub use echelon::{EchelonBasis, Insertion, Membership};
pub use field::{is_prime, FieldSpec, Scalar};
pub use matrix::SquareMatrix;
