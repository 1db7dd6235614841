//! Exact scalars and linear algebra over the rationals and odd prime fields.
//!
//! Everything here is a pure function of immutable inputs. Row reduction
//! always goes through [`Echelon`], which keeps a sparse reduced basis and
//! therefore produces the unique rref regardless of row order.

mod echelon;
mod matrix;
mod scalar;
mod sparse;
mod subspace;

pub use echelon::Echelon;
pub use matrix::{
    kernel, rank, rref, solve, solve_sparse, verify_certificate, Matrix, Solution, SparseMatrix,
};
pub use scalar::{Field, Scalar};
pub use sparse::{Accumulator, SparseVec};
pub use subspace::Subspace;
