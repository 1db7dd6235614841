//! Exact workbench for contact, Poisson and generalized brackets on
//! finite-dimensional commutative unital algebras.

pub mod algebra;
pub mod bracket;
pub mod error;
pub mod exactlin;
pub mod spaces;
pub mod tensorext;

pub use error::{Error, Result};
pub use algebra::{Element, FiniteAlgebra};
pub use bracket::{Bracket, CheckBudget, IdentityReport, LinearOp, Verdict};
pub use exactlin::{Field, Matrix, Scalar, SparseVec, Subspace};
