//! Brackets as rank-3 structure tensors, identity checkers, and the
//! standard constructions (derivation brackets, wedges, Cartan-type
//! brackets, Schouten-type conditions).

mod cartan;
mod check;
mod construct;
mod operator;
mod schouten;

use std::sync::Arc;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, Scalar, SparseVec};

pub use cartan::{
    contact_k_bracket, contact_k_form, euler_operator, hamiltonian_bracket, hamiltonian_form,
    reduced_shape, witt_bracket, witt_form,
};
pub use check::{
    contact_identity, contact_residual, contact_residual_basis, is_anticommutative, is_commutative, is_contact,
    is_lie, is_poisson, jacobiator, jacobiator_basis, jacobi_check, yoyo_residual,
    yoyo_check, yoyo_residual_basis, CheckBudget, CheckMode, IdentityReport, TripleShape, Verdict, Witness,
};
pub use construct::{from_derivation, sum_of_wedges, wedge, Checked, WedgeForm};
pub use operator::LinearOp;
pub(crate) use operator::same_algebra;
pub use schouten::{lie_derivative, schouten_conditions, trivector_wedge, Trilinear};

/// Bilinear map `A × A → A` given by `[e_i, e_j] = Σ_k c e_k`.
#[derive(Debug, Clone)]
pub struct Bracket {
    algebra: Arc<FiniteAlgebra>,
    table: Vec<SparseVec>,
}

impl PartialEq for Bracket {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.table == other.table
    }
}

impl Eq for Bracket {}

impl Bracket {
    pub fn zero(algebra: &Arc<FiniteAlgebra>) -> Self {
        Bracket {
            algebra: Arc::clone(algebra),
            table: vec![SparseVec::new(); algebra.dim() * algebra.dim()],
        }
    }

    pub fn from_basis_fn(algebra: &Arc<FiniteAlgebra>, f: impl Fn(usize, usize) -> SparseVec) -> Self {
        let n = algebra.dim();
        let table = (0..n * n).map(|ij| f(ij / n, ij % n)).collect();
        Bracket {
            algebra: Arc::clone(algebra),
            table,
        }
    }

    /// From `(i, j, k, c)` entries meaning `[e_i, e_j] += c e_k`.
    pub fn from_entries(
        algebra: &Arc<FiniteAlgebra>,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        let n = algebra.dim();
        let mut acc = vec![Accumulator::new(); n * n];
        for (i, j, k, c) in entries {
            for &idx in [i, j, k] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if c.field() != algebra.field() {
                return Err(Error::FieldMismatch(algebra.field(), c.field()));
            }
            acc[i * n + j].add(*k, c);
        }
        Ok(Bracket {
            algebra: Arc::clone(algebra),
            table: acc.into_iter().map(Accumulator::finish).collect(),
        })
    }

    /// Anticommutative bracket from its values on pairs `i < j`.
    pub fn antisymmetric_from(
        algebra: &Arc<FiniteAlgebra>,
        upper: &[((usize, usize), Element)],
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for ((i, j), v) in upper {
            for (k, c) in v.to_sparse().iter() {
                entries.push((*i, *j, k, c.clone()));
                entries.push((*j, *i, k, -c));
            }
        }
        Bracket::from_entries(algebra, &entries)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `[e_i, e_j]`.
    pub fn value(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        self.table
            .iter()
            .enumerate()
            .flat_map(|(ij, v)| v.iter().map(move |(k, c)| (ij / n, ij % n, k, c.clone())))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(SparseVec::is_empty)
    }

    pub fn eval_sparse(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                acc.add_scaled(&(x * y), self.value(i, j));
            }
        }
        acc.finish()
    }

    pub fn eval(&self, a: &Element, b: &Element) -> Element {
        let v = self.eval_sparse(&a.to_sparse(), &b.to_sparse());
        Element::from_sparse(&v, self.algebra.field(), self.dim())
    }

    /// Flattened coordinates, index `(i * n + j) * n + k`.
    pub fn to_coords(&self) -> SparseVec {
        let n = self.dim();
        SparseVec::from_entries(
            self.table
                .iter()
                .enumerate()
                .flat_map(|(ij, v)| v.iter().map(move |(k, c)| (ij * n + k, c.clone()))),
        )
    }

    pub fn from_coords(algebra: &Arc<FiniteAlgebra>, coords: &SparseVec) -> Self {
        let n = algebra.dim();
        let mut cells: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n * n];
        for (idx, c) in coords.iter() {
            cells[idx / n].push((idx % n, c.clone()));
        }
        Bracket {
            algebra: Arc::clone(algebra),
            table: cells.into_iter().map(SparseVec::from_entries).collect(),
        }
    }

    fn zip_with(&self, other: &Bracket, factor: &Scalar) -> Bracket {
        assert!(
            same_algebra(&self.algebra, &other.algebra),
            "brackets live on different algebras"
        );
        Bracket {
            algebra: Arc::clone(&self.algebra),
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| a.add_scaled(factor, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Bracket) -> Bracket {
        self.zip_with(other, &self.algebra.field().one())
    }

    pub fn sub(&self, other: &Bracket) -> Bracket {
        self.zip_with(other, &-self.algebra.field().one())
    }

    pub fn scale(&self, c: &Scalar) -> Bracket {
        Bracket {
            algebra: Arc::clone(&self.algebra),
            table: self.table.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    /// `(a, b) -> [b, a]`.
    pub fn transposed(&self) -> Bracket {
        Bracket::from_basis_fn(&self.algebra, |i, j| self.value(j, i).clone())
    }

    /// Same tensor viewed on a structurally equal algebra handle.
    pub fn rebased(&self, algebra: &Arc<FiniteAlgebra>) -> Result<Bracket> {
        if !same_algebra(&self.algebra, algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Bracket {
            algebra: Arc::clone(algebra),
            table: self.table.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_poly;
    use crate::exactlin::Field;

    #[test]
    fn eval_is_bilinear() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap());
        let q = a.field();
        let phi = Bracket::from_entries(&a, &[(0, 1, 1, q.one()), (1, 0, 1, -q.one())]).unwrap();
        assert_eq!(phi.eval(&a.one(), &a.basis(1)), a.basis(1));
        assert!(phi.eval(&a.zero(), &a.basis(1)).is_zero());
        let s = a.element(&[(0, 2), (1, 3)]);
        let t = a.element(&[(0, -1), (1, 5)]);
        // [2+3x, -1+5x] = 2*5 [1,x] + 3*(-1) [x,1] = 13x
        assert_eq!(phi.eval(&s, &t), a.element(&[(1, 13)]));
    }

    #[test]
    fn coords_round_trip() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2, 2]).unwrap());
        let q = a.field();
        let br = Bracket::from_entries(&a, &[(1, 2, 3, q.one()), (2, 1, 3, -q.one()), (0, 3, 1, q.from_i64(4))]).unwrap();
        assert_eq!(Bracket::from_coords(&a, &br.to_coords()), br);
        assert!(Bracket::from_entries(&a, &[(0, 9, 0, q.one())]).is_err());
    }
}
