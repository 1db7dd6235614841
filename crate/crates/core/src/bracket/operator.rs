use std::sync::Arc;

use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, Matrix, Scalar, SparseVec};

/// Linear endomorphism of an algebra. Column `j` of the matrix is the
/// image of `e_j`.
#[derive(Debug, Clone)]
pub struct LinearOp {
    algebra: Arc<FiniteAlgebra>,
    images: Vec<SparseVec>,
}

impl PartialEq for LinearOp {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.images == other.images
    }
}

impl Eq for LinearOp {}

pub(crate) fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LinearOp {
    pub fn from_images(algebra: &Arc<FiniteAlgebra>, images: Vec<SparseVec>) -> Result<Self> {
        let n = algebra.dim();
        if images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: images.len(),
            });
        }
        for img in &images {
            if let Some(m) = img.max_index() {
                if m >= n {
                    return Err(Error::IndexOutOfRange { index: m, dim: n });
                }
            }
        }
        Ok(LinearOp {
            algebra: Arc::clone(algebra),
            images,
        })
    }

    pub fn from_matrix(algebra: &Arc<FiniteAlgebra>, m: &Matrix) -> Result<Self> {
        let n = algebra.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows().max(m.cols()),
            });
        }
        if m.field() != algebra.field() {
            return Err(Error::FieldMismatch(algebra.field(), m.field()));
        }
        let images = (0..n).map(|j| SparseVec::from_dense(&m.column(j))).collect();
        LinearOp::from_images(algebra, images)
    }

    pub fn from_fn(algebra: &Arc<FiniteAlgebra>, f: impl Fn(usize) -> SparseVec) -> Self {
        let images = (0..algebra.dim()).map(f).collect();
        LinearOp {
            algebra: Arc::clone(algebra),
            images,
        }
    }

    pub fn zero(algebra: &Arc<FiniteAlgebra>) -> Self {
        Self::from_fn(algebra, |_| SparseVec::new())
    }

    pub fn identity(algebra: &Arc<FiniteAlgebra>) -> Self {
        let f = algebra.field();
        Self::from_fn(algebra, |i| SparseVec::unit(i, f))
    }

    /// `R_u : a -> a u`.
    pub fn multiplication(algebra: &Arc<FiniteAlgebra>, u: &Element) -> Self {
        let us = u.to_sparse();
        let f = algebra.field();
        Self::from_fn(algebra, |i| algebra.mul_sparse(&SparseVec::unit(i, f), &us))
    }

    /// `∂/∂x_v` on a monomial algebra, coefficients reduced in the field.
    ///
    /// Only a derivation when differentiation is compatible with the
    /// truncation (e.g. reduced polynomial algebras, or bound 2 anywhere).
    pub fn partial(algebra: &Arc<FiniteAlgebra>, var: usize) -> Result<Self> {
        let m = algebra
            .monomials()
            .ok_or_else(|| Error::Precondition("partial derivatives need a monomial basis".into()))?;
        if var >= m.nvars() {
            return Err(Error::IndexOutOfRange {
                index: var,
                dim: m.nvars(),
            });
        }
        let f = algebra.field();
        Ok(Self::from_fn(algebra, |i| {
            let e = m.exponents(i);
            if e[var] == 0 {
                return SparseVec::new();
            }
            let mut lowered = e.to_vec();
            lowered[var] -= 1;
            let k = m.index_of(&lowered).expect("lowering stays inside the bounds");
            SparseVec::from_entries([(k, f.from_i64(i64::from(e[var])))])
        }))
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    /// Image of the basis element `e_j`.
    pub fn image(&self, j: usize) -> &SparseVec {
        &self.images[j]
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, c) in v.iter() {
            acc.add_scaled(c, &self.images[j]);
        }
        acc.finish()
    }

    pub fn apply(&self, a: &Element) -> Element {
        Element::from_sparse(&self.apply_sparse(&a.to_sparse()), self.algebra.field(), self.dim())
    }

    pub fn matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(self.algebra.field(), n, n);
        for (j, img) in self.images.iter().enumerate() {
            for (i, c) in img.iter() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    /// Row-major flattening of the matrix, index `i * n + j`.
    pub fn to_coords(&self) -> SparseVec {
        let n = self.dim();
        SparseVec::from_entries(
            self.images
                .iter()
                .enumerate()
                .flat_map(|(j, img)| img.iter().map(move |(i, c)| (i * n + j, c.clone()))),
        )
    }

    pub fn from_coords(algebra: &Arc<FiniteAlgebra>, coords: &SparseVec) -> Self {
        let n = algebra.dim();
        let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for (idx, c) in coords.iter() {
            cols[idx % n].push((idx / n, c.clone()));
        }
        Self::from_fn(algebra, |j| SparseVec::from_entries(cols[j].clone()))
    }

    fn check_compatible(&self, other: &LinearOp) {
        assert!(
            same_algebra(&self.algebra, &other.algebra),
            "operators live on different algebras"
        );
    }

    pub fn add(&self, other: &LinearOp) -> LinearOp {
        self.check_compatible(other);
        let one = self.algebra.field().one();
        LinearOp::from_fn(&self.algebra, |j| self.images[j].add_scaled(&one, &other.images[j]))
    }

    pub fn sub(&self, other: &LinearOp) -> LinearOp {
        self.add(&other.scale(&-self.algebra.field().one()))
    }

    pub fn scale(&self, c: &Scalar) -> LinearOp {
        LinearOp::from_fn(&self.algebra, |j| self.images[j].scaled(c))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOp) -> LinearOp {
        self.check_compatible(other);
        LinearOp::from_fn(&self.algebra, |j| self.apply_sparse(&other.images[j]))
    }

    /// `a -> u · self(a)`.
    pub fn left_mul(&self, u: &Element) -> LinearOp {
        let us = u.to_sparse();
        LinearOp::from_fn(&self.algebra, |j| self.algebra.mul_sparse(&us, &self.images[j]))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(SparseVec::is_empty)
    }

    /// Basis pairs `(i, j)`, `i <= j`, where `D(e_i e_j) != D(e_i) e_j + e_i D(e_j)`.
    pub fn leibniz_defects(&self) -> Vec<(usize, usize)> {
        let a = &*self.algebra;
        let n = a.dim();
        let f = a.field();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let lhs = self.apply_sparse(a.product(i, j));
                let r1 = a.mul_sparse(&self.images[i], &SparseVec::unit(j, f));
                let r2 = a.mul_sparse(&SparseVec::unit(i, f), &self.images[j]);
                let one = f.one();
                if lhs != r1.add_scaled(&one, &r2) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_derivation(&self) -> bool {
        self.leibniz_defects().is_empty()
    }

    /// `D(ab) = D(a)b + D(b)a - D(1)ab` on all basis pairs.
    pub fn is_generalized_derivation(&self) -> bool {
        let a = &*self.algebra;
        let n = a.dim();
        let f = a.field();
        let d1 = self.apply_sparse(&a.unit_sparse());
        let one = f.one();
        let minus = -&one;
        (0..n).all(|i| {
            (i..n).all(|j| {
                let lhs = self.apply_sparse(a.product(i, j));
                let rhs = a
                    .mul_sparse(&self.images[i], &SparseVec::unit(j, f))
                    .add_scaled(&one, &a.mul_sparse(&self.images[j], &SparseVec::unit(i, f)))
                    .add_scaled(&minus, &a.mul_sparse(&d1, a.product(i, j)));
                lhs == rhs
            })
        })
    }
}
