use super::echelon::Echelon;
use super::sparse::SparseVec;
use super::{Field, Scalar};
use crate::error::{Error, Result};

/// Subspace of `field^ambient` held by its canonical rref basis, so equal
/// subspaces compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: (0..ambient).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    pub fn from_sparse(field: Field, ambient: usize, vectors: Vec<SparseVec>) -> Result<Self> {
        let mut e = Echelon::new(field, ambient);
        for v in &vectors {
            if let Some(m) = v.max_index() {
                if m >= ambient {
                    return Err(Error::IndexOutOfRange { index: m, dim: ambient });
                }
            }
            if let Some((_, x)) = v.iter().find(|(_, x)| x.field() != field) {
                return Err(Error::FieldMismatch(field, x.field()));
            }
            e.insert(v);
        }
        Ok(Subspace {
            field,
            ambient,
            basis: e.rref_rows(),
        })
    }

    pub fn from_vectors(field: Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let mut sparse = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
            sparse.push(SparseVec::from_dense(v));
        }
        Subspace::from_sparse(field, ambient, sparse)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn basis_dense(&self) -> Vec<Vec<Scalar>> {
        self.basis
            .iter()
            .map(|b| b.to_dense(self.ambient, self.field))
            .collect()
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.ambient);
        for b in &self.basis {
            e.insert(b);
        }
        e
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(self.contains_sparse(&SparseVec::from_dense(v)))
    }

    pub fn contains_sparse(&self, v: &SparseVec) -> bool {
        self.echelon().contains(v)
    }

    /// Coordinates of `v` in the rref basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let e = self.echelon();
        if !e.contains(v) {
            return None;
        }
        // rref basis: the coefficient of basis row i is v's entry at its pivot
        Some(
            self.basis
                .iter()
                .map(|b| {
                    let (p, _) = b.leading().expect("basis rows are nonzero");
                    v.get(p).cloned().unwrap_or_else(|| self.field.zero())
                })
                .collect(),
        )
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let mut e = self.echelon();
        for b in &other.basis {
            e.insert(b);
        }
        Ok(Subspace {
            field: self.field,
            ambient: self.ambient,
            basis: e.rref_rows(),
        })
    }

    /// Zassenhaus: reduce rows `(u | u)` and `(v | 0)`; rows whose left
    /// half vanishes span the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let n = self.ambient;
        let mut e = Echelon::new(self.field, 2 * n);
        for u in &self.basis {
            let doubled = u
                .iter()
                .map(|(i, x)| (i, x.clone()))
                .chain(u.iter().map(|(i, x)| (i + n, x.clone())));
            e.insert(&SparseVec::from_entries(doubled));
        }
        for v in &other.basis {
            e.insert(v);
        }
        let rows: Vec<SparseVec> = e
            .rref_rows()
            .into_iter()
            .filter(|r| r.leading().is_some_and(|(p, _)| p >= n))
            .map(|r| r.window(n, 2 * n))
            .collect();
        Subspace::from_sparse(self.field, n, rows)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        let e = other.echelon();
        Ok(self.basis.iter().all(|b| e.contains(b)))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.basis == other.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_basics() {
        let q = Field::Rationals;
        let x = Subspace::from_vectors(q, 2, &[vec![q.one(), q.zero()]]).unwrap();
        let y = Subspace::from_vectors(q, 2, &[vec![q.zero(), q.one()]]).unwrap();
        let zero = Subspace::zero(q, 2);
        assert!(x.sum(&zero).unwrap().equals(&x).unwrap());
        assert!(x.intersect(&x).unwrap().equals(&x).unwrap());
        assert!(x.sum(&y).unwrap().equals(&Subspace::full(q, 2)).unwrap());
        assert_eq!(x.intersect(&y).unwrap().dim(), 0);
    }

    #[test]
    fn mismatch_is_an_error() {
        let q = Field::Rationals;
        let a = Subspace::full(q, 2);
        let b = Subspace::full(q, 3);
        assert!(a.sum(&b).is_err());
        let c = Subspace::full(Field::prime(3).unwrap(), 2);
        assert!(matches!(a.intersect(&c), Err(Error::FieldMismatch(..))));
    }
}
