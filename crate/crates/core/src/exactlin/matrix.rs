use std::fmt;

use super::echelon::Echelon;
use super::sparse::SparseVec;
use super::subspace::Subspace;
use super::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over a single field, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(field, x.field()));
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integer entries.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged integer matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    pub fn from_sparse_rows(field: Field, cols: usize, rows: &[SparseVec]) -> Self {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn sparse_row(&self, i: usize) -> SparseVec {
        SparseVec::from_dense(self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Row vector times matrix: `y · self`.
    pub fn left_mul_vec(&self, y: &[Scalar]) -> Result<Vec<Scalar>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: y.len(),
            });
        }
        let mut out = vec![self.field.zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    out[j] += &(yi * a);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            cols: self.cols,
            rows: (0..self.rows).map(|i| self.sparse_row(i)).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row-sparse matrix used for the large constraint systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    cols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(field: Field, cols: usize) -> Self {
        SparseMatrix {
            field,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: SparseVec) {
        debug_assert!(row.max_index().map_or(true, |m| m < self.cols));
        self.rows.push(row);
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_sparse_rows(self.field, self.cols, &self.rows)
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.cols);
        for row in &self.rows {
            e.insert(row);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn kernel(&self) -> Subspace {
        let e = self.echelon();
        Subspace::from_sparse(self.field, self.cols, e.null_space())
            .expect("null-space vectors share the matrix field")
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.rows.iter().map(|r| r.dot_dense(x, self.field)).collect()
    }
}

/// Reduced row-echelon form; zero rows are kept at the bottom so the shape
/// is unchanged.
pub fn rref(m: &Matrix) -> Matrix {
    let rows = m.to_sparse().echelon().rref_rows();
    let mut out = Matrix::zeros(m.field, m.rows, m.cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter() {
            out.set(i, j, x.clone());
        }
    }
    out
}

pub fn rank(m: &Matrix) -> usize {
    m.to_sparse().rank()
}

pub fn kernel(m: &Matrix) -> Subspace {
    m.to_sparse().kernel()
}

/// Outcome of solving `m · x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<Scalar>),
    /// `certificate · m = 0` while `certificate · b != 0`.
    Infeasible { certificate: Vec<Scalar> },
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Solved(_))
    }
}

pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Solution> {
    solve_sparse(&m.to_sparse(), b)
}

/// Solves by reducing `[m | b | I]`; a pivot in the `b` column exposes a
/// left-null combination of the rows, read off from the identity block.
pub fn solve_sparse(m: &SparseMatrix, b: &[Scalar]) -> Result<Solution> {
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: b.len(),
        });
    }
    let field = m.field;
    let n = m.cols;
    let width = n + 1 + m.nrows();
    let mut e = Echelon::new(field, width);
    for (i, (row, bi)) in m.rows.iter().zip(b).enumerate() {
        let mut entries: Vec<(usize, Scalar)> = row.iter().map(|(j, x)| (j, x.clone())).collect();
        entries.push((n, bi.clone()));
        entries.push((n + 1 + i, field.one()));
        e.insert(&SparseVec::from_entries(entries));
    }
    let rows = e.rref_rows();
    let mut x = vec![field.zero(); n];
    for row in &rows {
        let (pivot, _) = row.leading().expect("echelon rows are nonzero");
        if pivot == n {
            // normalized so the first nonzero entry is 1
            let y = row.window(n + 1, width);
            let lead = y.leading().expect("certificate is nonzero").1.inv().unwrap();
            let certificate = y.scaled(&lead).to_dense(m.nrows(), field);
            return Ok(Solution::Infeasible { certificate });
        }
        if pivot < n {
            if let Some(v) = row.get(n) {
                x[pivot] = v.clone();
            }
        }
    }
    Ok(Solution::Solved(x))
}

/// Checks an infeasibility certificate against the system it claims to refute.
pub fn verify_certificate(m: &Matrix, b: &[Scalar], y: &[Scalar]) -> Result<bool> {
    let left = m.left_mul_vec(y)?;
    if b.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: b.len(),
        });
    }
    let mut yb = m.field.zero();
    for (a, c) in y.iter().zip(b) {
        yb += &(a * c);
    }
    Ok(left.iter().all(Scalar::is_zero) && !yb.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rref_of_identity_and_zero() {
        let id = Matrix::identity(q(), 3);
        assert_eq!(rref(&id), id);
        let z = Matrix::zeros(q(), 2, 3);
        assert_eq!(rref(&z), z);
    }

    #[test]
    fn rref_hand_elimination() {
        let m = Matrix::from_i64(q(), &[&[2, 4], &[1, 2]]);
        assert_eq!(rref(&m), Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_edge_cases() {
        assert_eq!(kernel(&Matrix::identity(q(), 4)).dim(), 0);
        assert_eq!(kernel(&Matrix::zeros(q(), 2, 5)).dim(), 5);
    }

    #[test]
    fn kernel_over_f3_matches_enumeration() {
        let f3 = Field::prime(3).unwrap();
        let m = Matrix::from_i64(f3, &[&[1, 1]]);
        // all v in F_3^2 with v0 + v1 = 0
        let mut sols = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                if (a + b) % 3 == 0 && (a, b) != (0, 0) {
                    sols.push(vec![f3.from_i64(a), f3.from_i64(b)]);
                }
            }
        }
        assert_eq!(sols.len(), 2);
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis_dense(), vec![vec![f3.from_i64(1), f3.from_i64(2)]]);
        for s in &sols {
            assert!(k.contains(s).unwrap());
        }
    }

    #[test]
    fn solve_cases() {
        let b: Vec<Scalar> = [3, 5].iter().map(|&v| q().from_i64(v)).collect();
        assert_eq!(
            solve(&Matrix::identity(q(), 2), &b).unwrap(),
            Solution::Solved(b.clone())
        );
        let m = Matrix::from_i64(q(), &[&[1, 1], &[1, 2]]);
        assert_eq!(
            solve(&m, &b).unwrap(),
            Solution::Solved(vec![q().from_i64(1), q().from_i64(2)])
        );
        let z = Matrix::zeros(q(), 2, 2);
        let b2 = vec![q().zero(), q().from_i64(7)];
        match solve(&z, &b2).unwrap() {
            Solution::Infeasible { certificate } => {
                assert_eq!(certificate, vec![q().zero(), q().one()]);
                assert!(verify_certificate(&z, &b2, &certificate).unwrap());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Matrix::identity(q(), 2);
        assert!(matches!(
            solve(&m, &[q().one()]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
