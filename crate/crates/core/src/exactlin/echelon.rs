use std::collections::HashMap;

use super::sparse::{Accumulator, SparseVec};
use super::{Field, Scalar};

/// Incrementally maintained reduced row-echelon basis of a row space.
///
/// Every stored row has leading coefficient 1 and is zero in every other
/// row's pivot column, so inserting a row needs one reduction pass plus a
/// back-elimination of the new pivot. The final form is the unique rref of
/// the inserted rows, independent of insertion order.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field, cols: usize) -> Self {
        Echelon {
            field,
            cols,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Residue of `v` modulo the current row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Scalar)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row.get(&c).map(|&r| (r, x.clone())))
            .collect();
        match hits.len() {
            0 => v.clone(),
            1 => v.add_scaled(&-&hits[0].1, &self.rows[hits[0].0]),
            _ => {
                let mut acc = Accumulator::new();
                acc.add_scaled(&self.field.one(), v);
                for (r, x) in &hits {
                    acc.add_scaled(&-x, &self.rows[*r]);
                }
                acc.finish()
            }
        }
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        debug_assert!(v.max_index().map_or(true, |m| m < self.cols));
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.leading() else {
            return false;
        };
        let r = r.scaled(&lead.inv().expect("leading entry is nonzero"));
        for row in &mut self.rows {
            if let Some(x) = row.get(pivot) {
                let x = -x;
                *row = row.add_scaled(&x, &r);
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Rows sorted by pivot column: the reduced row-echelon form.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let mut pivots: Vec<(usize, usize)> = self.pivot_row.iter().map(|(&c, &r)| (c, r)).collect();
        pivots.sort_unstable();
        pivots.into_iter().map(|(_, r)| self.rows[r].clone()).collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.pivot_row.keys().copied().collect();
        cols.sort_unstable();
        cols
    }

    /// Basis of `{x : row · x = 0 for every row}`, one vector per free column.
    pub fn null_space(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !self.is_pivot(*c)) {
            let mut entries = vec![(free, self.field.one())];
            for (&pc, &r) in &self.pivot_row {
                if let Some(x) = self.rows[r].get(free) {
                    entries.push((pc, -x));
                }
            }
            out.push(SparseVec::from_entries(entries));
        }
        out
    }
}
