use std::collections::BTreeMap;

use super::{Field, Scalar};

/// Sparse coordinate vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize, field: Field) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    /// Combines duplicate indices and drops zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, Scalar)>>(entries: I) -> Self {
        let mut acc = Accumulator::new();
        for (i, c) in entries {
            acc.add(i, &c);
        }
        acc.finish()
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scaled(&self, factor: &Scalar) -> SparseVec {
        if factor.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, c)| (*i, c * factor))
                .collect(),
        }
    }

    /// `self + factor * other`, merged in one pass.
    pub fn add_scaled(&self, factor: &Scalar, other: &SparseVec) -> SparseVec {
        if factor.is_zero() || other.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, factor * y));
                        b.next();
                    } else {
                        let v = x + &(factor * y);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, factor * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot_dense(&self, dense: &[Scalar], field: Field) -> Scalar {
        let mut acc = field.zero();
        for (i, c) in &self.entries {
            acc += &(c * &dense[*i]);
        }
        acc
    }

    /// Entries with index in `start..end`, re-indexed from zero.
    pub fn window(&self, start: usize, end: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= start && *i < end)
                .map(|(i, c)| (i - start, c.clone()))
                .collect(),
        }
    }
}

/// Ordered accumulator used when assembling sparse rows term by term.
#[derive(Debug, Default, Clone)]
pub struct Accumulator {
    map: BTreeMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: usize, coef: &Scalar) {
        if coef.is_zero() {
            return;
        }
        match self.map.get_mut(&index) {
            Some(v) => *v += coef,
            None => {
                self.map.insert(index, coef.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, factor: &Scalar, v: &SparseVec) {
        if factor.is_zero() {
            return;
        }
        for (i, c) in v.iter() {
            self.add(i, &(factor * c));
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec {
            entries: self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}
