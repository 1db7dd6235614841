//! Finite-dimensional commutative unital algebras given by structure
//! constants, with monomial (truncated polynomial) constructors and the
//! tensor product.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, Field, Matrix, Scalar, SparseVec};

/// Coordinate vector of an algebra element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<Scalar>,
}

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Element { coords }
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        Element {
            coords: vec![field.zero(); dim],
        }
    }

    pub fn from_sparse(v: &SparseVec, field: Field, dim: usize) -> Self {
        Element {
            coords: v.to_dense(dim, field),
        }
    }

    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_dense(&self.coords)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension mismatch");
        Element {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension mismatch");
        Element {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

/// Exponent tuples indexing a monomial basis.
///
/// `truncated_poly` enumerates them graded-lexicographically with 1 first;
/// tensor products of monomial algebras keep the product order instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    var_names: Vec<String>,
    bounds: Vec<u32>,
    exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn graded(bounds: &[u32]) -> Self {
        let mut exps: Vec<Vec<u32>> = vec![vec![]];
        for &b in bounds {
            exps = exps
                .into_iter()
                .flat_map(|e| {
                    (0..b).map(move |k| {
                        let mut e = e.clone();
                        e.push(k);
                        e
                    })
                })
                .collect();
        }
        exps.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        Self::from_exponents(default_var_names(bounds.len()), bounds.to_vec(), exps)
    }

    fn from_exponents(var_names: Vec<String>, bounds: Vec<u32>, exponents: Vec<Vec<u32>>) -> Self {
        let index = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialBasis {
            var_names,
            bounds,
            exponents,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exponents[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.exponents[i].iter().sum()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn label(&self, i: usize) -> String {
        monomial_label(&self.var_names, &self.exponents[i])
    }
}

fn default_var_names(n: usize) -> Vec<String> {
    match n {
        1..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

fn monomial_label(names: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// A violated algebra law, by basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Violation {
    Commutativity { i: usize, j: usize },
    Associativity { i: usize, j: usize, k: usize },
    Unit { i: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Commutativity { i, j } => write!(f, "e{i}*e{j} != e{j}*e{i}"),
            Violation::Associativity { i, j, k } => {
                write!(f, "(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")
            }
            Violation::Unit { i } => write!(f, "1*e{i} != e{i}"),
        }
    }
}

/// Commutative unital associative algebra by structure constants.
///
/// The product table is kept exactly as supplied so that `validate` can
/// report asymmetric input; for a valid algebra the canonical constants are
/// the `i <= j` half returned by [`FiniteAlgebra::structure_constants`].
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    field: Field,
    labels: Vec<String>,
    unit: Vec<Scalar>,
    products: Vec<SparseVec>,
    monomials: Option<MonomialBasis>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field
                && self.unit == other.unit
                && self.products == other.products)
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    /// Builds an algebra from `(i, j, k, c)` entries meaning `e_i e_j += c e_k`.
    ///
    /// A product `e_j e_i` with `j > i` that never appears in `entries`
    /// mirrors `e_i e_j`; if it does appear it is taken as given.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        unit: Vec<Scalar>,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        let n = labels.len();
        if unit.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: unit.len(),
            });
        }
        if let Some(x) = unit.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(field, x.field()));
        }
        let mut acc: Vec<Accumulator> = vec![Accumulator::new(); n * n];
        let mut lower_given = vec![false; n * n];
        for (i, j, k, c) in entries {
            for &idx in [i, j, k] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            acc[i * n + j].add(*k, c);
            if i > j {
                lower_given[i * n + j] = true;
            }
        }
        let mut products: Vec<SparseVec> = acc.into_iter().map(Accumulator::finish).collect();
        for i in 0..n {
            for j in 0..i {
                if !lower_given[i * n + j] {
                    products[i * n + j] = products[j * n + i].clone();
                }
            }
        }
        Ok(FiniteAlgebra {
            field,
            labels,
            unit,
            products,
            monomials: None,
        })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Self {
        truncated_poly(field, &[]).expect("empty bounds are valid")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn monomials(&self) -> Option<&MonomialBasis> {
        self.monomials.as_ref()
    }

    /// Per-basis-element total degree, when the basis is monomial.
    pub fn degree(&self, i: usize) -> Option<u32> {
        self.monomials.as_ref().map(|m| m.degree(i))
    }

    pub fn unit_coords(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn unit_sparse(&self) -> SparseVec {
        SparseVec::from_dense(&self.unit)
    }

    pub fn one(&self) -> Element {
        Element::new(self.unit.clone())
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.field, self.dim())
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut e = self.zero();
        e.coords[i] = self.field.one();
        e
    }

    /// Element from `(basis index, coefficient)` pairs.
    pub fn element(&self, terms: &[(usize, i64)]) -> Element {
        let mut e = self.zero();
        for &(i, c) in terms {
            e.coords[i] += &self.field.from_i64(c);
        }
        e
    }

    pub fn scalar(&self, c: i64) -> Element {
        self.one().scale(&self.field.from_i64(c))
    }

    /// Basis element for a monomial given by its exponent tuple.
    pub fn monomial(&self, exps: &[u32]) -> Option<Element> {
        let i = self.monomials.as_ref()?.index_of(exps)?;
        Some(self.basis(i))
    }

    /// The `v`-th variable as an element (zero if its bound is 1).
    pub fn variable(&self, v: usize) -> Option<Element> {
        let m = self.monomials.as_ref()?;
        let mut exps = vec![0; m.nvars()];
        exps[v] = 1;
        Some(m.index_of(&exps).map_or_else(|| self.zero(), |i| self.basis(i)))
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i * self.dim() + j]
    }

    /// Canonical `(i, j, k, c)` constants with `i <= j`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                for (k, c) in self.product(i, j).iter() {
                    out.push((i, j, k, c.clone()));
                }
            }
        }
        out
    }

    pub fn mul_sparse(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                acc.add_scaled(&(x * y), self.product(i, j));
            }
        }
        acc.finish()
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let p = self.mul_sparse(&a.to_sparse(), &b.to_sparse());
        Element::from_sparse(&p, self.field, self.dim())
    }

    /// Matrix of `R_u : a -> a u`; column `j` holds `e_j u`.
    pub fn mult_matrix(&self, u: &Element) -> Matrix {
        let n = self.dim();
        let us = u.to_sparse();
        let mut m = Matrix::zeros(self.field, n, n);
        for j in 0..n {
            for (k, c) in self.mul_sparse(&SparseVec::unit(j, self.field), &us).iter() {
                m.set(k, j, c.clone());
            }
        }
        m
    }

    pub fn label_of(&self, e: &Element) -> String {
        let terms: Vec<String> = e
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    self.labels[i].clone()
                } else {
                    format!("{c}*{}", self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Every violated instance of commutativity, associativity and the unit law.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.product(i, j) != self.product(j, i) {
                    out.push(Violation::Commutativity { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j);
                for k in 0..n {
                    let left = self.mul_sparse(ij, &SparseVec::unit(k, self.field));
                    let right = self.mul_sparse(&SparseVec::unit(i, self.field), self.product(j, k));
                    if left != right {
                        out.push(Violation::Associativity { i, j, k });
                    }
                }
            }
        }
        let one = self.unit_sparse();
        for i in 0..n {
            if self.mul_sparse(&one, &SparseVec::unit(i, self.field)) != SparseVec::unit(i, self.field) {
                out.push(Violation::Unit { i });
            }
        }
        out
    }

    /// Same algebra with basis element `i` renamed to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FiniteAlgebra> {
        let n = self.dim();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Precondition("not a permutation of the basis".into()));
        }
        let mut labels = vec![String::new(); n];
        let mut unit = vec![self.field.zero(); n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            unit[perm[i]] = self.unit[i].clone();
        }
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.product(i, j).iter() {
                    entries.push((perm[i], perm[j], perm[k], c.clone()));
                }
            }
        }
        FiniteAlgebra::new(self.field, labels, unit, &entries)
    }
}

/// `K[x_1..x_n] / (x_1^{b_1}, .., x_n^{b_n})` with a graded-lex monomial basis.
pub fn truncated_poly(field: Field, bounds: &[u32]) -> Result<FiniteAlgebra> {
    if let Some(pos) = bounds.iter().position(|&b| b == 0) {
        return Err(Error::InvalidAlgebra(format!(
            "exponent bound for variable {pos} must be at least 1"
        )));
    }
    let basis = MonomialBasis::graded(bounds);
    let n = basis.len();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            let sum: Vec<u32> = basis
                .exponents(i)
                .iter()
                .zip(basis.exponents(j))
                .map(|(a, b)| a + b)
                .collect();
            if let Some(k) = basis.index_of(&sum) {
                entries.push((i, j, k, field.one()));
            }
        }
    }
    let labels = (0..n).map(|i| basis.label(i)).collect();
    let mut unit = vec![field.zero(); n];
    unit[basis.index_of(&vec![0; bounds.len()]).expect("1 is a monomial")] = field.one();
    let mut alg = FiniteAlgebra::new(field, labels, unit, &entries)?;
    alg.monomials = Some(basis);
    Ok(alg)
}

/// The reduced polynomial algebra `O_n = K[x_1..x_n]/(x_i^p)` over `F_p`.
pub fn reduced_poly(p: u64, nvars: usize) -> Result<FiniteAlgebra> {
    let field = Field::prime(p)?;
    truncated_poly(field, &vec![p as u32; nvars])
}

/// Index of `e_i ⊗ f_j` in the tensor basis.
pub fn tensor_index(dim_b: usize, i: usize, j: usize) -> usize {
    i * dim_b + j
}

/// `A ⊗ B` with basis `e_i ⊗ f_j` at index `i * dim B + j`.
pub fn tensor(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let (na, nb) = (a.dim(), b.dim());
    let idx = |i: usize, j: usize| tensor_index(nb, i, j);
    let mut entries = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    if idx(i, j) > idx(i2, j2) {
                        continue;
                    }
                    for (k, x) in a.product(i, i2).iter() {
                        for (l, y) in b.product(j, j2).iter() {
                            entries.push((idx(i, j), idx(i2, j2), idx(k, l), x * y));
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec![a.field.zero(); na * nb];
    for (i, x) in a.unit.iter().enumerate() {
        for (j, y) in b.unit.iter().enumerate() {
            unit[idx(i, j)] = x * y;
        }
    }
    let monomials = match (&a.monomials, &b.monomials) {
        (Some(ma), Some(mb)) => {
            let mut names = ma.var_names.clone();
            for v in &mb.var_names {
                let mut v = v.clone();
                while names.contains(&v) {
                    v.push('\'');
                }
                names.push(v);
            }
            let bounds = ma.bounds.iter().chain(&mb.bounds).copied().collect();
            let exps = (0..na)
                .flat_map(|i| {
                    (0..nb).map(move |j| {
                        ma.exponents(i).iter().chain(mb.exponents(j)).copied().collect()
                    })
                })
                .collect();
            Some(MonomialBasis::from_exponents(names, bounds, exps))
        }
        _ => None,
    };
    let labels = match &monomials {
        Some(m) => (0..na * nb).map(|i| m.label(i)).collect(),
        None => (0..na)
            .flat_map(|i| (0..nb).map(move |j| format!("{}⊗{}", a.labels[i], b.labels[j])))
            .collect(),
    };
    let mut alg = FiniteAlgebra::new(a.field, labels, unit, &entries)?;
    alg.monomials = monomials;
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn truncated_dimensions_and_order() {
        let a = truncated_poly(q(), &[2, 2, 2]).unwrap();
        assert_eq!(a.dim(), 8);
        assert_eq!(a.labels()[..4], ["1", "x", "y", "z"]);
        assert_eq!(a.labels()[7], "x*y*z");
        let o2 = reduced_poly(3, 2).unwrap();
        assert_eq!(o2.dim(), 9);
        assert_eq!(o2.labels(), ["1", "x", "y", "x^2", "x*y", "y^2", "x^2*y", "x*y^2", "x^2*y^2"]);
        assert!(truncated_poly(q(), &[2, 0]).is_err());
    }

    #[test]
    fn truncation_and_products() {
        let a = truncated_poly(q(), &[2]).unwrap();
        let x = a.basis(1);
        assert!(a.multiply(&x, &x).is_zero());
        assert_eq!(a.multiply(&a.one(), &x), x);
        let b = truncated_poly(q(), &[2, 2]).unwrap();
        let xy = b.multiply(&b.variable(0).unwrap(), &b.variable(1).unwrap());
        assert_eq!(xy, b.monomial(&[1, 1]).unwrap());
    }

    #[test]
    fn tensor_with_ground_field_is_identity() {
        let a = truncated_poly(q(), &[3, 2]).unwrap();
        let t = tensor(&a, &FiniteAlgebra::ground(q())).unwrap();
        assert_eq!(t.structure_constants(), a.structure_constants());
        assert_eq!(t.unit_coords(), a.unit_coords());
    }

    #[test]
    fn tensor_matches_three_variable_truncation() {
        let a = truncated_poly(q(), &[2, 2]).unwrap();
        let b = truncated_poly(q(), &[2]).unwrap();
        let t = tensor(&a, &b).unwrap();
        let c = truncated_poly(q(), &[2, 2, 2]).unwrap();
        let m = t.monomials().unwrap();
        let mc = c.monomials().unwrap();
        let perm: Vec<usize> = (0..8).map(|i| mc.index_of(m.exponents(i)).unwrap()).collect();
        assert_eq!(t.permuted(&perm).unwrap(), c);
        assert!(t.validate().is_empty());
    }

    #[test]
    fn validate_reports_commutativity_and_unit() {
        let labels = vec!["1".to_string(), "a".into(), "b".into()];
        let one = q().one();
        let unit = vec![one.clone(), q().zero(), q().zero()];
        let mut entries = vec![
            (0, 0, 0, one.clone()),
            (0, 1, 1, one.clone()),
            (0, 2, 2, one.clone()),
        ];
        entries.push((1, 2, 1, one.clone()));
        entries.push((2, 1, 2, one.clone()));
        let bad = FiniteAlgebra::new(q(), labels.clone(), unit.clone(), &entries).unwrap();
        assert!(bad.validate().contains(&Violation::Commutativity { i: 1, j: 2 }));

        let entries = vec![(0, 0, 0, one.clone()), (0, 1, 1, one.clone())];
        let broken = FiniteAlgebra::new(q(), labels, unit, &entries).unwrap();
        assert!(broken.validate().contains(&Violation::Unit { i: 2 }));
    }
}
