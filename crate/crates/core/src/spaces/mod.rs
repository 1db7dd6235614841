//! Solution spaces of the bracket and operator identities, computed as
//! exact kernels, plus the canonical-form extractions built on them.

mod standard;
mod univariate;
mod x2;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::bracket::{yoyo_residual_basis, Bracket, LinearOp};
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, Field, Scalar, SparseVec, Subspace};

pub use standard::{standardness_extract, StandardForm};
pub use univariate::{
    check_univariate_like, extract_kminus_canonical, extract_kplus_canonical, KPlusCanonical,
    UnivariateLikeReport,
};
pub use x2::{x2_bracket, x2_canonical_extract, x2_factor, X2Canonical};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BracketKind {
    KMinus,
    KPlus,
}

/// `K⁻(A)` or `K⁺(A)`, held as a subspace of flattened bracket coordinates.
#[derive(Debug, Clone)]
pub struct BracketSpace {
    algebra: Arc<FiniteAlgebra>,
    kind: BracketKind,
    space: Subspace,
}

impl BracketSpace {
    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn kind(&self) -> BracketKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Subspace of `field^(n³)` in [`Bracket::to_coords`] layout.
    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> Vec<Bracket> {
        self.space
            .basis()
            .iter()
            .map(|v| Bracket::from_coords(&self.algebra, v))
            .collect()
    }

    pub fn contains(&self, br: &Bracket) -> bool {
        br.dim() == self.algebra.dim() && self.space.contains_sparse(&br.to_coords())
    }

    /// Coordinates of `br` in [`basis`](Self::basis), if it lies in the space.
    pub fn coordinates(&self, br: &Bracket) -> Option<Vec<Scalar>> {
        self.space.coordinates(&br.to_coords())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorKind {
    Der,
    GDer,
    Multiplications,
}

/// `Der(A)`, `GDer(A)` or `{R_u}`, held as a subspace of flattened matrices.
#[derive(Debug, Clone)]
pub struct OperatorSpace {
    algebra: Arc<FiniteAlgebra>,
    kind: OperatorKind,
    space: Subspace,
}

impl OperatorSpace {
    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Subspace of `field^(n²)` in [`LinearOp::to_coords`] layout.
    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> Vec<LinearOp> {
        self.space
            .basis()
            .iter()
            .map(|v| LinearOp::from_coords(&self.algebra, v))
            .collect()
    }

    pub fn contains(&self, op: &LinearOp) -> bool {
        op.dim() == self.algebra.dim() && self.space.contains_sparse(&op.to_coords())
    }

    pub fn coordinates(&self, op: &LinearOp) -> Option<Vec<Scalar>> {
        self.space.coordinates(&op.to_coords())
    }
}

fn require_valid(algebra: &FiniteAlgebra) -> Result<()> {
    let v = algebra.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidAlgebra(format!("{} violation(s), first: {:?}", v.len(), v[0])))
    }
}

/// Kernel of the linear map whose value on the `t`-th unknown is `columns[t]`
/// (sparse, indexed by constraint row).
pub(crate) fn kernel_of_columns(field: Field, columns: Vec<Vec<(usize, Scalar)>>) -> Vec<SparseVec> {
    let unknowns = columns.len();
    let mut rows: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (t, col) in columns.into_iter().enumerate() {
        for (r, c) in col {
            rows.entry(r).or_default().push((t, c));
        }
    }
    let mut e = Echelon::new(field, unknowns);
    for (_, entries) in rows {
        e.insert(&SparseVec::from_entries(entries));
        if e.rank() == unknowns {
            break;
        }
    }
    e.null_space()
}

/// Unknown `t` of a symmetric or antisymmetric bracket: pair `(i, j)` and output `k`.
fn bracket_unknowns(n: usize, kind: BracketKind) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        let start = if kind == BracketKind::KMinus { i + 1 } else { i };
        for j in start..n {
            for k in 0..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

fn bracket_space(algebra: &Arc<FiniteAlgebra>, kind: BracketKind) -> Result<BracketSpace> {
    require_valid(algebra)?;
    let n = algebra.dim();
    let f = algebra.field();
    let unknowns = bracket_unknowns(n, kind);
    let sign = match kind {
        BracketKind::KMinus => -f.one(),
        BracketKind::KPlus => f.one(),
    };
    let unit = |&(i, j, k): &(usize, usize, usize)| {
        let mut entries = vec![(i, j, k, f.one())];
        if i != j {
            entries.push((j, i, k, sign.clone()));
        }
        Bracket::from_entries(algebra, &entries).expect("indices in range")
    };
    // The residual is symmetric in its first two slots and only reads the
    // bracket with the third slot in second position.
    let columns: Vec<Vec<(usize, Scalar)>> = unknowns
        .par_iter()
        .map(|t| {
            let br = unit(t);
            let mut col = Vec::new();
            let mut cs = vec![t.0, t.1];
            cs.dedup();
            for a in 0..n {
                for b in a..n {
                    for &c in &cs {
                        let base = ((a * n + b) * n + c) * n;
                        for (r, x) in yoyo_residual_basis(&br, a, b, c).iter() {
                            col.push((base + r, x.clone()));
                        }
                    }
                }
            }
            col
        })
        .collect();
    let kernel = kernel_of_columns(f, columns);
    let vectors = kernel
        .iter()
        .map(|v| {
            let mut entries = Vec::new();
            for (t, c) in v.iter() {
                let (i, j, k) = unknowns[t];
                entries.push(((i * n + j) * n + k, c.clone()));
                if i != j {
                    entries.push(((j * n + i) * n + k, &sign * c));
                }
            }
            SparseVec::from_entries(entries)
        })
        .collect();
    Ok(BracketSpace {
        algebra: Arc::clone(algebra),
        kind,
        space: Subspace::from_sparse(f, n * n * n, vectors)?,
    })
}

/// Anticommutative brackets with `[ab,c] = [a,c]b + [b,c]a - [1,c]ab`.
pub fn kminus(algebra: &Arc<FiniteAlgebra>) -> Result<BracketSpace> {
    bracket_space(algebra, BracketKind::KMinus)
}

/// Commutative brackets with `[ab,c] = [a,c]b + [b,c]a - [1,c]ab`.
pub fn kplus(algebra: &Arc<FiniteAlgebra>) -> Result<BracketSpace> {
    bracket_space(algebra, BracketKind::KPlus)
}

/// `D(e_a e_b) - D(e_a)e_b - e_a D(e_b) [+ D(1) e_a e_b]` over all `a <= b`.
fn leibniz_column(op: &LinearOp, generalized: bool) -> Vec<(usize, Scalar)> {
    let alg = op.algebra();
    let n = alg.dim();
    let f = alg.field();
    let one = f.one();
    let m1 = -f.one();
    let d1 = op.apply_sparse(&alg.unit_sparse());
    let mut col = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut r = op
                .apply_sparse(alg.product(a, b))
                .add_scaled(&m1, &alg.mul_sparse(op.image(a), &SparseVec::unit(b, f)))
                .add_scaled(&m1, &alg.mul_sparse(&SparseVec::unit(a, f), op.image(b)));
            if generalized {
                r = r.add_scaled(&one, &alg.mul_sparse(&d1, alg.product(a, b)));
            }
            let base = (a * n + b) * n;
            col.extend(r.iter().map(|(k, c)| (base + k, c.clone())));
        }
    }
    col
}

fn operator_space(algebra: &Arc<FiniteAlgebra>, generalized: bool) -> Result<OperatorSpace> {
    require_valid(algebra)?;
    let n = algebra.dim();
    let f = algebra.field();
    let columns = (0..n * n)
        .into_par_iter()
        .map(|t| {
            let op = LinearOp::from_coords(algebra, &SparseVec::unit(t, f));
            leibniz_column(&op, generalized)
        })
        .collect();
    let kernel = kernel_of_columns(f, columns);
    Ok(OperatorSpace {
        algebra: Arc::clone(algebra),
        kind: if generalized { OperatorKind::GDer } else { OperatorKind::Der },
        space: Subspace::from_sparse(f, n * n, kernel)?,
    })
}

pub fn der(algebra: &Arc<FiniteAlgebra>) -> Result<OperatorSpace> {
    operator_space(algebra, false)
}

/// Generalized derivations: `D(ab) = D(a)b + D(b)a - D(1)ab`.
pub fn gder(algebra: &Arc<FiniteAlgebra>) -> Result<OperatorSpace> {
    operator_space(algebra, true)
}

/// `{R_u : u ∈ A}`.
pub fn multiplications(algebra: &Arc<FiniteAlgebra>) -> Result<OperatorSpace> {
    require_valid(algebra)?;
    let n = algebra.dim();
    let vectors = (0..n)
        .map(|i| LinearOp::multiplication(algebra, &algebra.basis(i)).to_coords())
        .collect();
    Ok(OperatorSpace {
        algebra: Arc::clone(algebra),
        kind: OperatorKind::Multiplications,
        space: Subspace::from_sparse(algebra.field(), n * n, vectors)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_poly;
    use crate::bracket::{is_anticommutative, is_commutative};

    fn q(bounds: &[u32]) -> Arc<FiniteAlgebra> {
        Arc::new(truncated_poly(Field::Rationals, bounds).unwrap())
    }

    fn yoyo_holds(br: &Bracket) -> bool {
        let n = br.dim();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| yoyo_residual_basis(br, a, b, c).is_empty())))
    }

    #[test]
    fn x2_space_dimensions() {
        let a = q(&[2]);
        let km = kminus(&a).unwrap();
        let kp = kplus(&a).unwrap();
        assert_eq!((km.dim(), kp.dim()), (1, 4));
        for br in km.basis() {
            assert!(yoyo_holds(&br) && is_anticommutative(&br).holds());
        }
        for br in kp.basis() {
            assert!(yoyo_holds(&br) && is_commutative(&br).holds());
        }
    }

    #[test]
    fn ground_field_has_no_anticommutative_brackets() {
        let k = Arc::new(FiniteAlgebra::ground(Field::Rationals));
        assert_eq!(kminus(&k).unwrap().dim(), 0);
    }

    #[test]
    fn operator_spaces() {
        let a = q(&[2]);
        assert_eq!(der(&a).unwrap().dim(), 1);
        assert_eq!(gder(&a).unwrap().dim(), 3);
        let m = multiplications(&a).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.contains(&LinearOp::identity(&a)));

        let b = q(&[2, 2]);
        let d = der(&b).unwrap();
        assert_eq!(d.dim(), 4);
        // x∂x, xy∂x, y∂y, xy∂y
        let (x, y) = (b.variable(0).unwrap(), b.variable(1).unwrap());
        let xy = b.multiply(&x, &y);
        let dx = LinearOp::partial(&b, 0).unwrap();
        let dy = LinearOp::partial(&b, 1).unwrap();
        let expected: Vec<LinearOp> = vec![dx.left_mul(&x), dx.left_mul(&xy), dy.left_mul(&y), dy.left_mul(&xy)];
        let span = Subspace::from_sparse(b.field(), 16, expected.iter().map(LinearOp::to_coords).collect()).unwrap();
        assert!(span.equals(d.subspace()).unwrap());
        for op in d.basis() {
            assert!(op.is_derivation());
        }
        let g = gder(&b).unwrap();
        assert!(d.subspace().is_subspace_of(g.subspace()).unwrap());
        assert!(multiplications(&b).unwrap().subspace().is_subspace_of(g.subspace()).unwrap());
        for op in g.basis() {
            assert!(op.is_generalized_derivation());
        }
    }

    #[test]
    fn invalid_algebra_is_rejected() {
        let f = Field::Rationals;
        let bad = FiniteAlgebra::new(
            f,
            vec!["1".into(), "x".into()],
            vec![f.one(), f.zero()],
            &[(0, 0, 0, f.one()), (0, 1, 1, f.one()), (1, 0, 0, f.one())],
        );
        if let Ok(bad) = bad {
            assert!(kminus(&Arc::new(bad)).is_err());
        }
    }
}
