use std::sync::Arc;

use super::{same_algebra, Bracket, LinearOp};
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, SparseVec};

/// A value together with non-fatal precondition warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checked<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

/// `(D ∧ F)(a, b) = D(a)F(b) - D(b)F(a)`.
pub fn wedge(d: &LinearOp, f: &LinearOp) -> Result<Bracket> {
    if !same_algebra(d.algebra(), f.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let alg = d.algebra();
    let m1 = -alg.field().one();
    Ok(Bracket::from_basis_fn(alg, |i, j| {
        let t = alg.mul_sparse(d.image(i), f.image(j));
        t.add_scaled(&m1, &alg.mul_sparse(d.image(j), f.image(i)))
    }))
}

/// `[a, b] = D(a)b - D(b)a`, i.e. `D ∧ id`. Warns when `D` is not a derivation.
pub fn from_derivation(d: &LinearOp) -> Checked<Bracket> {
    let defects = d.leibniz_defects();
    let warnings = if defects.is_empty() {
        Vec::new()
    } else {
        vec![format!(
            "operator violates the Leibniz rule on {} basis pair(s), first at {:?}",
            defects.len(),
            defects[0]
        )]
    };
    let id = LinearOp::identity(d.algebra());
    Checked {
        value: wedge(d, &id).expect("same algebra"),
        warnings,
    }
}

/// Presentation `Σ D_i ∧ F_i + D ∧ id` of an anticommutative bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeForm {
    pub pairs: Vec<(LinearOp, LinearOp)>,
    pub d: LinearOp,
}

impl WedgeForm {
    pub fn new(pairs: Vec<(LinearOp, LinearOp)>, d: LinearOp) -> Result<Self> {
        for (x, y) in &pairs {
            if !same_algebra(x.algebra(), d.algebra()) || !same_algebra(y.algebra(), d.algebra()) {
                return Err(Error::AlgebraMismatch);
            }
        }
        Ok(WedgeForm { pairs, d })
    }

    pub fn zero(algebra: &Arc<FiniteAlgebra>) -> Self {
        WedgeForm {
            pairs: Vec::new(),
            d: LinearOp::zero(algebra),
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.d.algebra()
    }

    /// The bivector part `Σ D_i ∧ F_i`.
    pub fn bivector(&self) -> Bracket {
        let alg = self.algebra();
        let mut cells = vec![Accumulator::new(); alg.dim() * alg.dim()];
        let one = alg.field().one();
        for (x, y) in &self.pairs {
            let w = wedge(x, y).expect("checked at construction");
            for (ij, cell) in cells.iter_mut().enumerate() {
                cell.add_scaled(&one, w.value(ij / alg.dim(), ij % alg.dim()));
            }
        }
        let cells: Vec<SparseVec> = cells.into_iter().map(Accumulator::finish).collect();
        Bracket::from_basis_fn(alg, |i, j| cells[i * alg.dim() + j].clone())
    }

    pub fn bracket(&self) -> Bracket {
        let id = LinearOp::identity(self.algebra());
        self.bivector().add(&wedge(&self.d, &id).expect("same algebra"))
    }

    /// Whether every operator in the presentation is a derivation.
    pub fn all_derivations(&self) -> bool {
        self.d.is_derivation() && self.pairs.iter().all(|(x, y)| x.is_derivation() && y.is_derivation())
    }
}

/// `Σ (D_i ∧ F_i) + D ∧ id`.
pub fn sum_of_wedges(pairs: &[(LinearOp, LinearOp)], d: &LinearOp) -> Result<Bracket> {
    Ok(WedgeForm::new(pairs.to_vec(), d.clone())?.bracket())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_poly;
    use crate::bracket::{is_anticommutative, is_contact, CheckBudget};
    use crate::exactlin::Field;

    fn x2() -> Arc<FiniteAlgebra> {
        Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap())
    }

    #[test]
    fn derivation_bracket_by_hand() {
        let a = x2();
        // d/dx is not a derivation here (it would need D(x²) = 2x); x·d/dx is.
        let d = LinearOp::partial(&a, 0).unwrap().left_mul(&a.basis(1));
        let c = from_derivation(&d);
        assert!(c.warnings.is_empty());
        let br = c.value;
        // [x,1] = D(x)·1 - D(1)·x = x
        assert_eq!(br.eval(&a.basis(1), &a.one()), a.basis(1));
        assert_eq!(br.eval(&a.one(), &a.basis(1)), a.element(&[(1, -1)]));
        assert!(is_contact(&br, &CheckBudget::default()).holds());
    }

    #[test]
    fn zero_derivation_gives_zero_bracket() {
        let a = x2();
        assert!(from_derivation(&LinearOp::zero(&a)).value.is_zero());
    }

    #[test]
    fn non_derivation_warns() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[3]).unwrap());
        let c = from_derivation(&LinearOp::partial(&a, 0).unwrap());
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn wedge_identities() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2, 2]).unwrap());
        let dx = LinearOp::partial(&a, 0).unwrap();
        let dy = LinearOp::partial(&a, 1).unwrap();
        assert!(wedge(&dx, &dx).unwrap().is_zero());
        assert!(is_anticommutative(&wedge(&dx, &dy).unwrap()).holds());
        let id = LinearOp::identity(&a);
        assert_eq!(wedge(&dx, &id).unwrap(), from_derivation(&dx).value);
        assert!(sum_of_wedges(&[], &LinearOp::zero(&a)).unwrap().is_zero());
        assert_eq!(sum_of_wedges(&[], &dx).unwrap(), from_derivation(&dx).value);
    }
}
