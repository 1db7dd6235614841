use std::sync::Arc;

use crate::algebra::{tensor, truncated_poly, Element, FiniteAlgebra};
use crate::bracket::{same_algebra, Bracket, LinearOp};
use crate::error::{Error, Result};
use crate::exactlin::{Field, SparseVec};

/// `K[x]/(x²)`.
pub fn x2_factor(field: Field) -> FiniteAlgebra {
    truncated_poly(field, &[2]).expect("bound 2 is valid")
}

/// Data `(α, β, D, u)` of a bracket on `A ⊗ K[x]/(x²)`:
///
/// ```text
/// [a⊗1, b⊗1] = α(a,b)⊗1 + β(a,b)⊗x
/// [a⊗1, b⊗x] = (α(a,b) + bD(a) + abu)⊗x
/// [a⊗x, b⊗x] = 0
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X2Canonical {
    pub alpha: Bracket,
    pub beta: Bracket,
    pub d: LinearOp,
    pub u: Element,
}

fn check_tensor(a: &Arc<FiniteAlgebra>, t: &Arc<FiniteAlgebra>) -> Result<()> {
    let expected = Arc::new(tensor(a, &x2_factor(a.field()))?);
    if same_algebra(&expected, t) {
        Ok(())
    } else {
        Err(Error::Precondition("algebra is not A ⊗ K[x]/(x²) in tensor order".into()))
    }
}

/// `v ⊗ x^s`.
fn embed(v: &SparseVec, s: usize) -> SparseVec {
    SparseVec::from_entries(v.iter().map(|(k, c)| (2 * k + s, c.clone())))
}

/// The `⊗ x^s` component.
fn component(v: &SparseVec, s: usize) -> SparseVec {
    SparseVec::from_entries(v.iter().filter(|(k, _)| k % 2 == s).map(|(k, c)| (k / 2, c.clone())))
}

/// Assembles the bracket on `tensor_algebra = A ⊗ K[x]/(x²)` from `(α, β, D, u)`.
pub fn x2_bracket(tensor_algebra: &Arc<FiniteAlgebra>, data: &X2Canonical) -> Result<Bracket> {
    let a = data.alpha.algebra();
    if !same_algebra(a, data.beta.algebra()) || !same_algebra(a, data.d.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    check_tensor(a, tensor_algebra)?;
    let f = a.field();
    let one = f.one();
    let us = data.u.to_sparse();
    // (α(a,b) + bD(a) + abu) on basis elements
    let mixed = |i: usize, j: usize| {
        let bj = SparseVec::unit(j, f);
        data.alpha
            .value(i, j)
            .add_scaled(&one, &a.mul_sparse(&bj, data.d.image(i)))
            .add_scaled(&one, &a.mul_sparse(a.product(i, j), &us))
    };
    Ok(Bracket::from_basis_fn(tensor_algebra, |p, q| {
        let (i, s) = (p / 2, p % 2);
        let (j, t) = (q / 2, q % 2);
        match (s, t) {
            (0, 0) => embed(data.alpha.value(i, j), 0).add_scaled(&one, &embed(data.beta.value(i, j), 1)),
            (0, 1) => embed(&mixed(i, j), 1),
            (1, 0) => embed(&mixed(j, i), 1).scaled(&-f.one()),
            _ => SparseVec::new(),
        }
    }))
}

/// Reads `(α, β, D, u)` off a bracket in `K⁻(A ⊗ K[x]/(x²))` and checks that
/// they reassemble it exactly.
pub fn x2_canonical_extract(a: &Arc<FiniteAlgebra>, br: &Bracket) -> Result<X2Canonical> {
    let t = br.algebra();
    check_tensor(a, t)?;
    let f = a.field();
    let n = a.dim();
    let m1 = -f.one();
    let alpha = Bracket::from_basis_fn(a, |i, j| component(br.value(2 * i, 2 * j), 0));
    let beta = Bracket::from_basis_fn(a, |i, j| component(br.value(2 * i, 2 * j), 1));
    let unit = a.unit_sparse();
    let u = component(&br.eval_sparse(&embed(&unit, 0), &embed(&unit, 1)), 1);
    let images = (0..n)
        .map(|i| {
            let ei = SparseVec::unit(i, f);
            component(&br.eval_sparse(&embed(&ei, 0), &embed(&unit, 1)), 1)
                .add_scaled(&m1, &alpha.eval_sparse(&ei, &unit))
                .add_scaled(&m1, &a.mul_sparse(&ei, &u))
        })
        .collect();
    let data = X2Canonical {
        alpha,
        beta,
        d: LinearOp::from_images(a, images)?,
        u: Element::from_sparse(&u, f, n),
    };
    if x2_bracket(t, &data)? != *br {
        return Err(Error::Reconstruction(
            "bracket on A ⊗ K[x]/(x²) is not of the (α, β, D, u) form".into(),
        ));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{der, kminus};

    #[test]
    fn zero_and_phi_extension() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap());
        let t = Arc::new(tensor(&a, &x2_factor(a.field())).unwrap());
        let z = x2_canonical_extract(&a, &Bracket::zero(&t)).unwrap();
        assert!(z.alpha.is_zero() && z.beta.is_zero() && z.d.is_zero() && z.u.is_zero());

        let data = X2Canonical {
            alpha: Bracket::zero(&a),
            beta: Bracket::zero(&a),
            d: LinearOp::zero(&a),
            u: a.one(),
        };
        let br = x2_bracket(&t, &data).unwrap();
        assert_eq!(x2_canonical_extract(&a, &br).unwrap(), data);
        // 1 ⊗ φ: [1⊗1, 1⊗x] = 1⊗x
        assert_eq!(br.value(0, 1), &SparseVec::unit(1, a.field()));
    }

    #[test]
    fn dimension_law_on_x2() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap());
        let t = Arc::new(tensor(&a, &x2_factor(a.field())).unwrap());
        let km = kminus(&t).unwrap();
        assert_eq!(km.dim(), 2 * kminus(&a).unwrap().dim() + der(&a).unwrap().dim() + a.dim());
        for br in km.basis() {
            x2_canonical_extract(&a, &br).unwrap();
        }
    }

    #[test]
    fn wrong_factor_rejected() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap());
        let t = Arc::new(tensor(&a, &truncated_poly(Field::Rationals, &[3]).unwrap()).unwrap());
        assert!(x2_canonical_extract(&a, &Bracket::zero(&t)).is_err());
    }
}
