use std::sync::Arc;

use super::{Bracket, LinearOp, WedgeForm};
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::Field;

/// `(p, nvars)` when `algebra` is `F_p[x_1..x_n]/(x_i^p)` with its monomial basis.
pub fn reduced_shape(algebra: &FiniteAlgebra) -> Result<(u64, usize)> {
    let Field::Prime { p } = algebra.field() else {
        return Err(Error::Precondition(
            "Cartan-type brackets need a prime field".into(),
        ));
    };
    let m = algebra
        .monomials()
        .ok_or_else(|| Error::Precondition("not a reduced polynomial algebra".into()))?;
    if m.bounds().iter().any(|&b| u64::from(b) != p) {
        return Err(Error::Precondition(format!(
            "exponent bounds {:?} are not all equal to p = {p}",
            m.bounds()
        )));
    }
    Ok((p, m.nvars()))
}

/// `Σ_{i < count} x_i ∂_i`.
pub fn euler_operator(algebra: &Arc<FiniteAlgebra>, count: usize) -> Result<LinearOp> {
    let mut e = LinearOp::zero(algebra);
    for v in 0..count {
        let x = algebra
            .variable(v)
            .ok_or_else(|| Error::Precondition("euler operator needs a monomial basis".into()))?;
        e = e.add(&LinearOp::partial(algebra, v)?.left_mul(&x));
    }
    Ok(e)
}

/// `d/dx ∧ id` on `O_1`.
pub fn witt_form(algebra: &Arc<FiniteAlgebra>) -> Result<WedgeForm> {
    let (_, nvars) = reduced_shape(algebra)?;
    if nvars != 1 {
        return Err(Error::Precondition(format!(
            "Witt bracket needs 1 variable, got {nvars}"
        )));
    }
    WedgeForm::new(Vec::new(), LinearOp::partial(algebra, 0)?)
}

pub fn witt_bracket(algebra: &Arc<FiniteAlgebra>) -> Result<Bracket> {
    Ok(witt_form(algebra)?.bracket())
}

/// `Σ ∂x_i ∧ ∂y_i` on `O_{2n}`, with `y_i` the variable `n + i`.
pub fn hamiltonian_form(algebra: &Arc<FiniteAlgebra>) -> Result<WedgeForm> {
    let (_, nvars) = reduced_shape(algebra)?;
    if nvars == 0 || nvars % 2 != 0 {
        return Err(Error::Precondition(format!(
            "Hamiltonian bracket needs an even positive number of variables, got {nvars}"
        )));
    }
    let n = nvars / 2;
    let pairs = (0..n)
        .map(|i| Ok((LinearOp::partial(algebra, i)?, LinearOp::partial(algebra, i + n)?)))
        .collect::<Result<Vec<_>>>()?;
    WedgeForm::new(pairs, LinearOp::zero(algebra))
}

pub fn hamiltonian_bracket(algebra: &Arc<FiniteAlgebra>) -> Result<Bracket> {
    Ok(hamiltonian_form(algebra)?.bracket())
}

/// Contact bracket on `O_{2n+1}` (last variable `z`):
///
/// `[f,g] = Σ (∂x_i f ∂y_i g - ∂y_i f ∂x_i g) + Δ(f) ∂z g - Δ(g) ∂z f`,
/// `Δ(f) = 2f - Σ (x_i ∂x_i f + y_i ∂y_i f)`.
///
/// As a wedge form this is `Σ ∂x_i ∧ ∂y_i + (-E) ∧ ∂z + (-2∂z) ∧ id`,
/// with `E` the Euler operator on the `x, y` variables.
pub fn contact_k_form(algebra: &Arc<FiniteAlgebra>) -> Result<WedgeForm> {
    let (_, nvars) = reduced_shape(algebra)?;
    if nvars % 2 != 1 || nvars < 3 {
        return Err(Error::Precondition(format!(
            "contact bracket needs an odd number of variables >= 3, got {nvars}"
        )));
    }
    let n = (nvars - 1) / 2;
    let f = algebra.field();
    let dz = LinearOp::partial(algebra, 2 * n)?;
    let mut pairs = (0..n)
        .map(|i| Ok((LinearOp::partial(algebra, i)?, LinearOp::partial(algebra, i + n)?)))
        .collect::<Result<Vec<_>>>()?;
    let euler = euler_operator(algebra, 2 * n)?;
    pairs.push((euler.scale(&-f.one()), dz.clone()));
    WedgeForm::new(pairs, dz.scale(&f.from_i64(-2)))
}

pub fn contact_k_bracket(algebra: &Arc<FiniteAlgebra>) -> Result<Bracket> {
    Ok(contact_k_form(algebra)?.bracket())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{reduced_poly, truncated_poly, Element};
    use crate::bracket::{is_contact, is_poisson, jacobiator, wedge, CheckBudget};

    fn o(n: usize) -> Arc<FiniteAlgebra> {
        Arc::new(reduced_poly(3, n).unwrap())
    }

    /// Contact bracket assembled straight from the displayed formula,
    /// independent of the wedge presentation.
    fn contact_direct(a: &Arc<FiniteAlgebra>, f: &Element, g: &Element) -> Element {
        let d = |v: usize, e: &Element| LinearOp::partial(a, v).unwrap().apply(e);
        let (x, y, z) = (0, 1, 2);
        let two = a.field().from_i64(2);
        let delta = |e: &Element| {
            let xs = a.multiply(&a.variable(x).unwrap(), &d(x, e));
            let ys = a.multiply(&a.variable(y).unwrap(), &d(y, e));
            &(&e.scale(&two) - &xs) - &ys
        };
        let ham = &a.multiply(&d(x, f), &d(y, g)) - &a.multiply(&d(y, f), &d(x, g));
        let k = &a.multiply(&delta(f), &d(z, g)) - &a.multiply(&delta(g), &d(z, f));
        &ham + &k
    }

    #[test]
    fn contact_form_matches_formula() {
        let a = o(3);
        let br = contact_k_bracket(&a).unwrap();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert_eq!(br.eval(&a.basis(i), &a.basis(j)), contact_direct(&a, &a.basis(i), &a.basis(j)));
            }
        }
    }

    #[test]
    fn witt_is_contact_not_poisson() {
        let a = o(1);
        let w = witt_bracket(&a).unwrap();
        let b = CheckBudget::default();
        assert!(is_contact(&w, &b).holds());
        assert!(is_poisson(&w, &b).fails());
    }

    #[test]
    fn hamiltonian_is_poisson() {
        let a = o(2);
        let h = hamiltonian_bracket(&a).unwrap();
        assert!(is_poisson(&h, &CheckBudget::default()).holds());
        let (x, y) = (a.variable(0).unwrap(), a.variable(1).unwrap());
        let xy = a.multiply(&x, &y);
        assert!(jacobiator(&h, &x, &y, &xy).is_zero());
        // coefficient comparison with ∂x ∧ ∂y
        let w = wedge(&LinearOp::partial(&a, 0).unwrap(), &LinearOp::partial(&a, 1).unwrap()).unwrap();
        assert_eq!(h, w);
    }

    #[test]
    fn contact_k_is_contact() {
        let a = o(3);
        let k = contact_k_bracket(&a).unwrap();
        let b = CheckBudget::default();
        assert!(is_contact(&k, &b).holds());
        assert!(is_poisson(&k, &b).fails());
    }

    #[test]
    fn wrong_shapes_rejected() {
        assert!(witt_bracket(&o(2)).is_err());
        assert!(hamiltonian_bracket(&o(3)).is_err());
        assert!(contact_k_bracket(&o(2)).is_err());
        let q = Arc::new(truncated_poly(Field::Rationals, &[3]).unwrap());
        assert!(witt_bracket(&q).is_err());
        let wrong_bound = Arc::new(truncated_poly(Field::prime(3).unwrap(), &[2]).unwrap());
        assert!(witt_bracket(&wrong_bound).is_err());
    }
}
