use std::sync::Arc;

use crate::algebra::{Element, FiniteAlgebra};
use crate::bracket::{same_algebra, Bracket, LinearOp, WedgeForm};
use crate::error::{Error, Result};

/// Coefficients `f_i = [1, x_i]`, `f_ij = [x_i, x_j] + f_i x_j - f_j x_i`
/// of a bracket on a polynomial quotient, and the wedge presentation
/// `Σ_{i<j} (f_ij ∂_i) ∧ ∂_j - (Σ f_i ∂_i) ∧ id` they define.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub f: Vec<Element>,
    pub f_pairs: Vec<((usize, usize), Element)>,
    pub form: WedgeForm,
    /// The presentation reproduces the bracket exactly.
    pub exact: bool,
}

pub fn standardness_extract(algebra: &Arc<FiniteAlgebra>, br: &Bracket) -> Result<StandardForm> {
    if !same_algebra(algebra, br.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let nvars = algebra
        .monomials()
        .ok_or_else(|| Error::Precondition("standardness needs a polynomial quotient".into()))?
        .nvars();
    let xs: Vec<Element> = (0..nvars).map(|v| algebra.variable(v).expect("monomial basis")).collect();
    let partials = (0..nvars)
        .map(|v| LinearOp::partial(algebra, v))
        .collect::<Result<Vec<_>>>()?;
    let one = algebra.one();
    let f: Vec<Element> = xs.iter().map(|x| br.eval(&one, x)).collect();
    let mut f_pairs = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            let t = &br.eval(&xs[i], &xs[j]) + &algebra.multiply(&f[i], &xs[j]);
            let fij = &t - &algebra.multiply(&f[j], &xs[i]);
            pairs.push((partials[i].left_mul(&fij), partials[j].clone()));
            f_pairs.push(((i, j), fij));
        }
    }
    let mut d = LinearOp::zero(algebra);
    for (fi, p) in f.iter().zip(&partials) {
        d = d.sub(&p.left_mul(fi));
    }
    let form = WedgeForm::new(pairs, d)?;
    let exact = form.bracket() == *br;
    Ok(StandardForm { f, f_pairs, form, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::reduced_poly;
    use crate::bracket::{hamiltonian_bracket, witt_bracket};

    #[test]
    fn witt_and_hamiltonian() {
        let o1 = Arc::new(reduced_poly(3, 1).unwrap());
        let s = standardness_extract(&o1, &witt_bracket(&o1).unwrap()).unwrap();
        assert!(s.exact);
        assert_eq!(s.f, vec![o1.scalar(-1)]);

        let o2 = Arc::new(reduced_poly(3, 2).unwrap());
        let s = standardness_extract(&o2, &hamiltonian_bracket(&o2).unwrap()).unwrap();
        assert!(s.exact);
        assert!(s.f.iter().all(Element::is_zero));
        assert_eq!(s.f_pairs, vec![((0, 1), o2.one())]);
        assert!(s.form.all_derivations());
    }

    #[test]
    fn non_standard_input_is_flagged() {
        let o1 = Arc::new(reduced_poly(3, 1).unwrap());
        let q = o1.field();
        let sym = Bracket::from_entries(&o1, &[(1, 1, 0, q.one())]).unwrap();
        assert!(!standardness_extract(&o1, &sym).unwrap().exact);
    }
}
