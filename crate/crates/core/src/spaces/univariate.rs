use std::sync::Arc;

use super::{der, gder, kernel_of_columns, multiplications};
use crate::algebra::{Element, FiniteAlgebra};
use crate::bracket::{same_algebra, Bracket, LinearOp};
use crate::error::{Error, Result};
use crate::exactlin::{solve, Echelon, Solution, Subspace};

/// Evidence for the three univariate-like conditions with generator `∂`.
#[derive(Debug, Clone)]
pub struct UnivariateLikeReport {
    pub dim_gder: usize,
    pub dim_der: usize,
    pub dim_multiplications: usize,
    /// `dim(Der ∩ {R_u})`; zero when the sum is direct.
    pub der_mult_overlap: usize,
    /// GDer = Der ⊕ {R_u}.
    pub condition_a: bool,
    /// Basis of `I = {u : u∂ ∈ Der}`.
    pub ideal_basis: Vec<Element>,
    pub ideal_closed: bool,
    pub generator_injective: bool,
    pub image_is_der: bool,
    /// `I` is an ideal, `u ↦ u∂` is injective on it and `I∂ = Der`.
    pub condition_b: bool,
    /// Some `x` with `∂(x) = 1`.
    pub preimage_of_one: Option<Element>,
    pub condition_c: bool,
}

impl UnivariateLikeReport {
    pub fn holds(&self) -> bool {
        self.condition_a && self.condition_b && self.condition_c
    }
}

/// `x` with `∂(x) = 1`, if any.
fn preimage_of_one(partial: &LinearOp) -> Result<Option<Element>> {
    let alg = partial.algebra();
    Ok(match solve(&partial.matrix(), alg.unit_coords())? {
        Solution::Solved(x) => Some(Element::new(x)),
        Solution::Infeasible { .. } => None,
    })
}

pub fn check_univariate_like(algebra: &Arc<FiniteAlgebra>, partial: &LinearOp) -> Result<UnivariateLikeReport> {
    if !same_algebra(algebra, partial.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let n = algebra.dim();
    let f = algebra.field();
    let d = der(algebra)?;
    let g = gder(algebra)?;
    let m = multiplications(algebra)?;
    let sum = d.subspace().sum(m.subspace())?;
    let overlap = d.subspace().intersect(m.subspace())?.dim();
    let condition_a = overlap == 0 && sum.equals(g.subspace())?;

    // I is the kernel of u ↦ (u∂ mod Der); reduction by an rref basis is linear.
    let mut der_echelon = Echelon::new(f, n * n);
    for b in d.subspace().basis() {
        der_echelon.insert(b);
    }
    let images: Vec<LinearOp> = (0..n).map(|i| partial.left_mul(&algebra.basis(i))).collect();
    let columns = images
        .iter()
        .map(|op| der_echelon.reduce(&op.to_coords()).iter().map(|(r, c)| (r, c.clone())).collect())
        .collect();
    let ideal = Subspace::from_sparse(f, n, kernel_of_columns(f, columns))?;
    let ideal_basis: Vec<Element> = ideal
        .basis()
        .iter()
        .map(|v| Element::from_sparse(v, f, n))
        .collect();
    let ideal_closed = ideal.basis().iter().all(|u| {
        (0..n).all(|k| ideal.contains_sparse(&algebra.mul_sparse(u, &crate::exactlin::SparseVec::unit(k, f))))
    });
    let image = Subspace::from_sparse(
        f,
        n * n,
        ideal_basis.iter().map(|u| partial.left_mul(u).to_coords()).collect(),
    )?;
    let generator_injective = image.dim() == ideal.dim();
    let image_is_der = image.equals(d.subspace())?;
    let condition_b = ideal_closed && generator_injective && image_is_der;

    let x = preimage_of_one(partial)?;
    Ok(UnivariateLikeReport {
        dim_gder: g.dim(),
        dim_der: d.dim(),
        dim_multiplications: m.dim(),
        der_mult_overlap: overlap,
        condition_a,
        ideal_basis,
        ideal_closed,
        generator_injective,
        image_is_der,
        condition_b,
        condition_c: x.is_some(),
        preimage_of_one: x,
    })
}

/// Checks `∂(1) = 0` and returns `x` with `∂(x) = 1`.
fn extraction_setup(algebra: &Arc<FiniteAlgebra>, partial: &LinearOp, br: &Bracket) -> Result<Element> {
    if !same_algebra(algebra, partial.algebra()) || !same_algebra(algebra, br.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if !partial.apply(&algebra.one()).is_zero() {
        return Err(Error::Precondition("canonical extraction needs ∂(1) = 0".into()));
    }
    preimage_of_one(partial)?.ok_or_else(|| Error::Precondition("no x with ∂(x) = 1".into()))
}

fn compare(br: &Bracket, rebuilt: &Bracket, what: &str) -> Result<()> {
    if br == rebuilt {
        return Ok(());
    }
    let alg = br.algebra();
    let n = alg.dim();
    let (i, j) = (0..n * n)
        .map(|t| (t / n, t % n))
        .find(|&(i, j)| br.value(i, j) != rebuilt.value(i, j))
        .expect("brackets differ somewhere");
    Err(Error::Reconstruction(format!(
        "{what} differs at ({}, {})",
        alg.labels()[i],
        alg.labels()[j]
    )))
}

/// `u` with `br(a, b) = u(a∂(b) - b∂(a))`, read off as `u = br(1, x)`.
pub fn extract_kminus_canonical(algebra: &Arc<FiniteAlgebra>, partial: &LinearOp, br: &Bracket) -> Result<Element> {
    let x = extraction_setup(algebra, partial, br)?;
    let u = br.eval(&algebra.one(), &x);
    let rebuilt = Bracket::from_basis_fn(algebra, |i, j| {
        let (a, b) = (algebra.basis(i), algebra.basis(j));
        let t = &algebra.multiply(&a, &partial.apply(&b)) - &algebra.multiply(&b, &partial.apply(&a));
        algebra.multiply(&u, &t).to_sparse()
    });
    compare(br, &rebuilt, "u(a∂b - b∂a)")?;
    Ok(u)
}

/// `(u, v, w)` with `br(a, b) = u∂(a)∂(b) + v∂(ab) + ab·w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPlusCanonical {
    pub u: Element,
    pub v: Element,
    pub w: Element,
}

pub fn extract_kplus_canonical(
    algebra: &Arc<FiniteAlgebra>,
    partial: &LinearOp,
    br: &Bracket,
) -> Result<KPlusCanonical> {
    let x = extraction_setup(algebra, partial, br)?;
    let one = algebra.one();
    let mul = |a: &Element, b: &Element| algebra.multiply(a, b);
    let x2 = mul(&x, &x);
    let w = br.eval(&one, &one);
    let v = &br.eval(&one, &x) - &mul(&x, &w);
    let u = &(&br.eval(&x, &x) - &mul(&v, &partial.apply(&x2))) - &mul(&x2, &w);
    let rebuilt = Bracket::from_basis_fn(algebra, |i, j| {
        let (a, b) = (algebra.basis(i), algebra.basis(j));
        let ab = mul(&a, &b);
        let t = &mul(&u, &mul(&partial.apply(&a), &partial.apply(&b))) + &mul(&v, &partial.apply(&ab));
        (&t + &mul(&ab, &w)).to_sparse()
    });
    compare(br, &rebuilt, "u∂a∂b + v∂(ab) + abw")?;
    Ok(KPlusCanonical { u, v, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_poly;
    use crate::exactlin::Field;
    use crate::spaces::{kminus, kplus};

    fn trunc(field: Field, bounds: &[u32]) -> Arc<FiniteAlgebra> {
        Arc::new(truncated_poly(field, bounds).unwrap())
    }

    #[test]
    fn truncated_univariate_algebras() {
        for field in [Field::Rationals, Field::prime(3).unwrap()] {
            for n in 2..=4 {
                let a = trunc(field, &[n]);
                let d = LinearOp::partial(&a, 0).unwrap();
                let r = check_univariate_like(&a, &d).unwrap();
                assert!(r.holds(), "{field} n={n}: {r:?}");
                if field != Field::Rationals && n == 3 {
                    assert_eq!(r.ideal_basis.len(), 3);
                }
            }
        }
    }

    #[test]
    fn two_variables_fail_condition_b() {
        let a = trunc(Field::Rationals, &[2, 2]);
        let r = check_univariate_like(&a, &LinearOp::partial(&a, 0).unwrap()).unwrap();
        assert!(!r.condition_b);
    }

    #[test]
    fn kminus_extraction() {
        let a = trunc(Field::Rationals, &[2]);
        let d = LinearOp::partial(&a, 0).unwrap();
        let phi = kminus(&a).unwrap().basis().remove(0);
        let phi = phi.scale(&phi.value(0, 1).get(1).unwrap().inv().unwrap());
        assert_eq!(extract_kminus_canonical(&a, &d, &phi).unwrap(), a.basis(1));
        let two = a.field().from_i64(2);
        assert_eq!(extract_kminus_canonical(&a, &d, &phi.scale(&two)).unwrap(), a.element(&[(1, 2)]));
        assert!(extract_kminus_canonical(&a, &d, &Bracket::zero(&a)).unwrap().is_zero());
    }

    #[test]
    fn kplus_extraction() {
        let a = trunc(Field::Rationals, &[2]);
        let d = LinearOp::partial(&a, 0).unwrap();
        let q = a.field();
        let phi3 = Bracket::from_entries(&a, &[(0, 0, 0, q.one())]).unwrap();
        let c = extract_kplus_canonical(&a, &d, &phi3).unwrap();
        assert_eq!((c.u, c.v, c.w), (a.zero(), a.element(&[(1, -1)]), a.one()));
        let phi4 = Bracket::from_entries(&a, &[(0, 0, 1, q.one())]).unwrap();
        let c = extract_kplus_canonical(&a, &d, &phi4).unwrap();
        assert_eq!((c.u, c.v, c.w), (a.zero(), a.zero(), a.basis(1)));
        let c = extract_kplus_canonical(&a, &d, &Bracket::zero(&a)).unwrap();
        assert!(c.u.is_zero() && c.v.is_zero() && c.w.is_zero());
        for br in kplus(&a).unwrap().basis() {
            extract_kplus_canonical(&a, &d, &br).unwrap();
        }
    }

    #[test]
    fn bad_generator_rejected() {
        let a = trunc(Field::Rationals, &[2]);
        let id = LinearOp::identity(&a);
        assert!(extract_kminus_canonical(&a, &id, &Bracket::zero(&a)).is_err());
        // a symmetric bracket cannot have the antisymmetric canonical form
        let q = a.field();
        let sym = Bracket::from_entries(&a, &[(0, 0, 0, q.one())]).unwrap();
        let d = LinearOp::partial(&a, 0).unwrap();
        assert!(matches!(extract_kminus_canonical(&a, &d, &sym), Err(Error::Reconstruction(_))));
    }
}
