use std::sync::Arc;

use super::check::{sweep, TripleSet};
use super::{jacobiator_basis, Bracket, CheckBudget, CheckMode, IdentityReport, LinearOp, TripleShape, WedgeForm, Witness};
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, SparseVec};

/// Trilinear map `A × A × A → A` by basis values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trilinear {
    algebra: Arc<FiniteAlgebra>,
    table: Vec<SparseVec>,
}

impl Trilinear {
    pub fn from_basis_fn(algebra: &Arc<FiniteAlgebra>, f: impl Fn(usize, usize, usize) -> SparseVec) -> Self {
        let n = algebra.dim();
        let table = (0..n * n * n).map(|t| f(t / (n * n), (t / n) % n, t % n)).collect();
        Trilinear {
            algebra: Arc::clone(algebra),
            table,
        }
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> &SparseVec {
        let n = self.algebra.dim();
        &self.table[(i * n + j) * n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(SparseVec::is_empty)
    }
}

/// `(L_D P)(a, b) = D(P(a,b)) - P(D(a), b) - P(a, D(b))`.
pub fn lie_derivative(p: &Bracket, d: &LinearOp) -> Bracket {
    let f = p.algebra().field();
    let m1 = -f.one();
    Bracket::from_basis_fn(p.algebra(), |i, j| {
        let mut acc = Accumulator::new();
        acc.add_scaled(&f.one(), &d.apply_sparse(p.value(i, j)));
        acc.add_scaled(&m1, &p.eval_sparse(d.image(i), &SparseVec::unit(j, f)));
        acc.add_scaled(&m1, &p.eval_sparse(&SparseVec::unit(i, f), d.image(j)));
        acc.finish()
    })
}

fn trivector_value(p: &Bracket, d: &LinearOp, i: usize, j: usize, k: usize) -> SparseVec {
    let a = p.algebra();
    let mut acc = Accumulator::new();
    let one = a.field().one();
    acc.add_scaled(&one, &a.mul_sparse(p.value(i, j), d.image(k)));
    acc.add_scaled(&one, &a.mul_sparse(p.value(j, k), d.image(i)));
    acc.add_scaled(&one, &a.mul_sparse(p.value(k, i), d.image(j)));
    acc.finish()
}

/// `(P ∧ D)(a, b, c) = P(a,b)D(c) + P(b,c)D(a) + P(c,a)D(b)`.
pub fn trivector_wedge(p: &Bracket, d: &LinearOp) -> Trilinear {
    Trilinear::from_basis_fn(p.algebra(), |i, j, k| trivector_value(p, d, i, j, k))
}

/// Jacobi criterion for a bracket `P + D ∧ id` with `P = Σ D_i ∧ F_i`:
///
/// 1. `L_D P = 0`;
/// 2. `Jac_P + P ∧ D = 0` on basis triples.
///
/// Expanding the Jacobiator of `P + D ∧ id` gives
/// `Jac_P(a,b,c) + (P ∧ D)(a,b,c) + Σ_cyc c · (L_D P)(a,b)`; setting `c = 1`
/// isolates `L_D P`, which fixes both signs above.
pub fn schouten_conditions(form: &WedgeForm, budget: &CheckBudget) -> Result<IdentityReport> {
    if !form.all_derivations() {
        return Err(Error::Precondition(
            "Schouten conditions need every operator of the presentation to be a derivation".into(),
        ));
    }
    let alg = form.algebra();
    let p = form.bivector();
    let lie = lie_derivative(&p, &form.d);

    let n = alg.dim();
    let mut invariance = IdentityReport {
        property: "lie_derivative".into(),
        mode: CheckMode::Exhaustive,
        checked: (n * n) as u64,
        violations: 0,
        stopped_early: false,
        witnesses: Vec::new(),
    };
    for i in 0..n {
        for j in 0..n {
            let v = lie.value(i, j);
            if !v.is_empty() {
                invariance.violations += 1;
                if invariance.witnesses.len() < budget.max_witnesses {
                    invariance.witnesses.push(Witness::new(alg, "lie_derivative", &[i, j], v));
                }
            }
        }
    }

    let set = TripleSet::plan(alg, TripleShape::Alternating, budget);
    let one = alg.field().one();
    let jac = sweep(alg, "jacobiator_plus_wedge", &set, budget, |i, j, k| {
        jacobiator_basis(&p, i, j, k).add_scaled(&one, &trivector_value(&p, &form.d, i, j, k))
    });
    Ok(IdentityReport::merge(
        "schouten",
        vec![invariance, jac],
        budget.max_witnesses,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::reduced_poly;
    use crate::bracket::{contact_k_form, hamiltonian_form, is_lie, jacobiator};

    #[test]
    fn zero_d_reduces_to_jacobi_of_bivector() {
        let a = Arc::new(reduced_poly(3, 2).unwrap());
        let h = hamiltonian_form(&a).unwrap();
        let b = CheckBudget::default();
        assert!(schouten_conditions(&h, &b).unwrap().holds());
        assert!(trivector_wedge(&h.bivector(), &h.d).is_zero());
        let x = a.variable(0).unwrap();
        assert!(jacobiator(&h.bracket(), &x, &a.variable(1).unwrap(), &x).is_zero());
    }

    #[test]
    fn contact_presentation_passes() {
        let a = Arc::new(reduced_poly(3, 3).unwrap());
        let k = contact_k_form(&a).unwrap();
        let b = CheckBudget::default();
        assert!(schouten_conditions(&k, &b).unwrap().holds());
        assert!(is_lie(&k.bracket(), &b).holds());
        assert!(lie_derivative(&k.bivector(), &k.d).is_zero());
    }

    #[test]
    fn non_derivations_rejected() {
        let a = Arc::new(reduced_poly(3, 1).unwrap());
        let r = LinearOp::multiplication(&a, &a.variable(0).unwrap());
        let form = WedgeForm::new(vec![], r).unwrap();
        assert!(schouten_conditions(&form, &CheckBudget::default()).is_err());
    }
}
