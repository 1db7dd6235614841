//! Brackets on tensor products: the product bracket, the extension of two
//! wedge presentations, the `K⁻(A⊗B)` decomposition, and the extension
//! analysis over `A ⊗ K[x]/(x²)`.

mod decompose;
mod experiments;
mod extension;

use std::sync::Arc;

use crate::algebra::{tensor, FiniteAlgebra};
use crate::bracket::{
    lie_derivative, same_algebra, schouten_conditions, wedge, Bracket, CheckBudget, LinearOp, WedgeForm,
};
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, SparseVec};
use crate::spaces::{der, kernel_of_columns};

pub use decompose::{decompose, cross_residual_vanishes, Component, DecomposedBracket, Parity};
pub use experiments::{
    cartan_tensor_experiment, theorem2_experiment, CartanKind, CartanReport, Theorem2Report,
};
pub use extension::{
    extension_feasibility_x2, mz_algebra, mz_counterexample, BruteForce, ExtensionReport, MzReport,
};

/// Coordinates of `v ⊗ w` in the basis `e_i ⊗ f_j` (index `i * dim_b + j`).
pub fn kron(v: &SparseVec, w: &SparseVec, dim_b: usize) -> SparseVec {
    SparseVec::from_entries(
        v.iter()
            .flat_map(|(i, x)| w.iter().map(move |(j, y)| (i * dim_b + j, x * y))),
    )
}

fn require_tensor(t: &Arc<FiniteAlgebra>, a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<()> {
    if same_algebra(t, &Arc::new(tensor(a, b)?)) {
        Ok(())
    } else {
        Err(Error::Precondition("algebra is not the tensor product of the given factors".into()))
    }
}

/// `[a⊗b, a'⊗b'] = [a,a']_A ⊗ bb' + aa' ⊗ [b,b']_B`.
pub fn tensor_bracket(br_a: &Bracket, br_b: &Bracket) -> Result<Bracket> {
    let (a, b) = (br_a.algebra(), br_b.algebra());
    let t = Arc::new(tensor(a, b)?);
    let nb = b.dim();
    let one = a.field().one();
    Ok(Bracket::from_basis_fn(&t, |p, q| {
        let (i, j) = (p / nb, p % nb);
        let (k, l) = (q / nb, q % nb);
        kron(br_a.value(i, k), b.product(j, l), nb).add_scaled(&one, &kron(a.product(i, k), br_b.value(j, l), nb))
    }))
}

/// `D ⊗ id_B` on `t = A ⊗ B`.
pub fn lift_left(d: &LinearOp, b: &FiniteAlgebra, t: &Arc<FiniteAlgebra>) -> Result<LinearOp> {
    require_tensor(t, d.algebra(), b)?;
    let nb = b.dim();
    let f = b.field();
    Ok(LinearOp::from_fn(t, |p| kron(d.image(p / nb), &SparseVec::unit(p % nb, f), nb)))
}

/// `id_A ⊗ F` on `t = A ⊗ B`.
pub fn lift_right(a: &FiniteAlgebra, f: &LinearOp, t: &Arc<FiniteAlgebra>) -> Result<LinearOp> {
    require_tensor(t, a, f.algebra())?;
    let nb = f.dim();
    let field = a.field();
    Ok(LinearOp::from_fn(t, |p| kron(&SparseVec::unit(p / nb, field), f.image(p % nb), nb)))
}

/// Splits `v = Σ c_{kl} e_k ⊗ f_l` as `w ⊗ u` for the fixed `u`, if possible.
fn divide_by(v: &SparseVec, u: &SparseVec, dim_b: usize) -> Option<SparseVec> {
    let (lead, lc) = u.leading()?;
    let inv = lc.inv()?;
    let mut acc = Accumulator::new();
    for (idx, c) in v.iter() {
        if idx % dim_b == lead {
            acc.add(idx / dim_b, &(c * &inv));
        }
    }
    let w = acc.finish();
    (kron(&w, u, dim_b) == *v).then_some(w)
}

/// The brackets induced on `A ⊗ 1` and `1 ⊗ B`; fails when either
/// subspace is not closed under `br`.
pub fn restrict_to_factors(
    br: &Bracket,
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<(Bracket, Bracket)> {
    require_tensor(br.algebra(), a, b)?;
    let (na, nb) = (a.dim(), b.dim());
    let f = a.field();
    let (ua, ub) = (a.unit_sparse(), b.unit_sparse());
    let not_closed = |side: &str| Error::Reconstruction(format!("{side} is not closed under the bracket"));
    let mut left = Vec::with_capacity(na * na);
    for i in 0..na {
        for k in 0..na {
            let v = br.eval_sparse(&kron(&SparseVec::unit(i, f), &ub, nb), &kron(&SparseVec::unit(k, f), &ub, nb));
            left.push(divide_by(&v, &ub, nb).ok_or_else(|| not_closed("A ⊗ 1"))?);
        }
    }
    let mut right = Vec::with_capacity(nb * nb);
    for j in 0..nb {
        for l in 0..nb {
            let v = br.eval_sparse(&kron(&ua, &SparseVec::unit(j, f), nb), &kron(&ua, &SparseVec::unit(l, f), nb));
            // v = ua ⊗ w: transpose the roles of the factors
            let swapped = SparseVec::from_entries(v.iter().map(|(idx, c)| ((idx % nb) * na + idx / nb, c.clone())));
            right.push(divide_by(&swapped, &ua, na).ok_or_else(|| not_closed("1 ⊗ B"))?);
        }
    }
    Ok((
        Bracket::from_basis_fn(a, |i, k| left[i * na + k].clone()),
        Bracket::from_basis_fn(b, |j, l| right[j * nb + l].clone()),
    ))
}

/// A derivation `Z` with `L_Z P = -P - D ∧ Z` and `[Z, D] = 0`, for the
/// presentation `P + D ∧ id`. `None` when no such derivation exists.
///
/// `Z = 0` works exactly when `P = 0`; for a Hamiltonian bracket `Z` is half
/// the Euler operator.
pub fn homothety(form: &WedgeForm) -> Result<Option<LinearOp>> {
    let alg = form.algebra();
    let f = alg.field();
    let n = alg.dim();
    let p = form.bivector();
    if p.is_zero() {
        return Ok(Some(LinearOp::zero(alg)));
    }
    let basis = der(alg)?.basis();
    let column = |z: &LinearOp| -> Vec<(usize, _)> {
        let mut col: Vec<_> = lie_derivative(&p, z)
            .add(&wedge(&form.d, z).expect("same algebra"))
            .to_coords()
            .iter()
            .map(|(r, x)| (r, x.clone()))
            .collect();
        let comm = z.compose(&form.d).sub(&form.d.compose(z)).to_coords();
        col.extend(comm.iter().map(|(r, x)| (n * n * n + r, x.clone())));
        col
    };
    let mut columns: Vec<_> = basis.iter().map(column).collect();
    // last unknown multiplies P itself and is normalized to 1
    columns.push(p.to_coords().iter().map(|(r, x)| (r, x.clone())).collect());
    let t = basis.len();
    let kernel = kernel_of_columns(f, columns);
    let Some(v) = kernel.iter().find(|v| v.get(t).is_some()) else {
        return Ok(None);
    };
    let scale = v.get(t).expect("checked").inv().expect("nonzero");
    let mut z = LinearOp::zero(alg);
    for (k, c) in v.iter().filter(|&(k, _)| k < t) {
        z = z.add(&basis[k].scale(&(c * &scale)));
    }
    Ok(Some(z))
}

/// Bracket on `A ⊗ B` extending two wedge presentations, with its own presentation.
#[derive(Debug, Clone)]
pub struct Theorem2Extension {
    pub bracket: Bracket,
    pub form: WedgeForm,
    /// Homotheties used for the cross terms, when those are nonzero.
    pub z_left: Option<LinearOp>,
    pub z_right: Option<LinearOp>,
}

/// For `P + D ∧ id` on `A` and `Q + F ∧ id` on `B` (lifted to `A ⊗ B`):
///
/// `P + Q + Z_A ∧ F + Z_B ∧ D + (D + F) ∧ id`,
///
/// with `Z_A`, `Z_B` from [`homothety`]. Without the cross terms the
/// Jacobiator keeps `Σ_cyc P(a,b) F(c)` and `Σ_cyc Q(a,b) D(c)`, so the bare
/// sum only works when `P = 0` or `F = 0` (and symmetrically). A cross term is
/// built only when both of its factors are nonzero.
///
/// Both presentations must be over derivations and satisfy the Schouten
/// conditions (not falsified, when the check is sampled).
pub fn theorem2_extension(
    form_a: &WedgeForm,
    form_b: &WedgeForm,
    budget: &CheckBudget,
) -> Result<Theorem2Extension> {
    for (name, form) in [("left", form_a), ("right", form_b)] {
        let r = schouten_conditions(form, budget)?;
        if r.fails() {
            return Err(Error::Precondition(format!(
                "{name} presentation violates the Schouten conditions ({} violation(s))",
                r.violations
            )));
        }
    }
    let cross = |name: &str, form: &WedgeForm, other: &WedgeForm| -> Result<Option<LinearOp>> {
        if other.d.is_zero() || form.bivector().is_zero() {
            return Ok(None);
        }
        homothety(form)?.map(Some).ok_or_else(|| {
            Error::Precondition(format!(
                "{name} presentation has no derivation Z with L_Z P = -P - D∧Z and [Z, D] = 0"
            ))
        })
    };
    let z_left = cross("left", form_a, form_b)?;
    let z_right = cross("right", form_b, form_a)?;

    let (a, b) = (form_a.algebra(), form_b.algebra());
    let t = Arc::new(tensor(a, b)?);
    let mut pairs = Vec::new();
    for (x, y) in &form_a.pairs {
        pairs.push((lift_left(x, b, &t)?, lift_left(y, b, &t)?));
    }
    for (x, y) in &form_b.pairs {
        pairs.push((lift_right(a, x, &t)?, lift_right(a, y, &t)?));
    }
    let d_left = lift_left(&form_a.d, b, &t)?;
    let d_right = lift_right(a, &form_b.d, &t)?;
    if let Some(z) = &z_left {
        pairs.push((lift_left(z, b, &t)?, d_right.clone()));
    }
    if let Some(z) = &z_right {
        pairs.push((lift_right(a, z, &t)?, d_left.clone()));
    }
    let form = WedgeForm::new(pairs, d_left.add(&d_right))?;
    Ok(Theorem2Extension {
        bracket: form.bracket(),
        form,
        z_left,
        z_right,
    })
}
