use std::sync::Arc;

use serde::Serialize;

use super::{kron, require_tensor};
use crate::algebra::FiniteAlgebra;
use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::exactlin::{solve, Accumulator, Echelon, Field, Matrix, Solution, SparseVec, Subspace};
use crate::spaces::{kminus, kplus, BracketSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    /// `f ∈ K⁻(A)`, `g ∈ K⁺(B)`.
    AntiSymSym,
    /// `f ∈ K⁺(A)`, `g ∈ K⁻(B)`.
    SymAntiSym,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub f: Bracket,
    pub g: Bracket,
    pub parity: Parity,
}

/// `br = Σ f_i ⊗ g_i` with every term in `K⁻(A)⊗K⁺(B)` or `K⁺(A)⊗K⁻(B)`.
#[derive(Debug, Clone)]
pub struct DecomposedBracket {
    pub left: Arc<FiniteAlgebra>,
    pub right: Arc<FiniteAlgebra>,
    pub components: Vec<Component>,
}

impl DecomposedBracket {
    /// `Σ f_i ⊗ g_i` on the given tensor algebra.
    pub fn reassemble(&self, t: &Arc<FiniteAlgebra>) -> Result<Bracket> {
        require_tensor(t, &self.left, &self.right)?;
        let nb = self.right.dim();
        let one = t.field().one();
        Ok(Bracket::from_basis_fn(t, |p, q| {
            let mut acc = Accumulator::new();
            for c in &self.components {
                acc.add_scaled(&one, &kron(c.f.value(p / nb, q / nb), c.g.value(p % nb, q % nb), nb));
            }
            acc.finish()
        }))
    }
}

/// `Σ (f(a,a'')a' - f(a',a'')a) ⊗ (g(b,b'')b' - g(b',b'')b) = 0` on all basis tuples.
pub fn cross_residual_vanishes(d: &DecomposedBracket) -> bool {
    let (a, b) = (&d.left, &d.right);
    let (na, nb) = (a.dim(), b.dim());
    let one = a.field().one();
    let m1 = -a.field().one();
    let side = |alg: &FiniteAlgebra, br: &Bracket, x: usize, y: usize, z: usize| {
        let f = alg.field();
        alg.mul_sparse(br.value(x, z), &SparseVec::unit(y, f))
            .add_scaled(&m1, &alg.mul_sparse(br.value(y, z), &SparseVec::unit(x, f)))
    };
    let lefts: Vec<Vec<SparseVec>> = d
        .components
        .iter()
        .map(|c| (0..na * na * na).map(|t| side(a, &c.f, t / (na * na), (t / na) % na, t % na)).collect())
        .collect();
    let rights: Vec<Vec<SparseVec>> = d
        .components
        .iter()
        .map(|c| (0..nb * nb * nb).map(|t| side(b, &c.g, t / (nb * nb), (t / nb) % nb, t % nb)).collect())
        .collect();
    (0..na * na * na).all(|s| {
        (0..nb * nb * nb).all(|t| {
            let mut acc = Accumulator::new();
            for (l, r) in lefts.iter().zip(&rights) {
                acc.add_scaled(&one, &kron(&l[s], &r[t], nb));
            }
            acc.finish().is_empty()
        })
    })
}

/// Extends `start` to a basis of the (anti)symmetric maps `B × B → B`.
fn complete_basis(field: Field, m: usize, start: &[SparseVec], symmetric: bool) -> Vec<SparseVec> {
    let mut e = Echelon::new(field, m * m * m);
    for v in start {
        e.insert(v);
    }
    let sign = if symmetric { field.one() } else { -field.one() };
    let mut extra = Vec::new();
    for j in 0..m {
        let from = if symmetric { j } else { j + 1 };
        for l in from..m {
            for k in 0..m {
                let mut entries = vec![((j * m + l) * m + k, field.one())];
                if j != l {
                    entries.push(((l * m + j) * m + k, sign.clone()));
                }
                let v = SparseVec::from_entries(entries);
                if e.insert(&v) {
                    extra.push(v);
                }
            }
        }
    }
    extra
}

/// Merges `Σ h_β ⊗ g_β` into as few terms as the span of the `h_β` allows.
fn reduce_rank(
    field: Field,
    na: usize,
    terms: &[(SparseVec, SparseVec)],
) -> Vec<(SparseVec, SparseVec)> {
    let span = Subspace::from_sparse(field, na * na * na, terms.iter().map(|(h, _)| h.clone()).collect())
        .expect("coordinates in range");
    let mut gs = vec![Accumulator::new(); span.dim()];
    for (h, g) in terms {
        let coords = span.coordinates(h).expect("h lies in its own span");
        for (acc, c) in gs.iter_mut().zip(&coords) {
            acc.add_scaled(c, g);
        }
    }
    span.basis().iter().cloned().zip(gs.into_iter().map(Accumulator::finish)).collect()
}

/// Splits a bracket in `K⁻(A⊗B)` into parity-pure tensor terms.
///
/// The tensor is expanded over a basis of `Hom(B⊗B, B)` adapted to
/// `K⁺(B) ⊕ C_s ⊕ K⁻(B) ⊕ C_a` (complements inside the symmetric and
/// antisymmetric maps); coefficients along the complements must vanish.
/// All invariants (reassembly, membership, the product identity) are
/// verified before returning.
pub fn decompose(br: &Bracket, a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Result<DecomposedBracket> {
    require_tensor(br.algebra(), a, b)?;
    let field = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let mb = nb * nb * nb;

    // f_t(e_i, e_k) for each elementary map t = (j, l, m) on B
    let mut fs = vec![Vec::new(); mb];
    for i in 0..na {
        for k in 0..na {
            for j in 0..nb {
                for l in 0..nb {
                    for (idx, c) in br.value(i * nb + j, k * nb + l).iter() {
                        let (o, m) = (idx / nb, idx % nb);
                        fs[(j * nb + l) * nb + m].push(((i * na + k) * na + o, c.clone()));
                    }
                }
            }
        }
    }
    let fs: Vec<SparseVec> = fs.into_iter().map(SparseVec::from_entries).collect();

    let kp_b = kplus(b)?;
    let km_b = kminus(b)?;
    let kp_basis = kp_b.subspace().basis().to_vec();
    let km_basis = km_b.subspace().basis().to_vec();
    let cs = complete_basis(field, nb, &kp_basis, true);
    let ca = complete_basis(field, nb, &km_basis, false);
    let groups = [kp_basis, cs, km_basis, ca];
    let gbasis: Vec<&SparseVec> = groups.iter().flatten().collect();
    if gbasis.len() != mb {
        return Err(Error::Reconstruction("adapted basis of Hom(B⊗B, B) is incomplete".into()));
    }
    let mut gm = Matrix::zeros(field, mb, mb);
    for (col, g) in gbasis.iter().enumerate() {
        for (row, c) in g.iter() {
            gm.set(row, col, c.clone());
        }
    }
    // h_β = Σ_t (G⁻¹)_{βt} f_t
    let mut hs = vec![Accumulator::new(); mb];
    for (t, f_t) in fs.iter().enumerate() {
        if f_t.is_empty() {
            continue;
        }
        let mut e = vec![field.zero(); mb];
        e[t] = field.one();
        let Solution::Solved(x) = solve(&gm, &e)? else {
            return Err(Error::Reconstruction("adapted basis is singular".into()));
        };
        for (beta, c) in x.iter().enumerate() {
            if !c.is_zero() {
                hs[beta].add_scaled(c, f_t);
            }
        }
    }
    let hs: Vec<SparseVec> = hs.into_iter().map(Accumulator::finish).collect();

    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let offsets = [0, sizes[0], sizes[0] + sizes[1], sizes[0] + sizes[1] + sizes[2]];
    for (g, name) in [(1, "symmetric complement of K⁺(B)"), (3, "antisymmetric complement of K⁻(B)")] {
        if hs[offsets[g]..offsets[g] + sizes[g]].iter().any(|h| !h.is_empty()) {
            return Err(Error::Reconstruction(format!("nonzero component along the {name}")));
        }
    }
    let family = |g: usize| -> Vec<(SparseVec, SparseVec)> {
        (offsets[g]..offsets[g] + sizes[g])
            .filter(|&beta| !hs[beta].is_empty())
            .map(|beta| (hs[beta].clone(), gbasis[beta].clone()))
            .collect()
    };
    let mut components = Vec::new();
    for (g, parity) in [(0, Parity::AntiSymSym), (2, Parity::SymAntiSym)] {
        for (h, gv) in reduce_rank(field, na, &family(g)) {
            components.push(Component {
                f: Bracket::from_coords(a, &h),
                g: Bracket::from_coords(b, &gv),
                parity,
            });
        }
    }
    let d = DecomposedBracket {
        left: Arc::clone(a),
        right: Arc::clone(b),
        components,
    };
    verify(&d, br, &kminus(a)?, &kplus(a)?, &kp_b, &km_b)?;
    Ok(d)
}

fn verify(
    d: &DecomposedBracket,
    br: &Bracket,
    km_a: &BracketSpace,
    kp_a: &BracketSpace,
    kp_b: &BracketSpace,
    km_b: &BracketSpace,
) -> Result<()> {
    if d.reassemble(br.algebra())? != *br {
        return Err(Error::Reconstruction("components do not reassemble the bracket".into()));
    }
    for (n, c) in d.components.iter().enumerate() {
        let ok = match c.parity {
            Parity::AntiSymSym => km_a.contains(&c.f) && kp_b.contains(&c.g),
            Parity::SymAntiSym => kp_a.contains(&c.f) && km_b.contains(&c.g),
        };
        if !ok {
            return Err(Error::Reconstruction(format!("component {n} is outside its parity spaces")));
        }
    }
    if !cross_residual_vanishes(d) {
        return Err(Error::Reconstruction("product identity residual is nonzero".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{tensor, truncated_poly};
    use crate::spaces::kminus;
    use crate::tensorext::tensor_bracket;

    fn x2() -> Arc<FiniteAlgebra> {
        Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap())
    }

    #[test]
    fn product_with_multiplication_is_one_term() {
        let a = x2();
        let b = Arc::new(truncated_poly(Field::Rationals, &[3]).unwrap());
        let phi = kminus(&a).unwrap().basis().remove(0);
        let t = tensor_bracket(&phi, &Bracket::zero(&b)).unwrap();
        let d = decompose(&t, &a, &b).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].parity, Parity::AntiSymSym);
    }

    #[test]
    fn basis_of_kminus_on_x2_x2() {
        let a = x2();
        let t = Arc::new(tensor(&a, &a).unwrap());
        for br in kminus(&t).unwrap().basis() {
            let d = decompose(&br, &a, &a).unwrap();
            assert_eq!(d.reassemble(&t).unwrap(), br);
        }
        assert!(decompose(&Bracket::zero(&t), &a, &a).unwrap().components.is_empty());
    }
}
