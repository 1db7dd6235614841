use std::sync::Arc;

use crate::algebra::{tensor, truncated_poly, Element, FiniteAlgebra};
use crate::bracket::{
    is_anticommutative, is_contact, is_poisson, jacobi_check, wedge, yoyo_check, Bracket, CheckBudget, LinearOp,
    Verdict,
};
use crate::error::{Error, Result};
use crate::exactlin::{rref, solve, verify_certificate, Accumulator, Field, Matrix, Scalar, Solution, SparseVec};
use crate::spaces::{der, x2_bracket, x2_factor, X2Canonical};

/// Whether a bracket on `A` extends, together with `φ` on `K[x]/(x²)`, to a
/// contact bracket on `A ⊗ K[x]/(x²)`.
#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub feasible: bool,
    /// Basis of `Der(A)`; the unknowns are coordinates over it.
    pub der_basis: Vec<LinearOp>,
    /// `M c = rhs`, one row per (basis pair, output coordinate).
    pub system: Matrix,
    pub rhs: Vec<Scalar>,
    pub witness_d: Option<LinearOp>,
    /// `y` with `y M = 0` and `y · rhs != 0`.
    pub certificate: Option<Vec<Scalar>>,
    pub certificate_verified: bool,
    /// The cubic condition in `β` vanishes identically at `β = 0`.
    pub first_condition_vanishes: bool,
    /// For Poisson input: the system agrees (after rref) with the direct
    /// invariance encoding `D([a,b]) - [Da,b] + [Db,a] = [a,b]`.
    pub poisson_encoding_agrees: Option<bool>,
    /// The assembled extension when feasible, and its Jacobi verdict.
    pub extension: Option<Bracket>,
    pub extension_jacobi: Option<Verdict>,
}

fn at(alg: &FiniteAlgebra, i: usize) -> SparseVec {
    SparseVec::unit(i, alg.field())
}

/// `D(α(a,b)) - α(Da,b) + α(Db,a) + α(1,b)Da - α(1,a)Db`.
fn d_part(alpha: &Bracket, d: &LinearOp, i: usize, j: usize) -> SparseVec {
    let alg = alpha.algebra();
    let one = alg.field().one();
    let m1 = -alg.field().one();
    let u1 = alg.unit_sparse();
    let (a, b) = (at(alg, i), at(alg, j));
    let mut acc = Accumulator::new();
    acc.add_scaled(&one, &d.apply_sparse(alpha.value(i, j)));
    acc.add_scaled(&m1, &alpha.eval_sparse(d.image(i), &b));
    acc.add_scaled(&one, &alpha.eval_sparse(d.image(j), &a));
    acc.add_scaled(&one, &alg.mul_sparse(&alpha.eval_sparse(&u1, &b), d.image(i)));
    acc.add_scaled(&m1, &alg.mul_sparse(&alpha.eval_sparse(&u1, &a), d.image(j)));
    acc.finish()
}

/// `α(u,a)b - α(u,b)a - α(a,b)u + 2α(1,b)au - 2α(1,a)bu`.
fn u_part(alpha: &Bracket, u: &SparseVec, i: usize, j: usize) -> SparseVec {
    let alg = alpha.algebra();
    let f = alg.field();
    let (one, m1, two, m2) = (f.one(), -f.one(), f.from_i64(2), f.from_i64(-2));
    let u1 = alg.unit_sparse();
    let (a, b) = (at(alg, i), at(alg, j));
    let mul = |x: &SparseVec, y: &SparseVec| alg.mul_sparse(x, y);
    let mut acc = Accumulator::new();
    acc.add_scaled(&one, &mul(&alpha.eval_sparse(u, &a), &b));
    acc.add_scaled(&m1, &mul(&alpha.eval_sparse(u, &b), &a));
    acc.add_scaled(&m1, &mul(alpha.value(i, j), u));
    acc.add_scaled(&two, &mul(&mul(&alpha.eval_sparse(&u1, &b), &a), u));
    acc.add_scaled(&m2, &mul(&mul(&alpha.eval_sparse(&u1, &a), &b), u));
    acc.finish()
}

/// Cubic condition on `(α, β, D, u)`, evaluated on one basis triple.
fn first_condition(alpha: &Bracket, beta: &Bracket, d: &LinearOp, u: &SparseVec, i: usize, j: usize, k: usize) -> SparseVec {
    let alg = alpha.algebra();
    let one = alg.field().one();
    let m1 = -alg.field().one();
    let mut acc = Accumulator::new();
    for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
        let ez = at(alg, z);
        acc.add_scaled(&one, &beta.eval_sparse(alpha.value(x, y), &ez));
        acc.add_scaled(&one, &alpha.eval_sparse(beta.value(x, y), &ez));
        acc.add_scaled(&m1, &alg.mul_sparse(beta.value(x, y), d.image(z)));
        acc.add_scaled(&m1, &alg.mul_sparse(&alg.mul_sparse(&ez, beta.value(x, y)), u));
    }
    acc.finish()
}

fn stack(columns: &[Vec<SparseVec>], rhs: &[SparseVec], n: usize, field: Field) -> (Matrix, Vec<Scalar>) {
    let rows = rhs.len() * n;
    let mut m = Matrix::zeros(field, rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (p, v) in col.iter().enumerate() {
            for (k, x) in v.iter() {
                m.set(p * n + k, c, x.clone());
            }
        }
    }
    let mut b = vec![field.zero(); rows];
    for (p, v) in rhs.iter().enumerate() {
        for (k, x) in v.iter() {
            b[p * n + k] = x.clone();
        }
    }
    (m, b)
}

fn augmented_rref(m: &Matrix, b: &[Scalar]) -> Matrix {
    let rows = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    rref(&Matrix::from_rows(m.field(), rows).expect("rectangular"))
}

/// Solves for `D ∈ Der(A)` such that `(α, β, D, u) = (br_a, 0, D, 1)` gives a
/// contact bracket on `A ⊗ K[x]/(x²)` restricting to `br_a` and `φ`.
pub fn extension_feasibility_x2(algebra: &Arc<FiniteAlgebra>, br_a: &Bracket) -> Result<ExtensionReport> {
    let budget = CheckBudget::default();
    if !is_anticommutative(br_a).holds() || yoyo_check(br_a, &budget).fails() {
        return Err(Error::Precondition("bracket is not in K⁻(A)".into()));
    }
    if is_contact(br_a, &budget).fails() {
        return Err(Error::Precondition("bracket is not contact".into()));
    }
    let br_a = br_a.rebased(algebra)?;
    let n = algebra.dim();
    let field = algebra.field();
    let der_basis = der(algebra)?.basis();
    let u = algebra.unit_sparse();
    let pairs: Vec<(usize, usize)> = (0..n * n).map(|t| (t / n, t % n)).collect();

    let columns: Vec<Vec<SparseVec>> = der_basis
        .iter()
        .map(|d| pairs.iter().map(|&(i, j)| d_part(&br_a, d, i, j)).collect())
        .collect();
    let rhs: Vec<SparseVec> = pairs.iter().map(|&(i, j)| u_part(&br_a, &u, i, j).scaled(&-field.one())).collect();
    let (system, b) = stack(&columns, &rhs, n, field);

    let zero_beta = Bracket::zero(algebra);
    let first_condition_vanishes = der_basis.iter().chain(std::iter::once(&LinearOp::zero(algebra))).all(|d| {
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| first_condition(&br_a, &zero_beta, d, &u, i, j, k).is_empty())))
    });

    let poisson_encoding_agrees = if is_poisson(&br_a, &budget).holds() {
        let direct: Vec<Vec<SparseVec>> = der_basis
            .iter()
            .map(|d| {
                let m1 = -field.one();
                pairs
                    .iter()
                    .map(|&(i, j)| {
                        d.apply_sparse(br_a.value(i, j))
                            .add_scaled(&m1, &br_a.eval_sparse(d.image(i), &at(algebra, j)))
                            .add_scaled(&field.one(), &br_a.eval_sparse(d.image(j), &at(algebra, i)))
                    })
                    .collect()
            })
            .collect();
        let direct_rhs: Vec<SparseVec> = pairs.iter().map(|&(i, j)| br_a.value(i, j).clone()).collect();
        let (dm, db) = stack(&direct, &direct_rhs, n, field);
        Some(augmented_rref(&system, &b) == augmented_rref(&dm, &db))
    } else {
        None
    };

    let mut report = ExtensionReport {
        feasible: false,
        der_basis,
        system,
        rhs: b,
        witness_d: None,
        certificate: None,
        certificate_verified: false,
        first_condition_vanishes,
        poisson_encoding_agrees,
        extension: None,
        extension_jacobi: None,
    };
    match solve(&report.system, &report.rhs)? {
        Solution::Solved(c) => {
            let mut d = LinearOp::zero(algebra);
            for (ci, di) in c.iter().zip(&report.der_basis) {
                d = d.add(&di.scale(ci));
            }
            // independent re-check of the condition with the witness
            let holds = pairs.iter().all(|&(i, j)| {
                d_part(&br_a, &d, i, j).add_scaled(&field.one(), &u_part(&br_a, &u, i, j)).is_empty()
            });
            if !holds {
                return Err(Error::Reconstruction("solver witness violates the extension condition".into()));
            }
            let t = Arc::new(tensor(algebra, &x2_factor(field))?);
            let ext = x2_bracket(
                &t,
                &X2Canonical {
                    alpha: br_a.clone(),
                    beta: zero_beta,
                    d: d.clone(),
                    u: algebra.one(),
                },
            )?;
            report.extension_jacobi = Some(jacobi_check(&ext, &budget).verdict());
            report.extension = Some(ext);
            report.witness_d = Some(d);
            report.feasible = true;
        }
        Solution::Infeasible { certificate } => {
            report.certificate_verified = verify_certificate(&report.system, &report.rhs, &certificate)?;
            report.certificate = Some(certificate);
        }
    }
    Ok(report)
}

/// Exhaustive (over `F_p`) or grid (over `Q`) search over `D ∈ Der(A)` for a
/// Jacobi-satisfying `(br_a, 0, D, 1)` bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub grid: Vec<Scalar>,
    pub candidates: usize,
    pub jacobi_hits: usize,
}

fn brute_force(algebra: &Arc<FiniteAlgebra>, br_a: &Bracket, der_basis: &[LinearOp]) -> Result<BruteForce> {
    let field = algebra.field();
    let grid: Vec<Scalar> = match field {
        Field::Prime { p } => (0..p as i64).map(|v| field.from_i64(v)).collect(),
        Field::Rationals => (-1..=1).map(|v| field.from_i64(v)).collect(),
    };
    let t = Arc::new(tensor(algebra, &x2_factor(field))?);
    let r = der_basis.len();
    let total = grid.len().pow(r as u32);
    let budget = CheckBudget::default();
    let mut hits = 0;
    for mut code in 0..total {
        let mut d = LinearOp::zero(algebra);
        for di in der_basis {
            d = d.add(&di.scale(&grid[code % grid.len()]));
            code /= grid.len();
        }
        let br = x2_bracket(
            &t,
            &X2Canonical {
                alpha: br_a.clone(),
                beta: Bracket::zero(algebra),
                d,
                u: algebra.one(),
            },
        )?;
        if jacobi_check(&br, &budget).holds() {
            hits += 1;
        }
    }
    Ok(BruteForce {
        grid,
        candidates: total,
        jacobi_hits: hits,
    })
}

/// `K[x,y]/(x²,y²)` with `[x,y] = xy`, i.e. the biderivation `(x∂x) ∧ (y∂y)`.
pub fn mz_algebra(field: Field) -> Result<(Arc<FiniteAlgebra>, Bracket)> {
    let a = Arc::new(truncated_poly(field, &[2, 2])?);
    let (x, y) = (a.variable(0).expect("x"), a.variable(1).expect("y"));
    let br = wedge(&LinearOp::partial(&a, 0)?.left_mul(&x), &LinearOp::partial(&a, 1)?.left_mul(&y))?;
    Ok((a, br))
}

#[derive(Debug, Clone)]
pub struct MzReport {
    pub field: Field,
    pub algebra: Arc<FiniteAlgebra>,
    pub bracket: Bracket,
    pub is_poisson: Verdict,
    pub der_basis: Vec<LinearOp>,
    /// `fy + gx - [f,y] + [g,x]` for each basis derivation `f∂x + g∂y`.
    pub expression: Vec<Element>,
    /// `[x, y] = xy`, the value the expression would have to reach.
    pub target: Element,
    pub extension: ExtensionReport,
    pub brute_force: BruteForce,
    /// Feasibility of the same analysis for the zero bracket on `A`.
    pub zero_bracket_feasible: bool,
}

impl MzReport {
    /// Every claim of the counterexample holds.
    pub fn reproduced(&self) -> bool {
        self.is_poisson == Verdict::Holds
            && self.der_basis.len() == 4
            && self.expression.iter().all(Element::is_zero)
            && !self.target.is_zero()
            && !self.extension.feasible
            && self.extension.certificate_verified
            && self.extension.poisson_encoding_agrees == Some(true)
            && self.extension.first_condition_vanishes
            && self.brute_force.jacobi_hits == 0
    }
}

pub fn mz_counterexample(field: Field) -> Result<MzReport> {
    let (a, br) = mz_algebra(field)?;
    let budget = CheckBudget::default();
    let is_poisson = is_poisson(&br, &budget).verdict();
    let (x, y) = (a.variable(0).expect("x"), a.variable(1).expect("y"));
    let extension = extension_feasibility_x2(&a, &br)?;
    let der_basis = extension.der_basis.clone();
    let expression = der_basis
        .iter()
        .map(|d| {
            let (f, g) = (d.apply(&x), d.apply(&y));
            let t = &a.multiply(&f, &y) + &a.multiply(&g, &x);
            &(&t - &br.eval(&f, &y)) + &br.eval(&g, &x)
        })
        .collect();
    let brute_force = brute_force(&a, &br, &der_basis)?;
    let zero_bracket_feasible = extension_feasibility_x2(&a, &Bracket::zero(&a))?.feasible;
    Ok(MzReport {
        field,
        target: br.eval(&x, &y),
        algebra: a,
        bracket: br,
        is_poisson,
        der_basis,
        expression,
        extension,
        brute_force,
        zero_bracket_feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::is_lie;
    use crate::spaces::kminus;

    #[test]
    fn counterexample_over_q_and_f5() {
        for field in [Field::Rationals, Field::prime(5).unwrap()] {
            let r = mz_counterexample(field).unwrap();
            assert!(r.reproduced(), "{field}: {:?}", r.extension.feasible);
            assert_eq!(r.target, r.algebra.monomial(&[1, 1]).unwrap());
        }
    }

    #[test]
    fn zero_bracket_extends() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap());
        let r = extension_feasibility_x2(&a, &Bracket::zero(&a)).unwrap();
        assert!(r.feasible);
        assert_eq!(r.extension_jacobi, Some(Verdict::Holds));
    }

    #[test]
    fn phi_on_x2() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2]).unwrap());
        let phi = kminus(&a).unwrap().basis().remove(0);
        let r = extension_feasibility_x2(&a, &phi).unwrap();
        assert_eq!(r.poisson_encoding_agrees, None);
        if r.feasible {
            assert!(is_lie(r.extension.as_ref().unwrap(), &CheckBudget::default()).holds());
        } else {
            assert!(r.certificate_verified);
        }
    }

    #[test]
    fn non_contact_rejected() {
        let a = Arc::new(truncated_poly(Field::Rationals, &[2, 2]).unwrap());
        let q = a.field();
        let sym = Bracket::from_entries(&a, &[(1, 2, 0, q.one()), (2, 1, 0, q.one())]).unwrap();
        assert!(extension_feasibility_x2(&a, &sym).is_err());
    }
}
