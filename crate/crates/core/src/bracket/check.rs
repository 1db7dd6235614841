use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Bracket;
use crate::algebra::{Element, FiniteAlgebra};
use crate::exactlin::{Accumulator, Scalar, SparseVec};

/// How much of the basis-triple space an identity check may cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckBudget {
    /// Exhaustive verification when `dim <= exhaustive_max_dim`.
    pub exhaustive_max_dim: usize,
    pub samples: usize,
    pub seed: u64,
    /// Monomials of total degree at most this enter the deterministic sweep.
    pub low_degree: u32,
    pub max_witnesses: usize,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            exhaustive_max_dim: 64,
            samples: 100_000,
            seed: 42,
            low_degree: 3,
            max_witnesses: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled {
        seed: u64,
        samples: usize,
        low_degree_triples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    NotFalsified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails => write!(f, "fails"),
            Verdict::NotFalsified => write!(f, "not falsified (sampled)"),
        }
    }
}

/// Basis indices at which an identity has a nonzero residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub identity: String,
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    pub residual: String,
    pub residual_coords: Vec<(usize, Scalar)>,
}

impl Witness {
    pub(crate) fn new(algebra: &FiniteAlgebra, identity: &str, indices: &[usize], residual: &SparseVec) -> Self {
        let el = Element::from_sparse(residual, algebra.field(), algebra.dim());
        Witness {
            identity: identity.to_string(),
            indices: indices.to_vec(),
            labels: indices.iter().map(|&i| algebra.labels()[i].clone()).collect(),
            residual: algebra.label_of(&el),
            residual_coords: residual.iter().map(|(k, c)| (k, c.clone())).collect(),
        }
    }

    pub fn residual_element(&self, algebra: &FiniteAlgebra) -> Element {
        let v = SparseVec::from_entries(self.residual_coords.iter().cloned());
        Element::from_sparse(&v, algebra.field(), algebra.dim())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub property: String,
    #[serde(flatten)]
    pub mode: CheckMode,
    pub checked: u64,
    pub violations: u64,
    /// Set when the sweep stopped after collecting `max_witnesses`.
    pub stopped_early: bool,
    pub witnesses: Vec<Witness>,
}

impl IdentityReport {
    pub fn verdict(&self) -> Verdict {
        if self.violations > 0 {
            Verdict::Fails
        } else if self.mode == CheckMode::Exhaustive {
            Verdict::Holds
        } else {
            Verdict::NotFalsified
        }
    }

    /// Certified: exhaustive and no violation.
    pub fn holds(&self) -> bool {
        self.verdict() == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.violations > 0
    }

    pub(crate) fn merge(property: &str, parts: Vec<IdentityReport>, max_witnesses: usize) -> Self {
        let mode = parts
            .iter()
            .map(|p| p.mode)
            .find(|m| *m != CheckMode::Exhaustive)
            .unwrap_or(CheckMode::Exhaustive);
        let mut witnesses: Vec<Witness> = parts.iter().flat_map(|p| p.witnesses.clone()).collect();
        witnesses.truncate(max_witnesses);
        IdentityReport {
            property: property.to_string(),
            mode,
            checked: parts.iter().map(|p| p.checked).sum(),
            violations: parts.iter().map(|p| p.violations).sum(),
            stopped_early: parts.iter().any(|p| p.stopped_early),
            witnesses,
        }
    }
}

/// Which basis triples an identity needs, given its symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleShape {
    /// Alternating trilinear maps: `i < j < k`.
    Alternating,
    /// Symmetric in the first two slots: `i <= j`, any `k`.
    SymmetricPair,
    Ordered,
}

pub(crate) struct TripleSet {
    pub triples: Vec<[usize; 3]>,
    pub mode: CheckMode,
}

fn shaped(indices: &[usize], shape: TripleShape, out: &mut Vec<[usize; 3]>) {
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            for (c, &k) in indices.iter().enumerate() {
                let keep = match shape {
                    TripleShape::Alternating => a < b && b < c,
                    TripleShape::SymmetricPair => a <= b,
                    TripleShape::Ordered => true,
                };
                if keep {
                    out.push([i, j, k]);
                }
            }
        }
    }
}

impl TripleSet {
    /// Exhaustive when the budget allows; otherwise every triple of
    /// low-degree monomials first, then seeded uniform samples.
    pub fn plan(algebra: &FiniteAlgebra, shape: TripleShape, budget: &CheckBudget) -> Self {
        let n = algebra.dim();
        let mut triples = Vec::new();
        if n <= budget.exhaustive_max_dim {
            shaped(&(0..n).collect::<Vec<_>>(), shape, &mut triples);
            return TripleSet {
                triples,
                mode: CheckMode::Exhaustive,
            };
        }
        let low: Vec<usize> = (0..n)
            .filter(|&i| algebra.degree(i).is_some_and(|d| d <= budget.low_degree))
            .collect();
        shaped(&low, shape, &mut triples);
        let low_degree_triples = triples.len();
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        for _ in 0..budget.samples {
            triples.push([rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)]);
        }
        TripleSet {
            triples,
            mode: CheckMode::Sampled {
                seed: budget.seed,
                samples: budget.samples,
                low_degree_triples,
            },
        }
    }
}

const BLOCK: usize = 4096;

/// Evaluates `residual` on every triple in fixed-size blocks (parallel
/// inside a block, merged in order), stopping after the block that
/// completes `max_witnesses`. Output does not depend on the worker count.
pub(crate) fn sweep<F>(
    algebra: &FiniteAlgebra,
    property: &str,
    set: &TripleSet,
    budget: &CheckBudget,
    residual: F,
) -> IdentityReport
where
    F: Fn(usize, usize, usize) -> SparseVec + Sync,
{
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut witnesses = Vec::new();
    let mut stopped_early = false;
    for block in set.triples.chunks(BLOCK) {
        let hits: Vec<([usize; 3], SparseVec)> = block
            .par_iter()
            .filter_map(|&[i, j, k]| {
                let r = residual(i, j, k);
                (!r.is_empty()).then_some(([i, j, k], r))
            })
            .collect();
        checked += block.len() as u64;
        violations += hits.len() as u64;
        for (t, r) in hits {
            if witnesses.len() < budget.max_witnesses {
                witnesses.push(Witness::new(algebra, property, &t, &r));
            }
        }
        if witnesses.len() >= budget.max_witnesses {
            stopped_early = checked < set.triples.len() as u64;
            break;
        }
    }
    IdentityReport {
        property: property.to_string(),
        mode: set.mode,
        checked,
        violations,
        stopped_early,
        witnesses,
    }
}

fn pair_check(
    br: &Bracket,
    property: &str,
    strict: bool,
    residual: impl Fn(usize, usize) -> SparseVec,
) -> IdentityReport {
    let a = br.algebra();
    let n = a.dim();
    let mut checked = 0;
    let mut violations = 0;
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in i..n {
            if strict && i == j {
                continue;
            }
            checked += 1;
            let r = residual(i, j);
            if !r.is_empty() {
                violations += 1;
                if witnesses.len() < CheckBudget::default().max_witnesses {
                    witnesses.push(Witness::new(a, property, &[i, j], &r));
                }
            }
        }
    }
    IdentityReport {
        property: property.to_string(),
        mode: CheckMode::Exhaustive,
        checked,
        violations,
        stopped_early: false,
        witnesses,
    }
}

/// `[e_i, e_j] + [e_j, e_i] = 0` on all pairs, including `i = j`.
pub fn is_anticommutative(br: &Bracket) -> IdentityReport {
    let one = br.algebra().field().one();
    pair_check(br, "anticommutativity", false, |i, j| {
        br.value(i, j).add_scaled(&one, br.value(j, i))
    })
}

pub fn is_commutative(br: &Bracket) -> IdentityReport {
    let m1 = -br.algebra().field().one();
    pair_check(br, "commutativity", true, |i, j| {
        br.value(i, j).add_scaled(&m1, br.value(j, i))
    })
}

fn bracket_with_basis(br: &Bracket, v: &SparseVec, k: usize) -> SparseVec {
    let mut acc = Accumulator::new();
    for (l, c) in v.iter() {
        acc.add_scaled(c, br.value(l, k));
    }
    acc.finish()
}

/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
pub fn jacobiator_basis(br: &Bracket, i: usize, j: usize, k: usize) -> SparseVec {
    let mut acc = Accumulator::new();
    let one = br.algebra().field().one();
    for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
        acc.add_scaled(&one, &bracket_with_basis(br, br.value(x, y), z));
    }
    acc.finish()
}

pub fn jacobiator(br: &Bracket, a: &Element, b: &Element, c: &Element) -> Element {
    let ab = br.eval(a, b);
    let bc = br.eval(b, c);
    let ca = br.eval(c, a);
    let t = &br.eval(&ab, c) + &br.eval(&bc, a);
    &t + &br.eval(&ca, b)
}

/// Jacobi identity alone; alternating triples suffice when the bracket is
/// anticommutative, otherwise all ordered triples are considered.
pub fn jacobi_check(br: &Bracket, budget: &CheckBudget) -> IdentityReport {
    let shape = if is_anticommutative(br).holds() {
        TripleShape::Alternating
    } else {
        TripleShape::Ordered
    };
    let set = TripleSet::plan(br.algebra(), shape, budget);
    sweep(br.algebra(), "jacobi", &set, budget, |i, j, k| jacobiator_basis(br, i, j, k))
}

pub fn is_lie(br: &Bracket, budget: &CheckBudget) -> IdentityReport {
    IdentityReport::merge(
        "lie",
        vec![is_anticommutative(br), jacobi_check(br, budget)],
        budget.max_witnesses,
    )
}

fn right_unit_values(br: &Bracket) -> Vec<SparseVec> {
    let one = br.algebra().unit_sparse();
    (0..br.dim())
        .map(|k| br.eval_sparse(&SparseVec::unit(k, br.algebra().field()), &one))
        .collect()
}

fn left_unit_values(br: &Bracket) -> Vec<SparseVec> {
    let one = br.algebra().unit_sparse();
    (0..br.dim())
        .map(|k| br.eval_sparse(&one, &SparseVec::unit(k, br.algebra().field())))
        .collect()
}

fn times_basis(a: &FiniteAlgebra, v: &SparseVec, j: usize) -> SparseVec {
    let mut acc = Accumulator::new();
    for (l, c) in v.iter() {
        acc.add_scaled(c, a.product(l, j));
    }
    acc.finish()
}

/// Shared shape of both contact-type identities:
/// `[e_i e_j, e_k] - [e_i,e_k] e_j - [e_j,e_k] e_i - sign · u_k e_i e_j`.
fn leibniz_like_residual(br: &Bracket, i: usize, j: usize, k: usize, unit_term: &SparseVec, sign: &Scalar) -> SparseVec {
    let a = br.algebra();
    let mut acc = Accumulator::new();
    let one = a.field().one();
    let m1 = -&one;
    acc.add_scaled(&one, &bracket_with_basis(br, a.product(i, j), k));
    acc.add_scaled(&m1, &times_basis(a, br.value(i, k), j));
    acc.add_scaled(&m1, &times_basis(a, br.value(j, k), i));
    acc.add_scaled(&-sign, &a.mul_sparse(unit_term, a.product(i, j)));
    acc.finish()
}

/// `[e_i e_j, e_k] - [e_i,e_k] e_j - [e_j,e_k] e_i - [e_k,1] e_i e_j`.
pub fn contact_residual_basis(br: &Bracket, i: usize, j: usize, k: usize) -> SparseVec {
    let one = br.algebra().unit_sparse();
    let ck1 = br.eval_sparse(&SparseVec::unit(k, br.algebra().field()), &one);
    leibniz_like_residual(br, i, j, k, &ck1, &br.algebra().field().one())
}

/// `[ab,c] - [a,c]b - [b,c]a - [c,1]ab`.
pub fn contact_residual(br: &Bracket, a: &Element, b: &Element, c: &Element) -> Element {
    let alg = br.algebra();
    let ab = alg.multiply(a, b);
    let c1 = br.eval(c, &alg.one());
    let t = &br.eval(&ab, c) - &alg.multiply(&br.eval(a, c), b);
    let t = &t - &alg.multiply(&br.eval(b, c), a);
    &t - &alg.multiply(&c1, &ab)
}

/// `[e_i e_j, e_k] - [e_i,e_k] e_j - [e_j,e_k] e_i + [1,e_k] e_i e_j`.
pub fn yoyo_residual_basis(br: &Bracket, i: usize, j: usize, k: usize) -> SparseVec {
    let one = br.algebra().unit_sparse();
    let c1k = br.eval_sparse(&one, &SparseVec::unit(k, br.algebra().field()));
    leibniz_like_residual(br, i, j, k, &c1k, &-br.algebra().field().one())
}

/// `[ab,c] - [a,c]b - [b,c]a + [1,c]ab`.
pub fn yoyo_residual(br: &Bracket, a: &Element, b: &Element, c: &Element) -> Element {
    let alg = br.algebra();
    let ab = alg.multiply(a, b);
    let one_c = br.eval(&alg.one(), c);
    let t = &br.eval(&ab, c) - &alg.multiply(&br.eval(a, c), b);
    let t = &t - &alg.multiply(&br.eval(b, c), a);
    &t + &alg.multiply(&one_c, &ab)
}

/// `[ab,c] = [a,c]b + [b,c]a + [c,1]ab` alone, without Jacobi.
pub fn contact_identity(br: &Bracket, budget: &CheckBudget) -> IdentityReport {
    let set = TripleSet::plan(br.algebra(), TripleShape::SymmetricPair, budget);
    let ck1 = right_unit_values(br);
    let one = br.algebra().field().one();
    sweep(br.algebra(), "contact_identity", &set, budget, |i, j, k| {
        leibniz_like_residual(br, i, j, k, &ck1[k], &one)
    })
}

/// Lie algebra plus `[ab,c] = [a,c]b + [b,c]a + [c,1]ab`.
pub fn is_contact(br: &Bracket, budget: &CheckBudget) -> IdentityReport {
    let lie = is_lie(br, budget);
    IdentityReport::merge(
        "contact",
        vec![lie, contact_identity(br, budget)],
        budget.max_witnesses,
    )
}

/// Contact with `[e_i, 1] = 0` for every basis element.
pub fn is_poisson(br: &Bracket, budget: &CheckBudget) -> IdentityReport {
    let ck1 = right_unit_values(br);
    let a = br.algebra();
    let mut unit = IdentityReport {
        property: "poisson_unit".into(),
        mode: CheckMode::Exhaustive,
        checked: br.dim() as u64,
        violations: 0,
        stopped_early: false,
        witnesses: Vec::new(),
    };
    for (k, v) in ck1.iter().enumerate() {
        if !v.is_empty() {
            unit.violations += 1;
            if unit.witnesses.len() < budget.max_witnesses {
                unit.witnesses.push(Witness::new(a, "poisson_unit", &[k], v));
            }
        }
    }
    IdentityReport::merge("poisson", vec![is_contact(br, budget), unit], budget.max_witnesses)
}

/// `[ab,c] = [a,c]b + [b,c]a - [1,c]ab` over basis triples (membership test for `K±`).
pub fn yoyo_check(br: &Bracket, budget: &CheckBudget) -> IdentityReport {
    let set = TripleSet::plan(br.algebra(), TripleShape::SymmetricPair, budget);
    let c1k = left_unit_values(br);
    let m1 = -br.algebra().field().one();
    sweep(br.algebra(), "yoyo_identity", &set, budget, |i, j, k| {
        leibniz_like_residual(br, i, j, k, &c1k[k], &m1)
    })
}
