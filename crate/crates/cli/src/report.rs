//! Report bodies shared by the text and JSON renderers.

use std::fmt::Write as _;

use contactkit::{Bracket, CheckBudget, Element, Field, FiniteAlgebra, IdentityReport, LinearOp, Scalar};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub command: Vec<String>,
    pub config: Config,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Config {
    pub seed: u64,
    pub samples: usize,
    pub exhaustive_max_dim: usize,
    pub low_degree: u32,
}

impl From<&CheckBudget> for Config {
    fn from(b: &CheckBudget) -> Self {
        Config {
            seed: b.seed,
            samples: b.samples,
            exhaustive_max_dim: b.exhaustive_max_dim,
            low_degree: b.low_degree,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AlgebraSummary {
    pub field: Field,
    pub dim: usize,
    pub labels: Vec<String>,
}

impl AlgebraSummary {
    pub fn of(a: &FiniteAlgebra) -> Self {
        AlgebraSummary {
            field: a.field(),
            dim: a.dim(),
            labels: a.labels().to_vec(),
        }
    }
}

pub type Triple = (usize, usize, usize, Scalar);
/// `(row, col, c)`: the image of `e_col` has coefficient `c` on `e_row`.
pub type OpEntry = (usize, usize, Scalar);

pub fn op_entries(op: &LinearOp) -> Vec<OpEntry> {
    let n = op.algebra().dim();
    op.to_coords().iter().map(|(t, c)| (t / n, t % n, c.clone())).collect()
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Basis {
    Brackets(Vec<Vec<Triple>>),
    Operators(Vec<Vec<OpEntry>>),
}

#[derive(Debug, Serialize)]
pub struct SpacesBody {
    pub algebra: AlgebraSummary,
    pub which: String,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
}

#[derive(Debug, Serialize)]
pub struct CheckBody {
    pub algebra: AlgebraSummary,
    pub results: Vec<IdentityReport>,
}

#[derive(Debug, Serialize)]
pub struct MzBody {
    pub field: Field,
    pub is_poisson: String,
    pub dim_der: usize,
    /// `fy + gx - [f,y] + [g,x]` per basis derivation.
    pub expression: Vec<String>,
    pub target: String,
    pub feasible: bool,
    pub certificate: Option<Vec<Scalar>>,
    pub certificate_verified: bool,
    pub poisson_encoding_agrees: Option<bool>,
    pub brute_force_candidates: usize,
    pub brute_force_hits: usize,
    pub zero_bracket_feasible: bool,
    pub reproduced: bool,
}

#[derive(Debug, Serialize)]
pub struct ExtendBody {
    pub algebra: AlgebraSummary,
    pub feasible: bool,
    pub dim_der: usize,
    pub equations: usize,
    pub witness_d: Option<Vec<OpEntry>>,
    pub certificate: Option<Vec<Scalar>>,
    pub certificate_verified: bool,
    pub extension_jacobi: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ExportBody {
    pub algebra: AlgebraSummary,
    pub files: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Experiment<T: Serialize> {
    pub experiment: &'static str,
    #[serde(flatten)]
    pub report: T,
    pub reproduced: Option<bool>,
}

pub fn element(a: &FiniteAlgebra, e: &Element) -> String {
    a.label_of(e)
}

/// Nonzero values `[e_i, e_j] = ...` of a bracket, one per line.
pub fn bracket_table(br: &Bracket, indent: &str) -> String {
    let a = br.algebra();
    let mut out = String::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let v = br.eval(&a.basis(i), &a.basis(j));
            if !v.is_zero() {
                let l = a.labels();
                let _ = writeln!(out, "{indent}[{}, {}] = {}", l[i], l[j], a.label_of(&v));
            }
        }
    }
    if out.is_empty() {
        let _ = writeln!(out, "{indent}0");
    }
    out
}

/// `D(e_j) = ...` for the nonzero images.
pub fn operator_table(op: &LinearOp, indent: &str) -> String {
    let a = op.algebra();
    let mut out = String::new();
    for j in 0..a.dim() {
        let v = op.apply(&a.basis(j));
        if !v.is_zero() {
            let _ = writeln!(out, "{indent}{} -> {}", a.labels()[j], a.label_of(&v));
        }
    }
    if out.is_empty() {
        let _ = writeln!(out, "{indent}0");
    }
    out
}

pub fn identity_line(r: &IdentityReport) -> String {
    let mut s = format!(
        "{}: {} ({} checked, {} violation(s)",
        r.property,
        r.verdict(),
        r.checked,
        r.violations
    );
    if let contactkit::bracket::CheckMode::Sampled { seed, samples, .. } = r.mode {
        let _ = write!(s, "; sampled, seed {seed}, {samples} samples");
    } else {
        s.push_str("; exhaustive");
    }
    s.push(')');
    for w in &r.witnesses {
        let _ = write!(s, "\n    witness {} at ({}) -> {}", w.identity, w.labels.join(", "), w.residual);
    }
    s
}

/// Nonzero entries as `row:value`, e.g. a certificate over the equation rows.
pub fn scalars(v: &[Scalar]) -> String {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{i}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}
