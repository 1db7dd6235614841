//! JSON formats for algebras and brackets. Scalars are always strings.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use contactkit::algebra::truncated_poly;
use contactkit::{Bracket, Field, FiniteAlgebra, Scalar};
use serde::{Deserialize, Serialize};

// no `deny_unknown_fields`: serde does not support it together with `flatten`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub field: Field,
    #[serde(flatten)]
    pub spec: AlgebraSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraSpec {
    /// `K[x_1..x_n]/(x_1^{b_1}, ..)` with the graded monomial basis.
    Truncated { bounds: Vec<u32> },
    Explicit {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        unit: Vec<String>,
        /// `[i, j, k, "c"]`: `e_i e_j += c e_k`. Missing `j > i` entries mirror `i < j`.
        mult: Vec<(usize, usize, usize, String)>,
    },
}

/// An algebra given inline or by a path (relative to the referring file).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(PathBuf),
    Inline(AlgebraFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraRef>,
    /// `[i, j, k, "c"]`: `[e_i, e_j] += c e_k`.
    pub triples: Vec<(usize, usize, usize, String)>,
}

fn parse_scalar(field: Field, s: &str) -> Result<Scalar> {
    Ok(field.parse(s)?)
}

impl AlgebraFile {
    pub fn build(&self) -> Result<Arc<FiniteAlgebra>> {
        let field = self.field.validated()?;
        let alg = match &self.spec {
            AlgebraSpec::Truncated { bounds } => truncated_poly(field, bounds)?,
            AlgebraSpec::Explicit { dim, labels, unit, mult } => {
                let labels = match labels {
                    Some(l) if l.len() != *dim => bail!("{} labels for dimension {dim}", l.len()),
                    Some(l) => l.clone(),
                    None => (0..*dim).map(|i| format!("e{i}")).collect(),
                };
                if unit.len() != *dim {
                    bail!("unit has {} coordinates for dimension {dim}", unit.len());
                }
                let unit = unit.iter().map(|s| parse_scalar(field, s)).collect::<Result<Vec<_>>>()?;
                let entries = mult
                    .iter()
                    .map(|(i, j, k, c)| Ok((*i, *j, *k, parse_scalar(field, c)?)))
                    .collect::<Result<Vec<_>>>()?;
                FiniteAlgebra::new(field, labels, unit, &entries)?
            }
        };
        let violations = alg.validate();
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
            bail!("invalid algebra ({} violation(s)):\n{}", violations.len(), list.join("\n"));
        }
        Ok(Arc::new(alg))
    }

    /// Explicit structure constants of `alg` (the `i <= j` half).
    pub fn explicit(alg: &FiniteAlgebra) -> Self {
        AlgebraFile {
            field: alg.field(),
            spec: AlgebraSpec::Explicit {
                dim: alg.dim(),
                labels: Some(alg.labels().to_vec()),
                unit: alg.unit_coords().iter().map(Scalar::to_string).collect(),
                mult: alg
                    .structure_constants()
                    .into_iter()
                    .map(|(i, j, k, c)| (i, j, k, c.to_string()))
                    .collect(),
            },
        }
    }
}

impl BracketFile {
    pub fn from_bracket(br: &Bracket, algebra: Option<AlgebraRef>) -> Self {
        BracketFile {
            algebra,
            triples: br.entries().into_iter().map(|(i, j, k, c)| (i, j, k, c.to_string())).collect(),
        }
    }

    pub fn build(&self, algebra: &Arc<FiniteAlgebra>) -> Result<Bracket> {
        let entries = self
            .triples
            .iter()
            .map(|(i, j, k, c)| Ok((*i, *j, *k, parse_scalar(algebra.field(), c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Bracket::from_entries(algebra, &entries)?)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_algebra(path: &Path) -> Result<Arc<FiniteAlgebra>> {
    let file: AlgebraFile = read_json(path)?;
    file.build().with_context(|| format!("in {}", path.display()))
}

/// Loads a bracket together with its algebra. `--algebra` wins when given; an
/// algebra referenced by the bracket file must then agree with it.
pub fn load_bracket(path: &Path, algebra: Option<&Path>) -> Result<(Arc<FiniteAlgebra>, Bracket)> {
    let file: BracketFile = read_json(path)?;
    let referenced = match &file.algebra {
        None => None,
        Some(AlgebraRef::Inline(a)) => Some(a.build().with_context(|| format!("in {}", path.display()))?),
        Some(AlgebraRef::Path(p)) => {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            Some(load_algebra(&base.join(p))?)
        }
    };
    let alg = match (algebra.map(load_algebra).transpose()?, referenced) {
        (Some(a), Some(r)) if *a != *r => {
            bail!("{} refers to a different algebra than --algebra", path.display())
        }
        (Some(a), _) => a,
        (None, Some(r)) => r,
        (None, None) => bail!("{} has no algebra; pass --algebra", path.display()),
    };
    let br = file.build(&alg).with_context(|| format!("in {}", path.display()))?;
    Ok((alg, br))
}

#[cfg(test)]
mod tests {
    use super::*;
    use contactkit::algebra::reduced_poly;
    use contactkit::bracket::contact_k_bracket;

    #[test]
    fn explicit_round_trip() {
        let a = Arc::new(reduced_poly(3, 2).unwrap());
        let file = AlgebraFile::explicit(&a);
        let json = serde_json::to_string(&file).unwrap();
        let back: AlgebraFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, file);
        assert_eq!(*back.build().unwrap(), *a);
    }

    #[test]
    fn bracket_round_trip() {
        let a = Arc::new(reduced_poly(3, 3).unwrap());
        let k = contact_k_bracket(&a).unwrap();
        let file = BracketFile::from_bracket(&k, Some(AlgebraRef::Inline(AlgebraFile::explicit(&a))));
        let back: BracketFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.build(&a).unwrap(), k);
    }

    #[test]
    fn field_forms() {
        let f: AlgebraFile = serde_json::from_str(r#"{"field":{"kind":"Fp","p":3},"kind":"truncated","bounds":[3]}"#).unwrap();
        assert_eq!(f.build().unwrap().dim(), 3);
        let q: AlgebraFile = serde_json::from_str(r#"{"field":{"kind":"Q"},"kind":"truncated","bounds":[2,2]}"#).unwrap();
        assert_eq!(q.build().unwrap().dim(), 4);
        let bad: AlgebraFile = serde_json::from_str(r#"{"field":{"kind":"Fp","p":4},"kind":"truncated","bounds":[2]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn non_associative_rejected_with_violations() {
        // e1·e0 is given explicitly and disagrees with e0·e1
        let f: AlgebraFile = serde_json::from_str(
            r#"{"field":{"kind":"Q"},"kind":"explicit","dim":2,"unit":["1","0"],
                "mult":[[0,0,0,"1"],[0,1,1,"1"],[1,1,0,"1"],[1,0,0,"1"]]}"#,
        )
        .unwrap();
        let err = f.build().unwrap_err().to_string();
        assert!(err.contains("violation"), "{err}");
    }
}
