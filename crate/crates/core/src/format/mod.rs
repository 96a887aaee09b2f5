//! Declarative TOML input.
//!
//! Every file starts with `schema = "topobraid/1"`. Three document shapes are
//! understood: excitation models with walls, lattice patches, and defect
//! setups. The full key reference is in the repository README.

use crate::anyon::builtin::ModelBundle;
use crate::anyon::{DomainWall, ExcitationLabel, ExcitationModel, Generator};
use crate::pauli::{CliffordTableau, Pauli, PauliOperator};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;

mod lattice;
mod scheme;

pub use lattice::{parse_lattice, BraidRequest, LatticeDocument};
pub use scheme::parse_scheme;

pub const SCHEMA: &str = "topobraid/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for FormatError {}

impl FormatError {
    pub(crate) fn new(message: impl Into<String>) -> Self {
        FormatError { line: None, message: message.into() }
    }

    /// Attaches the first line of `text` containing `needle`.
    pub(crate) fn near(mut self, text: &str, needle: &str) -> Self {
        if self.line.is_none() {
            self.line = text.lines().position(|l| l.contains(needle)).map(|i| i + 1);
        }
        self
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub(crate) fn decode<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    #[derive(Deserialize)]
    struct Header {
        schema: Option<String>,
    }
    let header: Header = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    match header.schema.as_deref() {
        Some(SCHEMA) => {}
        Some(other) => {
            return Err(
                FormatError::new(format!("unsupported schema {other:?}, expected {SCHEMA:?}")).near(text, "schema")
            )
        }
        None => return Err(FormatError { line: Some(1), message: format!("missing `schema = \"{SCHEMA}\"` header") }),
    }
    toml::from_str(text).map_err(|e| toml_error(text, e))
}

fn toml_error(text: &str, e: toml::de::Error) -> FormatError {
    FormatError { line: e.span().map(|s| line_of(text, s.start)), message: e.message().to_string() }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ModelFile {
    #[allow(dead_code)]
    schema: String,
    model: ModelSection,
    #[serde(default)]
    walls: Vec<WallSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ModelSection {
    name: String,
    dimension: usize,
    generators: Vec<GeneratorSection>,
    braiding: Vec<Vec<i8>>,
    #[serde(default)]
    labels: Vec<LabelSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSection {
    name: String,
    dim: usize,
    theta: i8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelSection {
    name: String,
    #[serde(default)]
    note: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct WallSection {
    name: String,
    dim: usize,
    /// Generators left out map to themselves.
    #[serde(default)]
    images: BTreeMap<String, String>,
}

pub(crate) fn build_model(
    text: &str,
    section: ModelSection,
    walls: Vec<WallSection>,
) -> Result<ModelBundle, FormatError> {
    let model = ExcitationModel::new(
        section.name.clone(),
        section.dimension,
        section.generators.into_iter().map(|g| Generator { name: g.name, dim: g.dim, theta: g.theta }).collect(),
        section.braiding,
        section.labels.into_iter().map(|l| ExcitationLabel { name: l.name, note: l.note }).collect(),
    )
    .map_err(|e| FormatError::new(e.to_string()).near(text, "[model]"))?;
    let mut built = Vec::new();
    for w in walls {
        let near = format!("\"{}\"", w.name);
        let mut images: Vec<_> = (0..model.num_generators()).map(|i| model.generator(i)).collect();
        for (from, to) in &w.images {
            let idx = model.generators().iter().position(|g| &g.name == from).ok_or_else(|| {
                FormatError::new(format!("wall {}: unknown generator {from:?}", w.name)).near(text, &near)
            })?;
            images[idx] =
                model.parse(to).map_err(|e| FormatError::new(format!("wall {}: {e}", w.name)).near(text, &near))?;
        }
        if built.iter().any(|b: &DomainWall| b.name() == w.name) {
            return Err(FormatError::new(format!("duplicate wall {:?}", w.name)).near(text, &near));
        }
        built.push(
            DomainWall::new(&model, w.name.clone(), images, w.dim)
                .map_err(|e| FormatError::new(e.to_string()).near(text, &near))?,
        );
    }
    Ok(ModelBundle { model, walls: built })
}

/// Parses a model document (`[model]` table plus `[[walls]]`).
pub fn parse_model(text: &str) -> Result<ModelBundle, FormatError> {
    let file: ModelFile = decode(text)?;
    build_model(text, file.model, file.walls)
}

/// Parses a gate expression on `n` qubits (0-based) into a tableau.
///
/// Factors are separated by `*` and applied left to right: `identity`,
/// `h(q)`, `s(q)`, `x(q)`, `y(q)`, `z(q)`, `cnot(c,t)`, `cz(a,b)`,
/// `swap(a,b)`.
pub fn parse_gate(expr: &str, n: usize) -> Result<CliffordTableau, FormatError> {
    let bad = |m: String| FormatError::new(format!("gate {expr:?}: {m}"));
    let mut t = CliffordTableau::identity(n);
    for factor in expr.split('*').map(str::trim) {
        let (head, args) = match factor.split_once('(') {
            Some((h, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| bad(format!("unclosed {factor:?}")))?;
                let args = inner
                    .split(',')
                    .map(|a| a.trim().parse::<usize>().map_err(|_| bad(format!("bad qubit {a:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                (h.trim(), args)
            }
            None => (factor, vec![]),
        };
        if let Some(&q) = args.iter().find(|&&q| q >= n) {
            return Err(bad(format!("qubit {q} out of range for {n} qubits")));
        }
        let g = match (head.to_ascii_lowercase().as_str(), args.as_slice()) {
            ("identity" | "id", []) => CliffordTableau::identity(n),
            ("h", [q]) => CliffordTableau::hadamard(n, *q),
            ("s", [q]) => CliffordTableau::phase_gate(n, *q),
            ("x", [q]) => CliffordTableau::pauli(&PauliOperator::single(n, *q, Pauli::X)),
            ("y", [q]) => CliffordTableau::pauli(&PauliOperator::single(n, *q, Pauli::Y)),
            ("z", [q]) => CliffordTableau::pauli(&PauliOperator::single(n, *q, Pauli::Z)),
            ("cnot" | "cx", [a, b]) if a != b => CliffordTableau::cnot(n, *a, *b),
            ("cz", [a, b]) if a != b => CliffordTableau::cz(n, *a, *b),
            ("swap", [a, b]) if a != b => CliffordTableau::swap(n, *a, *b),
            _ => return Err(bad(format!("unknown factor {factor:?}"))),
        };
        t = t.then(&g).map_err(|e| bad(e.to_string()))?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORIC: &str = r#"
schema = "topobraid/1"
[model]
name = "toy"
dimension = 2
generators = [ { name = "e", dim = 0, theta = 1 }, { name = "m", dim = 0, theta = 1 } ]
braiding = [[1, -1], [-1, 1]]
[[walls]]
name = "h"
dim = 1
images = { e = "m", m = "e" }
"#;

    #[test]
    fn parses_model_with_wall() {
        let b = parse_model(TORIC).unwrap();
        assert_eq!(b.model.num_generators(), 2);
        assert_eq!(b.walls.len(), 1);
    }

    #[test]
    fn syntax_error_has_line() {
        let bad = TORIC.replace("dimension = 2", "dimension = = 2");
        let e = parse_model(&bad).unwrap_err();
        assert_eq!(e.line, Some(5));
    }

    #[test]
    fn semantic_error_has_line() {
        let bad = TORIC.replace("images = { e = \"m\", m = \"e\" }", "images = { e = \"em\" }");
        let e = parse_model(&bad).unwrap_err();
        assert!(e.message.contains("wall"), "{e}");
        assert_eq!(e.line, Some(9));
    }

    #[test]
    fn missing_schema() {
        let e = parse_model("[model]\nname = \"x\"").unwrap_err();
        assert!(e.message.contains("schema"));
    }

    #[test]
    fn gate_expressions() {
        use crate::pauli::CliffordTableau as T;
        assert_eq!(parse_gate("cnot(1,2)", 3).unwrap(), T::cnot(3, 1, 2));
        assert_eq!(parse_gate("identity", 2).unwrap(), T::identity(2));
        let hs = parse_gate("h(0) * s(0)", 1).unwrap();
        assert_eq!(hs, T::hadamard(1, 0).then(&T::phase_gate(1, 0)).unwrap());
        assert!(parse_gate("cnot(1,1)", 3).is_err());
        assert!(parse_gate("h(3)", 3).is_err());
        assert!(parse_gate("t(0)", 1).is_err());
    }
}
