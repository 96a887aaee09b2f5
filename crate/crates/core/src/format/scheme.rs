//! `[scheme]` documents: defects, relations, qubit basis and moves.

use super::{build_model, decode, FormatError, ModelSection, WallSection};
use crate::anyon::builtin;
use crate::scheme::{
    BraidMove, Defect, DefectKind, DefectSetup, FormalProduct, MoveKind, Relation, RelationKind, Scheme, SchemeError,
};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    #[allow(dead_code)]
    schema: String,
    scheme: SchemeSection,
    /// Inline model, used when `scheme.model` is absent.
    model: Option<ModelSection>,
    #[serde(default)]
    walls: Vec<WallSection>,
    defects: Vec<DefectSection>,
    #[serde(default)]
    relations: Vec<RelationSection>,
    #[serde(default)]
    qubits: Vec<QubitSection>,
    #[serde(default)]
    moves: Vec<MoveSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeSection {
    name: String,
    /// Name of a built-in model.
    model: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DefectSection {
    id: String,
    kind: DefectKind,
    dim: usize,
    wall: Option<String>,
    /// Defaults to the wall's twist condensate for twists.
    #[serde(default)]
    condensable: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationSection {
    kind: RelationKind,
    a: String,
    b: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QubitSection {
    x: String,
    z: String,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum MoveKindName {
    Exchange,
    Monodromy,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveSection {
    name: String,
    kind: MoveKindName,
    defects: [String; 2],
    #[serde(default)]
    transform: Vec<RewriteSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RewriteSection {
    from: String,
    to: Vec<String>,
    /// Power of `i` in front of the product.
    #[serde(default)]
    phase: u8,
}

fn err<'a>(text: &'a str, needle: &str) -> impl Fn(SchemeError) -> FormatError + 'a {
    let needle = needle.to_string();
    move |e| FormatError::new(e.to_string()).near(text, &needle)
}

/// Parses a scheme document and validates the resulting setup and moves.
pub fn parse_scheme(text: &str) -> Result<Scheme, FormatError> {
    let file: SchemeFile = decode(text)?;
    let bundle = match (&file.scheme.model, file.model) {
        (Some(name), None) => {
            if !file.walls.is_empty() {
                return Err(FormatError::new("walls can only accompany an inline [model]").near(text, "[[walls]]"));
            }
            builtin::model(name).map_err(|e| FormatError::new(e.to_string()).near(text, "model"))?
        }
        (None, Some(section)) => build_model(text, section, file.walls)?,
        (Some(_), Some(_)) => {
            return Err(
                FormatError::new("give either scheme.model or an inline [model], not both").near(text, "[model]")
            )
        }
        (None, None) => {
            return Err(FormatError::new("no model: set scheme.model or add a [model] table").near(text, "[scheme]"))
        }
    };
    let model = &bundle.model;
    let mut defects = Vec::new();
    for d in &file.defects {
        let near = format!("\"{}\"", d.id);
        let mut condensable = d
            .condensable
            .iter()
            .map(|c| model.parse(c).map_err(|e| FormatError::new(e.to_string()).near(text, &near)))
            .collect::<Result<Vec<_>, _>>()?;
        if condensable.is_empty() {
            if let Some(w) = &d.wall {
                condensable = bundle
                    .wall(w)
                    .map_err(|e| FormatError::new(e.to_string()).near(text, &near))?
                    .condensable_at_twist();
            }
        }
        defects.push(Defect { id: d.id.clone(), kind: d.kind, dim: d.dim, condensable, wall: d.wall.clone() });
    }
    let mut setup =
        DefectSetup { name: file.scheme.name, bundle: bundle.clone(), defects, relations: vec![], qubits: vec![] };
    for r in &file.relations {
        let a = setup.defect_index(&r.a).map_err(err(text, &r.a))?;
        let b = setup.defect_index(&r.b).map_err(err(text, &r.b))?;
        setup.relations.push(Relation { kind: r.kind, a, b });
    }
    for q in &file.qubits {
        let x = setup.parse_descriptor(&q.x).map_err(err(text, &q.x))?;
        let z = setup.parse_descriptor(&q.z).map_err(err(text, &q.z))?;
        setup.qubits.push((x, z));
    }
    setup.validate().map_err(err(text, "[[qubits]]"))?;
    let mut moves = Vec::new();
    for m in &file.moves {
        let near = format!("\"{}\"", m.name);
        let a = setup.defect_index(&m.defects[0]).map_err(err(text, &near))?;
        let b = setup.defect_index(&m.defects[1]).map_err(err(text, &near))?;
        let kind = match m.kind {
            MoveKindName::Exchange => MoveKind::Exchange(a, b),
            MoveKindName::Monodromy => MoveKind::Monodromy(a, b),
        };
        let mut transform = Vec::new();
        for rw in &m.transform {
            let from = setup.parse_descriptor(&rw.from).map_err(err(text, &rw.from))?;
            let factors =
                rw.to.iter().map(|t| setup.parse_descriptor(t).map_err(err(text, t))).collect::<Result<Vec<_>, _>>()?;
            transform.push((from, FormalProduct { phase: rw.phase % 4, factors }));
        }
        let mv = BraidMove { name: m.name.clone(), kind, transform };
        setup.check_move(&mv).map_err(err(text, &near))?;
        moves.push(mv);
    }
    Ok(Scheme { setup, moves })
}
