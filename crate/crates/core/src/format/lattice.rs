//! `[lattice]` documents: a patch, its holes and an optional braid.

use super::{decode, FormatError};
use crate::deformation::Direction;
use crate::lattice::{Boundary, HoleSpec, LatticeSpec, Region};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    #[allow(dead_code)]
    schema: String,
    lattice: LatticeSection,
    #[serde(default)]
    holes: Vec<HoleSection>,
    braid: Option<BraidSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeSection {
    width: usize,
    height: usize,
    #[serde(default = "rough")]
    top: Boundary,
    #[serde(default = "rough")]
    bottom: Boundary,
    #[serde(default = "smooth")]
    left: Boundary,
    #[serde(default = "smooth")]
    right: Boundary,
    #[serde(default)]
    periodic: bool,
}

fn rough() -> Boundary {
    Boundary::Rough
}

fn smooth() -> Boundary {
    Boundary::Smooth
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HoleSection {
    kind: Boundary,
    row: i64,
    col: i64,
    #[serde(default = "one")]
    rows: usize,
    #[serde(default = "one")]
    cols: usize,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BraidSection {
    hole: usize,
    #[serde(default)]
    path: Vec<String>,
    script: Option<String>,
    expected: Option<String>,
    distance_floor: Option<usize>,
}

/// Hole motion requested by a lattice document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidRequest {
    pub hole: usize,
    pub path: Vec<Direction>,
    /// Explicit step script in the text format of
    /// [`BraidScript::to_text`](crate::deformation::BraidScript::to_text);
    /// takes precedence over `path`.
    pub script: Option<String>,
    /// Gate expression such as `cnot(1,2)`, see [`parse_gate`](super::parse_gate).
    pub expected: Option<String>,
    pub distance_floor: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDocument {
    pub spec: LatticeSpec,
    pub braid: Option<BraidRequest>,
}

pub fn parse_lattice(text: &str) -> Result<LatticeDocument, FormatError> {
    let file: LatticeFile = decode(text)?;
    let l = file.lattice;
    if l.width == 0 || l.height == 0 {
        return Err(FormatError::new("lattice width and height must be positive").near(text, "[lattice]"));
    }
    let spec = LatticeSpec {
        width: l.width,
        height: l.height,
        top: l.top,
        bottom: l.bottom,
        left: l.left,
        right: l.right,
        periodic: l.periodic,
        holes: file
            .holes
            .into_iter()
            .map(|h| HoleSpec { kind: h.kind, region: Region { row: h.row, col: h.col, rows: h.rows, cols: h.cols } })
            .collect(),
    };
    let braid = match file.braid {
        None => None,
        Some(b) => {
            if b.hole >= spec.holes.len() {
                return Err(FormatError::new(format!(
                    "braid moves hole {} but only {} defined",
                    b.hole,
                    spec.holes.len()
                ))
                .near(text, "[braid]"));
            }
            let path = b
                .path
                .iter()
                .map(|s| s.parse::<Direction>().map_err(|e| FormatError::new(e).near(text, "path")))
                .collect::<Result<Vec<_>, _>>()?;
            Some(BraidRequest {
                hole: b.hole,
                path,
                script: b.script,
                expected: b.expected,
                distance_floor: b.distance_floor,
            })
        }
    };
    Ok(LatticeDocument { spec, braid })
}
