//! Braid scripts: step lists, their text log, and the hole-move generator.

use super::DeformationError;
use crate::lattice::{Boundary, HoleSpec, Lattice, Site};
use crate::pauli::{Pauli, PauliOperator};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Single-qubit measurement that extends a hole.
    Carve,
    /// Vertex or plaquette measurement that shrinks a hole.
    Fill,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeformationStep {
    pub kind: StepKind,
    pub pauli: Pauli,
    /// Doubled coordinates: an edge for carve, a vertex or plaquette for fill.
    pub site: Site,
}

impl DeformationStep {
    /// The operator measured by this step.
    pub fn operator(&self, lattice: &Lattice) -> Result<PauliOperator, String> {
        let (r, c) = self.site;
        let parity = (r.rem_euclid(2), c.rem_euclid(2));
        match self.kind {
            StepKind::Carve => {
                if parity.0 == parity.1 {
                    return Err(format!("carve target ({r}, {c}) is not an edge"));
                }
                lattice.single(self.site, self.pauli).ok_or_else(|| format!("no qubit at ({r}, {c})"))
            }
            StepKind::Fill => {
                let ok = matches!((self.pauli, parity), (Pauli::X, (0, 0)) | (Pauli::Z, (1, 1)));
                if !ok {
                    return Err(format!(
                        "fill {} target ({r}, {c}) is not a {}",
                        self.pauli.symbol(),
                        match self.pauli {
                            Pauli::X => "vertex",
                            _ => "plaquette",
                        }
                    ));
                }
                if lattice.normalise(self.site).is_none() {
                    return Err(format!("site ({r}, {c}) is outside the lattice"));
                }
                Ok(lattice.site_operator(self.site))
            }
        }
    }
}

impl fmt::Display for DeformationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StepKind::Carve => "carve",
            StepKind::Fill => "fill",
        };
        write!(f, "{kind} {} {} {}", self.pauli.symbol(), self.site.0, self.site.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

impl FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "up" | "u" => Ok(Direction::Up),
            "down" | "d" => Ok(Direction::Down),
            "left" | "l" => Ok(Direction::Left),
            "right" | "r" => Ok(Direction::Right),
            _ => Err(format!("unknown direction {s:?}")),
        }
    }
}

/// Which hole moved where; kept alongside the steps for replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleMove {
    pub hole: usize,
    pub path: Vec<Direction>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BraidScript {
    pub steps: Vec<DeformationStep>,
    pub moves: Vec<HoleMove>,
}

impl BraidScript {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends another script.
    pub fn then(mut self, other: BraidScript) -> BraidScript {
        self.steps.extend(other.steps);
        self.moves.extend(other.moves);
        self
    }

    /// Hole positions after the recorded moves.
    pub fn final_holes(&self, initial: &[HoleSpec]) -> Result<Vec<HoleSpec>, DeformationError> {
        let mut holes = initial.to_vec();
        for m in &self.moves {
            let h = holes.get_mut(m.hole).ok_or(DeformationError::NoSuchHole(m.hole))?;
            for d in &m.path {
                let (dr, dc) = d.delta();
                h.region = h.region.translated(dr, dc);
            }
        }
        Ok(holes)
    }

    /// Script undoing the recorded moves, regenerated from the final
    /// configuration.
    pub fn reversed(&self, lattice: &Lattice, initial: &[HoleSpec]) -> Result<BraidScript, DeformationError> {
        let mut holes = self.final_holes(initial)?;
        let mut out = BraidScript::default();
        for m in self.moves.iter().rev() {
            let path: Vec<Direction> = m.path.iter().rev().map(|d| d.reversed()).collect();
            let part = move_hole(lattice, &holes, m.hole, &path)?;
            holes = part.final_holes(&holes)?;
            out = out.then(part);
        }
        Ok(out)
    }

    /// Line log: `move <hole> <dirs...>` headers followed by one step per
    /// line. `#` starts a comment.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.moves {
            s.push_str(&format!("move {}", m.hole));
            for d in &m.path {
                s.push_str(&format!(" {d}"));
            }
            s.push('\n');
        }
        for st in &self.steps {
            s.push_str(&format!("{st}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, DeformationError> {
        let mut script = BraidScript::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| DeformationError::Parse { line: i + 1, message };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "move" => {
                    let hole =
                        words.get(1).and_then(|w| w.parse().ok()).ok_or_else(|| err("expected hole index".into()))?;
                    let path =
                        words[2..].iter().map(|w| w.parse()).collect::<Result<Vec<Direction>, _>>().map_err(err)?;
                    script.moves.push(HoleMove { hole, path });
                }
                "carve" | "fill" => {
                    if words.len() != 4 {
                        return Err(err(format!("expected `{} <X|Z> <row> <col>`", words[0])));
                    }
                    let pauli = match words[1] {
                        "X" => Pauli::X,
                        "Z" => Pauli::Z,
                        "Y" => Pauli::Y,
                        other => return Err(err(format!("unknown Pauli {other:?}"))),
                    };
                    let r = words[2].parse().map_err(|_| err(format!("bad row {:?}", words[2])))?;
                    let c = words[3].parse().map_err(|_| err(format!("bad column {:?}", words[3])))?;
                    let kind = if words[0] == "carve" { StepKind::Carve } else { StepKind::Fill };
                    script.steps.push(DeformationStep { kind, pauli, site: (r, c) });
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        Ok(script)
    }
}

/// Edges with both ends (rough) or both sides (smooth) inside the hole.
fn internal_edges(lattice: &Lattice, hole: &HoleSpec) -> Vec<Site> {
    let cells = hole.sites();
    let mut v = Vec::new();
    for &(r, c) in &cells {
        for nb in [(r, c + 2), (r + 2, c)] {
            if cells.contains(&nb) {
                let e = ((r + nb.0) / 2, (c + nb.1) / 2);
                if lattice.qubit(e).is_some() {
                    v.push(e);
                }
            }
        }
    }
    v.sort_unstable();
    v
}

/// Script moving hole `hole_id` one cell per path entry: carve the edges the
/// enlarged hole newly contains, then fill the cells left behind.
pub fn move_hole(
    lattice: &Lattice,
    holes: &[HoleSpec],
    hole_id: usize,
    path: &[Direction],
) -> Result<BraidScript, DeformationError> {
    if hole_id >= holes.len() {
        return Err(DeformationError::NoSuchHole(hole_id));
    }
    let mut current = holes.to_vec();
    let mut steps = Vec::new();
    for (i, &d) in path.iter().enumerate() {
        let old = current[hole_id];
        let (dr, dc) = d.delta();
        let new = HoleSpec { kind: old.kind, region: old.region.translated(dr, dc) };
        let grown = HoleSpec { kind: old.kind, region: old.region.hull(&new.region) };
        for candidate in [grown, new] {
            let mut trial = current.clone();
            trial[hole_id] = candidate;
            lattice.check_holes(&trial).map_err(|source| DeformationError::PathCollision { index: i, source })?;
        }
        let (carve, fill) = match old.kind {
            Boundary::Rough => (Pauli::Z, Pauli::X),
            Boundary::Smooth => (Pauli::X, Pauli::Z),
        };
        let before = internal_edges(lattice, &old);
        for e in internal_edges(lattice, &grown) {
            if !before.contains(&e) {
                steps.push(DeformationStep { kind: StepKind::Carve, pauli: carve, site: e });
            }
        }
        let keep = new.sites();
        for s in old.sites() {
            if !keep.contains(&s) {
                steps.push(DeformationStep { kind: StepKind::Fill, pauli: fill, site: s });
            }
        }
        current[hole_id] = new;
    }
    let moves = if path.is_empty() { Vec::new() } else { vec![HoleMove { hole: hole_id, path: path.to_vec() }] };
    Ok(BraidScript { steps, moves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LatticeSpec, Region};

    fn lattice() -> Lattice {
        Lattice::new(&LatticeSpec::planar(6, 7)).unwrap()
    }

    #[test]
    fn empty_path_gives_empty_script() {
        let s = move_hole(&lattice(), &[HoleSpec::rough(3, 2)], 0, &[]).unwrap();
        assert!(s.is_empty());
        assert!(s.moves.is_empty());
    }

    #[test]
    fn single_step_right() {
        let s = move_hole(&lattice(), &[HoleSpec::rough(3, 2)], 0, &[Direction::Right]).unwrap();
        assert_eq!(s.to_text(), "move 0 right\ncarve Z 6 5\nfill X 6 4\n");
    }

    #[test]
    fn wide_hole_step_down() {
        let hole = HoleSpec { kind: Boundary::Smooth, region: Region { row: 2, col: 2, rows: 1, cols: 2 } };
        let s = move_hole(&lattice(), &[hole], 0, &[Direction::Down]).unwrap();
        let kinds: Vec<_> = s.steps.iter().map(|st| st.kind).collect();
        assert_eq!(kinds, vec![StepKind::Carve, StepKind::Carve, StepKind::Carve, StepKind::Fill, StepKind::Fill]);
    }

    #[test]
    fn collision_is_reported() {
        let holes = [HoleSpec::rough(3, 2), HoleSpec::smooth(3, 3)];
        // the smooth hole sits at Chebyshev distance 3; one more step right overlaps it
        let e = move_hole(&lattice(), &holes, 0, &[Direction::Right]).unwrap_err();
        assert!(matches!(e, DeformationError::PathCollision { index: 0, .. }), "{e}");
    }

    #[test]
    fn boundary_is_reported() {
        let e = move_hole(&lattice(), &[HoleSpec::rough(2, 2)], 0, &[Direction::Up]).unwrap_err();
        assert!(matches!(e, DeformationError::PathCollision { .. }));
    }

    #[test]
    fn text_round_trip() {
        let s = move_hole(&lattice(), &[HoleSpec::rough(3, 2)], 0, &[Direction::Right, Direction::Down]).unwrap();
        let back = BraidScript::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.final_holes(&[HoleSpec::rough(3, 2)]).unwrap(), vec![HoleSpec::rough(4, 3)]);
    }

    #[test]
    fn parse_errors_carry_line() {
        let e = BraidScript::from_text("move 0 right\n\ncarve Q 1 2\n").unwrap_err();
        assert!(matches!(e, DeformationError::Parse { line: 3, .. }));
    }
}
