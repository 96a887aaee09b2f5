//! Surface-code patches on a square lattice, with rectangular holes.
//!
//! Coordinates are doubled: vertices sit at (even, even), plaquettes at
//! (odd, odd) and qubits on edges where `row + col` is odd. Vertices carry
//! X-type stabilisers and plaquettes Z-type ones. A rough side or hole leaves
//! dangling edges and absorbs Z-strings; a smooth one absorbs X-strings.
//!
//! A rough hole removes a block of vertex operators and pins every edge with
//! both ends inside it with a single-qubit Z; a smooth hole does the same with
//! plaquettes and single-qubit X. Keeping the pinned qubits in the code means
//! `n` never changes while holes move.

mod code;

pub use code::{
    distance_bruteforce, distance_bruteforce_with_budget, extract_logicals, reduce_weight, validate, CodeError,
    StabiliserCode, ValidationReport, Violation, DEFAULT_DISTANCE_BUDGET,
};

use crate::pauli::{Pauli, PauliOperator};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub type Site = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    InvalidSpec(String),
    #[error("hole {hole} is not strictly inside the bulk")]
    HoleOutsideBulk { hole: usize },
    #[error("holes {first} and {second} overlap")]
    HolesOverlap { first: usize, second: usize },
    #[error("holes {first} and {second} are too close (need at least one plaquette between them)")]
    HolesTooClose { first: usize, second: usize },
    #[error("no hole with index {0}")]
    NoSuchHole(usize),
    #[error("no geometric logical basis: {0}")]
    NoGeometricBasis(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Rough,
    Smooth,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Rough => "rough",
            Boundary::Smooth => "smooth",
        })
    }
}

/// Rectangle of cells: vertices for rough holes, plaquettes for smooth ones.
/// Vertex `(i, j)` is site `(2i, 2j)`; plaquette `(i, j)` is `(2i+1, 2j+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub row: i64,
    pub col: i64,
    pub rows: usize,
    pub cols: usize,
}

impl Region {
    pub fn cell(row: i64, col: i64) -> Self {
        Region { row, col, rows: 1, cols: 1 }
    }

    pub fn translated(&self, dr: i64, dc: i64) -> Self {
        Region { row: self.row + dr, col: self.col + dc, ..*self }
    }

    /// Smallest rectangle containing both.
    pub fn hull(&self, other: &Region) -> Region {
        let r0 = self.row.min(other.row);
        let c0 = self.col.min(other.col);
        let r1 = (self.row + self.rows as i64).max(other.row + other.rows as i64);
        let c1 = (self.col + self.cols as i64).max(other.col + other.cols as i64);
        Region { row: r0, col: c0, rows: (r1 - r0) as usize, cols: (c1 - c0) as usize }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HoleSpec {
    pub kind: Boundary,
    pub region: Region,
}

impl HoleSpec {
    pub fn rough(row: i64, col: i64) -> Self {
        HoleSpec { kind: Boundary::Rough, region: Region::cell(row, col) }
    }

    pub fn smooth(row: i64, col: i64) -> Self {
        HoleSpec { kind: Boundary::Smooth, region: Region::cell(row, col) }
    }

    /// Doubled-coordinate sites of the removed cells.
    pub fn sites(&self) -> Vec<Site> {
        let off = match self.kind {
            Boundary::Rough => 0,
            Boundary::Smooth => 1,
        };
        let r = &self.region;
        let mut v = Vec::new();
        for i in 0..r.rows as i64 {
            for j in 0..r.cols as i64 {
                v.push((2 * (r.row + i) + off, 2 * (r.col + j) + off));
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Plaquette columns.
    pub width: usize,
    /// Plaquette rows.
    pub height: usize,
    pub top: Boundary,
    pub bottom: Boundary,
    pub left: Boundary,
    pub right: Boundary,
    /// Torus instead of a patch; the side boundaries are then ignored.
    #[serde(default)]
    pub periodic: bool,
    #[serde(default)]
    pub holes: Vec<HoleSpec>,
}

impl LatticeSpec {
    /// Rough top and bottom, smooth left and right.
    pub fn planar(width: usize, height: usize) -> Self {
        LatticeSpec {
            width,
            height,
            top: Boundary::Rough,
            bottom: Boundary::Rough,
            left: Boundary::Smooth,
            right: Boundary::Smooth,
            periodic: false,
            holes: vec![],
        }
    }

    /// The distance-`d` patch: `d` qubits along each logical string.
    pub fn planar_distance(d: usize) -> Self {
        LatticeSpec::planar(d - 1, d)
    }

    pub fn toric(width: usize, height: usize) -> Self {
        LatticeSpec { periodic: true, ..LatticeSpec::planar(width, height) }
    }

    pub fn with_hole(mut self, hole: HoleSpec) -> Self {
        self.holes.push(hole);
        self
    }
}

/// Geometry of a patch, independent of its holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    spec: LatticeSpec,
    rows: (i64, i64),
    cols: (i64, i64),
    qubits: Vec<Site>,
    index: BTreeMap<Site, usize>,
}

impl Lattice {
    pub fn new(spec: &LatticeSpec) -> Result<Self, LatticeError> {
        if spec.width == 0 || spec.height == 0 {
            return Err(LatticeError::InvalidSpec("width and height must be positive".into()));
        }
        let (h, w) = (spec.height as i64, spec.width as i64);
        let (rows, cols) = if spec.periodic {
            if spec.width < 2 || spec.height < 2 {
                return Err(LatticeError::InvalidSpec("a torus needs at least 2x2 plaquettes".into()));
            }
            ((0, 2 * h - 1), (0, 2 * w - 1))
        } else {
            let lo = |b: Boundary| if b == Boundary::Rough { 1 } else { 0 };
            let hi = |b: Boundary, n: i64| if b == Boundary::Rough { 2 * n - 1 } else { 2 * n };
            ((lo(spec.top), hi(spec.bottom, h)), (lo(spec.left), hi(spec.right, w)))
        };
        let mut qubits = Vec::new();
        for r in rows.0..=rows.1 {
            for c in cols.0..=cols.1 {
                if (r + c) % 2 == 1 {
                    qubits.push((r, c));
                }
            }
        }
        let index = qubits.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let spec = LatticeSpec { holes: vec![], ..spec.clone() };
        Ok(Lattice { spec, rows, cols, qubits, index })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit_sites(&self) -> &[Site] {
        &self.qubits
    }

    pub fn row_range(&self) -> (i64, i64) {
        self.rows
    }

    pub fn col_range(&self) -> (i64, i64) {
        self.cols
    }

    pub fn is_periodic(&self) -> bool {
        self.spec.periodic
    }

    /// Wraps on a torus; `None` outside a patch.
    pub fn normalise(&self, (r, c): Site) -> Option<Site> {
        if self.spec.periodic {
            let (h, w) = (self.rows.1 + 1, self.cols.1 + 1);
            Some((r.rem_euclid(h), c.rem_euclid(w)))
        } else if r < self.rows.0 || r > self.rows.1 || c < self.cols.0 || c > self.cols.1 {
            None
        } else {
            Some((r, c))
        }
    }

    pub fn qubit(&self, site: Site) -> Option<usize> {
        self.normalise(site).and_then(|s| self.index.get(&s).copied())
    }

    pub fn vertices(&self) -> Vec<Site> {
        self.sites_with_parity(0)
    }

    pub fn plaquettes(&self) -> Vec<Site> {
        self.sites_with_parity(1)
    }

    fn sites_with_parity(&self, p: i64) -> Vec<Site> {
        let mut v = Vec::new();
        for r in self.rows.0..=self.rows.1 {
            for c in self.cols.0..=self.cols.1 {
                if r.rem_euclid(2) == p && c.rem_euclid(2) == p {
                    v.push((r, c));
                }
            }
        }
        v
    }

    /// Qubits on the (up to four) edges around a vertex or plaquette.
    pub fn site_qubits(&self, (r, c): Site) -> Vec<usize> {
        let mut v: Vec<usize> =
            [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)].iter().filter_map(|&s| self.qubit(s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// End vertices of an edge that exist on the lattice.
    pub fn edge_vertices(&self, (r, c): Site) -> Vec<Site> {
        let cand = if r.rem_euclid(2) == 0 { [(r, c - 1), (r, c + 1)] } else { [(r - 1, c), (r + 1, c)] };
        cand.iter().filter_map(|&s| self.normalise(s)).collect()
    }

    /// Plaquettes on either side of an edge that exist on the lattice.
    pub fn edge_plaquettes(&self, (r, c): Site) -> Vec<Site> {
        let cand = if r.rem_euclid(2) == 0 { [(r - 1, c), (r + 1, c)] } else { [(r, c - 1), (r, c + 1)] };
        cand.iter().filter_map(|&s| self.normalise(s)).collect()
    }

    /// Full X (vertex) or Z (plaquette) operator of a site, ignoring holes.
    pub fn site_operator(&self, site: Site) -> PauliOperator {
        let p = if site.0.rem_euclid(2) == 0 { Pauli::X } else { Pauli::Z };
        let n = self.num_qubits();
        let mut op = PauliOperator::identity(n);
        for q in self.site_qubits(site) {
            op.set(q, p);
        }
        op
    }

    pub fn single(&self, site: Site, p: Pauli) -> Option<PauliOperator> {
        self.qubit(site).map(|q| PauliOperator::single(self.num_qubits(), q, p))
    }

    fn sep(&self, a: Site, b: Site) -> i64 {
        let mut dr = (a.0 - b.0).abs();
        let mut dc = (a.1 - b.1).abs();
        if self.spec.periodic {
            dr = dr.min(self.rows.1 + 1 - dr);
            dc = dc.min(self.cols.1 + 1 - dc);
        }
        dr.max(dc)
    }

    /// Holes are inside the bulk and pairwise separated by at least one
    /// plaquette.
    pub fn check_holes(&self, holes: &[HoleSpec]) -> Result<(), LatticeError> {
        let sites: Vec<Vec<Site>> = holes.iter().map(|h| h.sites()).collect();
        for (i, h) in holes.iter().enumerate() {
            if h.region.rows == 0 || h.region.cols == 0 {
                return Err(LatticeError::InvalidSpec(format!("hole {i} is empty")));
            }
            if self.spec.periodic {
                let (hh, ww) = (self.rows.1 + 1, self.cols.1 + 1);
                if 2 * h.region.rows as i64 + 4 > hh || 2 * h.region.cols as i64 + 4 > ww {
                    return Err(LatticeError::HoleOutsideBulk { hole: i });
                }
            } else {
                for &(r, c) in &sites[i] {
                    if r - 2 < self.rows.0 || r + 2 > self.rows.1 || c - 2 < self.cols.0 || c + 2 > self.cols.1 {
                        return Err(LatticeError::HoleOutsideBulk { hole: i });
                    }
                }
            }
        }
        for i in 0..holes.len() {
            for j in i + 1..holes.len() {
                let d = sites[i]
                    .iter()
                    .flat_map(|&a| sites[j].iter().map(move |&b| (a, b)))
                    .map(|(a, b)| self.sep(a, b))
                    .min();
                match d {
                    Some(0) => return Err(LatticeError::HolesOverlap { first: i, second: j }),
                    Some(d) if d < 3 => return Err(LatticeError::HolesTooClose { first: i, second: j }),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Canonical generators for a hole configuration, in row-major site
    /// order.
    pub fn generators(&self, holes: &[HoleSpec]) -> Result<Vec<PauliOperator>, LatticeError> {
        self.check_holes(holes)?;
        Ok(self.generators_unchecked(holes))
    }

    pub(crate) fn generators_unchecked(&self, holes: &[HoleSpec]) -> Vec<PauliOperator> {
        let n = self.num_qubits();
        let mut removed: BTreeMap<Site, usize> = BTreeMap::new();
        for (i, h) in holes.iter().enumerate() {
            for s in h.sites() {
                if let Some(s) = self.normalise(s) {
                    removed.insert(s, i);
                }
            }
        }
        let same_hole = |sites: &[Site]| -> bool {
            sites.len() == 2 && matches!((removed.get(&sites[0]), removed.get(&sites[1])), (Some(a), Some(b)) if a == b)
        };
        let rough_internal: BTreeSet<usize> = self
            .qubits
            .iter()
            .enumerate()
            .filter(|(_, &s)| same_hole(&self.edge_vertices(s)))
            .map(|(i, _)| i)
            .collect();
        let smooth_internal: BTreeSet<usize> = self
            .qubits
            .iter()
            .enumerate()
            .filter(|(_, &s)| same_hole(&self.edge_plaquettes(s)))
            .map(|(i, _)| i)
            .collect();
        let mut gens = Vec::new();
        for r in self.rows.0..=self.rows.1 {
            for c in self.cols.0..=self.cols.1 {
                let site = (r, c);
                let (even_r, even_c) = (r.rem_euclid(2) == 0, c.rem_euclid(2) == 0);
                let (pauli, skip) = match (even_r, even_c) {
                    (true, true) => (Pauli::X, &smooth_internal),
                    (false, false) => (Pauli::Z, &rough_internal),
                    _ => {
                        let q = self.index[&site];
                        if rough_internal.contains(&q) {
                            gens.push(PauliOperator::single(n, q, Pauli::Z));
                        } else if smooth_internal.contains(&q) {
                            gens.push(PauliOperator::single(n, q, Pauli::X));
                        }
                        continue;
                    }
                };
                if removed.contains_key(&site) {
                    continue;
                }
                let support: Vec<usize> = self.site_qubits(site).into_iter().filter(|q| !skip.contains(q)).collect();
                if support.is_empty() {
                    continue;
                }
                let mut op = PauliOperator::identity(n);
                for q in support {
                    op.set(q, pauli);
                }
                gens.push(op);
            }
        }
        gens
    }
}

/// A lattice, its holes and the resulting code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCode {
    pub lattice: Lattice,
    pub holes: Vec<HoleSpec>,
    pub code: StabiliserCode,
}

/// Standard surface-code generators for the spec, with logicals from
/// [`extract_logicals`].
pub fn build_planar_code(spec: &LatticeSpec) -> Result<LatticeCode, LatticeError> {
    let lattice = Lattice::new(spec)?;
    let gens = lattice.generators(&spec.holes)?;
    let code = StabiliserCode::new(lattice.num_qubits(), gens)?;
    Ok(LatticeCode { lattice, holes: spec.holes.clone(), code })
}

/// Adds a hole and re-extracts logicals.
pub fn hole_punch(lc: &LatticeCode, hole: HoleSpec) -> Result<LatticeCode, LatticeError> {
    let mut spec = lc.lattice.spec().clone();
    spec.holes = lc.holes.clone();
    spec.holes.push(hole);
    build_planar_code(&spec)
}

/// Removes hole `index`, restoring its stabilisers.
pub fn hole_fill(lc: &LatticeCode, index: usize) -> Result<LatticeCode, LatticeError> {
    if index >= lc.holes.len() {
        return Err(LatticeError::NoSuchHole(index));
    }
    let mut spec = lc.lattice.spec().clone();
    spec.holes = lc.holes.clone();
    spec.holes.remove(index);
    build_planar_code(&spec)
}

/// Which logical operators a geometric basis entry belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LogicalOwner {
    /// The qubit of the patch's own mixed boundaries.
    Patch,
    Hole(usize),
}

impl LatticeCode {
    /// String-and-loop logicals: for the patch (when its sides mix rough and
    /// smooth) a Z-string between the rough sides and an X-string between
    /// the smooth ones; for each rough hole a Z-string to a rough side and
    /// the X-loop around the hole; for each smooth hole the Z-loop around it
    /// and an X-string to a smooth side. The Z-type operator is listed first.
    pub fn geometric_logicals(&self) -> Result<Vec<(LogicalOwner, PauliOperator, PauliOperator)>, LatticeError> {
        let lat = &self.lattice;
        let spec = lat.spec();
        if spec.periodic {
            return Err(LatticeError::NoGeometricBasis("torus".into()));
        }
        let n = lat.num_qubits();
        let (r_lo, r_hi) = lat.rows;
        let (c_lo, c_hi) = lat.cols;
        let string = |sites: Vec<Site>, p: Pauli| -> PauliOperator {
            let mut op = PauliOperator::identity(n);
            for s in sites {
                op.set(lat.index[&s], p);
            }
            op
        };
        let mut out = Vec::new();
        let rough_vertical = spec.top == Boundary::Rough && spec.bottom == Boundary::Rough;
        let smooth_horizontal = spec.left == Boundary::Smooth && spec.right == Boundary::Smooth;
        if rough_vertical && smooth_horizontal {
            let z_col: Vec<Site> = (r_lo..=r_hi).filter(|r| r.rem_euclid(2) == 1).map(|r| (r, c_hi)).collect();
            let x_row: Vec<Site> = (c_lo..=c_hi).filter(|c| c.rem_euclid(2) == 0).map(|c| (r_hi, c)).collect();
            out.push((LogicalOwner::Patch, string(z_col, Pauli::Z), string(x_row, Pauli::X)));
        } else if !(spec.top == Boundary::Smooth
            && spec.bottom == Boundary::Smooth
            && spec.left == Boundary::Rough
            && spec.right == Boundary::Rough)
        {
            return Err(LatticeError::NoGeometricBasis("outer sides must be rough/rough and smooth/smooth".into()));
        }
        for (i, h) in self.holes.iter().enumerate() {
            let (r0, c0) = h.sites()[0];
            let mut loop_op = PauliOperator::identity(n);
            for s in h.sites() {
                loop_op = loop_op.product(&lat.site_operator(s));
            }
            let loop_op = loop_op.with_phase(0);
            match h.kind {
                Boundary::Rough => {
                    // Z-string from the hole's top-left vertex to a rough side
                    let sites: Vec<Site> = if spec.top == Boundary::Rough {
                        (r_lo..r0).filter(|r| r.rem_euclid(2) == 1).map(|r| (r, c0)).collect()
                    } else {
                        (c_lo..c0).filter(|c| c.rem_euclid(2) == 1).map(|c| (r0, c)).collect()
                    };
                    out.push((LogicalOwner::Hole(i), string(sites, Pauli::Z), loop_op));
                }
                Boundary::Smooth => {
                    let sites: Vec<Site> = if spec.left == Boundary::Smooth {
                        (c_lo..c0).filter(|c| c.rem_euclid(2) == 0).map(|c| (r0, c)).collect()
                    } else {
                        (r_lo..r0).filter(|r| r.rem_euclid(2) == 0).map(|r| (r, c0)).collect()
                    };
                    out.push((LogicalOwner::Hole(i), loop_op, string(sites, Pauli::X)));
                }
            }
        }
        let pairs: Vec<_> = out.iter().map(|(_, x, z)| (x.clone(), z.clone())).collect();
        let check = StabiliserCode::from_parts_unchecked(n, self.code.generators().to_vec(), pairs);
        if let Some(v) = validate(&check).violation {
            return Err(LatticeError::NoGeometricBasis(v.to_string()));
        }
        Ok(out)
    }

    /// The same code with its logical basis replaced by
    /// [`LatticeCode::geometric_logicals`].
    pub fn with_geometric_logicals(&self) -> Result<LatticeCode, LatticeError> {
        let pairs = self.geometric_logicals()?.into_iter().map(|(_, x, z)| (x, z)).collect();
        let code = StabiliserCode::with_logicals(self.code.num_qubits(), self.code.generators().to_vec(), pairs)?;
        Ok(LatticeCode { code, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_three_patch() {
        let lc = build_planar_code(&LatticeSpec::planar_distance(3)).unwrap();
        assert_eq!(lc.code.num_qubits(), 13);
        assert_eq!(lc.code.generators().len(), 12);
        assert_eq!(lc.code.num_logical(), 1);
        assert!(validate(&lc.code).valid);
    }

    #[test]
    fn toric_three_by_three() {
        let lc = build_planar_code(&LatticeSpec::toric(3, 3)).unwrap();
        assert_eq!(lc.code.num_qubits(), 18);
        assert_eq!(lc.code.logical_pairs().len(), 2);
        assert!(validate(&lc.code).valid);
    }

    #[test]
    fn hole_covering_bulk_rejected() {
        let spec = LatticeSpec::planar(3, 3)
            .with_hole(HoleSpec { kind: Boundary::Rough, region: Region { row: 0, col: 0, rows: 4, cols: 4 } });
        assert!(matches!(build_planar_code(&spec), Err(LatticeError::HoleOutsideBulk { .. })));
    }

    #[test]
    fn overlapping_and_close_holes() {
        let base = LatticeSpec::planar(8, 8);
        let spec = base.clone().with_hole(HoleSpec::rough(3, 3)).with_hole(HoleSpec::rough(3, 3));
        assert!(matches!(build_planar_code(&spec), Err(LatticeError::HolesOverlap { .. })));
        let spec = base.clone().with_hole(HoleSpec::rough(3, 3)).with_hole(HoleSpec::rough(3, 4));
        assert!(matches!(build_planar_code(&spec), Err(LatticeError::HolesTooClose { .. })));
        let spec = base.with_hole(HoleSpec::rough(3, 3)).with_hole(HoleSpec::smooth(3, 3));
        assert!(matches!(build_planar_code(&spec), Err(LatticeError::HolesTooClose { .. })));
    }

    #[test]
    fn punch_adds_a_qubit_and_fill_restores() {
        let lc = build_planar_code(&LatticeSpec::planar(6, 6)).unwrap();
        let punched = hole_punch(&lc, HoleSpec::rough(3, 3)).unwrap();
        assert_eq!(punched.code.num_logical(), 2);
        assert!(hole_punch(&punched, HoleSpec::rough(3, 3)).is_err());
        let filled = hole_fill(&punched, 0).unwrap();
        assert_eq!(filled.code.num_logical(), 1);
        assert_eq!(filled.code.generators(), lc.code.generators());
    }
}
