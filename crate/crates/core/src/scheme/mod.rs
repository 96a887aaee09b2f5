//! Defect setups described by excitation paths.
//!
//! Logical operators are recorded as which excitation travels along which
//! kind of path relative to the defects. Two paths anticommute when their
//! excitations braid to -1 and their paths cross an odd number of times.
//! Braid moves are declared rewrites of these paths; everything declared is
//! checked against the commutation data and against symplectic consistency
//! of the resulting tableau.

mod builtin;

pub use builtin::{
    builtin_scheme, general, hole_2d, levin_wen_3d, scheme_names, selfdual_surface, twist_2d_surface,
    universal_register,
};

use crate::anyon::builtin::ModelBundle;
use crate::anyon::{AnyonError, Excitation, ExcitationModel};
use crate::pauli::{group_elements, CliffordTableau, GroupMode, GroupReport, Pauli, PauliError, PauliOperator};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("unknown defect {0:?}")]
    UnknownDefect(String),
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("invalid descriptor {descriptor}: {reason}")]
    InvalidDescriptor { descriptor: String, reason: String },
    #[error("logical basis violation: {first} and {second} should {expected}")]
    BasisViolation { first: String, second: String, expected: &'static str },
    #[error("move {name} is inconsistent with the setup: {reason}")]
    InconsistentMove { name: String, reason: String },
    #[error("model/wall is not eligible: {0}")]
    Ineligible(String),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error(transparent)]
    Anyon(#[from] AnyonError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectKind {
    Twist,
    Hole,
    ThreadedPuncture,
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefectKind::Twist => "twist",
            DefectKind::Hole => "hole",
            DefectKind::ThreadedPuncture => "threaded_puncture",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub id: String,
    pub kind: DefectKind,
    pub dim: usize,
    /// Generators of the subgroup that condenses here. For a twist this is
    /// filled from its wall.
    pub condensable: Vec<Excitation>,
    /// Wall the twist bounds.
    pub wall: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Concentric,
    /// The first defect is threaded through the second.
    Threads,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub a: usize,
    pub b: usize,
}

/// Shape of an excitation path, by defect index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopoClass {
    /// Transport between two defects.
    Connects(usize, usize),
    /// Closed path or surface around one defect.
    Encloses(usize),
    /// Closed path around two defects together.
    EnclosesPair(usize, usize),
    /// Path or membrane that starts in the vacuum and ends on one defect.
    Spans(usize),
}

impl TopoClass {
    /// Sorts unordered index pairs.
    pub fn normalised(self) -> TopoClass {
        match self {
            TopoClass::Connects(a, b) if a > b => TopoClass::Connects(b, a),
            TopoClass::EnclosesPair(a, b) if a > b => TopoClass::EnclosesPair(b, a),
            other => other,
        }
    }

    pub fn defects(self) -> Vec<usize> {
        match self {
            TopoClass::Connects(a, b) | TopoClass::EnclosesPair(a, b) => vec![a, b],
            TopoClass::Encloses(a) | TopoClass::Spans(a) => vec![a],
        }
    }

    fn enclosed(self) -> Vec<usize> {
        match self {
            TopoClass::Encloses(a) => vec![a],
            TopoClass::EnclosesPair(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    fn endpoints(self) -> Vec<usize> {
        match self {
            TopoClass::Connects(a, b) => vec![a, b],
            TopoClass::Spans(a) => vec![a],
            _ => vec![],
        }
    }

    /// Parity of crossings: an open path crosses a closed one once for each
    /// of its endpoints that the closed one encloses.
    pub fn intersection_parity(self, other: TopoClass) -> bool {
        let count = |open: TopoClass, closed: TopoClass| {
            let ends = open.endpoints();
            closed.enclosed().iter().filter(|d| ends.contains(d)).count()
        };
        (count(self, other) + count(other, self)) % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathDescriptor {
    pub excitation: Excitation,
    pub class: TopoClass,
    /// Walls the path passes through, by name.
    pub wall_crossings: Vec<String>,
}

impl PathDescriptor {
    pub fn new(excitation: Excitation, class: TopoClass) -> Self {
        PathDescriptor { excitation, class: class.normalised(), wall_crossings: Vec::new() }
    }

    /// Same excitation and path class; wall crossings are annotations.
    pub fn matches(&self, other: &PathDescriptor) -> bool {
        self.excitation == other.excitation && self.class.normalised() == other.class.normalised()
    }
}

/// `i^phase` times an ordered product of descriptors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalProduct {
    pub phase: u8,
    pub factors: Vec<PathDescriptor>,
}

impl FormalProduct {
    pub fn single(p: PathDescriptor) -> Self {
        FormalProduct { phase: 0, factors: vec![p] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Exchange(usize, usize),
    Monodromy(usize, usize),
}

impl MoveKind {
    pub fn defects(self) -> (usize, usize) {
        match self {
            MoveKind::Exchange(a, b) | MoveKind::Monodromy(a, b) => (a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidMove {
    pub name: String,
    pub kind: MoveKind,
    /// Rewrites of descriptors; anything not listed is left alone.
    pub transform: Vec<(PathDescriptor, FormalProduct)>,
}

#[derive(Clone, Debug)]
pub struct DefectSetup {
    pub name: String,
    pub bundle: ModelBundle,
    pub defects: Vec<Defect>,
    pub relations: Vec<Relation>,
    /// `(X̄, Z̄)` per encoded qubit.
    pub qubits: Vec<(PathDescriptor, PathDescriptor)>,
}

/// A setup together with its braid moves.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub setup: DefectSetup,
    pub moves: Vec<BraidMove>,
}

impl Scheme {
    pub fn find_move(&self, name: &str) -> Option<&BraidMove> {
        self.moves.iter().find(|m| m.name == name)
    }
}

/// Span membership over GF(2) for small generator lists.
fn in_span(gens: &[Excitation], x: Excitation) -> bool {
    let mut basis: Vec<u64> = Vec::new();
    for g in gens {
        let mut v = g.bits();
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut v = x.bits();
    for &b in &basis {
        v = v.min(v ^ b);
    }
    v == 0
}

impl DefectSetup {
    pub fn model(&self) -> &ExcitationModel {
        &self.bundle.model
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn defect_index(&self, id: &str) -> Result<usize, SchemeError> {
        self.defects.iter().position(|d| d.id == id).ok_or_else(|| SchemeError::UnknownDefect(id.to_string()))
    }

    pub fn is_condensable(&self, defect: usize, a: Excitation) -> bool {
        in_span(&self.defects[defect].condensable, a)
    }

    pub fn describe(&self, p: &PathDescriptor) -> String {
        let id = |i: usize| self.defects.get(i).map(|d| d.id.as_str()).unwrap_or("?");
        let class = match p.class {
            TopoClass::Connects(a, b) => format!("connects({}, {})", id(a), id(b)),
            TopoClass::Encloses(a) => format!("encloses({})", id(a)),
            TopoClass::EnclosesPair(a, b) => format!("encloses_pair({}, {})", id(a), id(b)),
            TopoClass::Spans(a) => format!("spans({})", id(a)),
        };
        let mut s = format!("{class}[{}]", self.model().name_of(p.excitation));
        if !p.wall_crossings.is_empty() {
            s.push_str(&format!("{{{}}}", p.wall_crossings.join(",")));
        }
        s
    }

    /// Parses `class(defects)[excitation]` with an optional `{wall,...}`
    /// suffix, e.g. `connects(tl, tr)[em]`.
    pub fn parse_descriptor(&self, s: &str) -> Result<PathDescriptor, SchemeError> {
        let bad =
            |reason: &str| SchemeError::InvalidDescriptor { descriptor: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        let open = t.find('(').ok_or_else(|| bad("expected `class(defects)[excitation]`"))?;
        let close = t.find(')').ok_or_else(|| bad("missing `)`"))?;
        let kind = t[..open].trim();
        let ids: Vec<&str> = t[open + 1..close].split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
        let rest = t[close + 1..].trim();
        let (exc, walls) = match rest.strip_prefix('[').and_then(|r| r.split_once(']')) {
            Some((e, tail)) => (e, tail.trim()),
            None => return Err(bad("missing `[excitation]`")),
        };
        let idx = ids.iter().map(|i| self.defect_index(i)).collect::<Result<Vec<_>, _>>()?;
        let class = match (kind, idx.as_slice()) {
            ("connects", &[a, b]) => TopoClass::Connects(a, b),
            ("encloses", &[a]) => TopoClass::Encloses(a),
            ("encloses_pair", &[a, b]) => TopoClass::EnclosesPair(a, b),
            ("spans", &[a]) => TopoClass::Spans(a),
            ("connects" | "encloses" | "encloses_pair" | "spans", _) => return Err(bad("wrong number of defects")),
            _ => return Err(bad("unknown path class")),
        };
        let mut p = PathDescriptor::new(self.model().parse(exc)?, class);
        if !walls.is_empty() {
            let inner =
                walls.strip_prefix('{').and_then(|w| w.strip_suffix('}')).ok_or_else(|| bad("bad wall list"))?;
            p.wall_crossings = inner.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect();
        }
        self.check_descriptor(&p)?;
        Ok(p)
    }

    /// Endpoints must absorb the excitation; indices and walls must exist.
    pub fn check_descriptor(&self, p: &PathDescriptor) -> Result<(), SchemeError> {
        let bad = |reason: String| SchemeError::InvalidDescriptor { descriptor: self.describe(p), reason };
        if !self.model().owns(p.excitation) {
            return Err(AnyonError::ModelMismatch.into());
        }
        for d in p.class.defects() {
            if d >= self.defects.len() {
                return Err(bad(format!("defect index {d} out of range")));
            }
        }
        if let TopoClass::Connects(a, b) | TopoClass::EnclosesPair(a, b) = p.class {
            if a == b {
                return Err(bad("the two defects must differ".into()));
            }
        }
        for d in p.class.endpoints() {
            if !self.is_condensable(d, p.excitation) {
                return Err(bad(format!(
                    "{} does not condense at {}",
                    self.model().name_of(p.excitation),
                    self.defects[d].id
                )));
            }
        }
        for w in &p.wall_crossings {
            if self.bundle.wall(w).is_err() {
                return Err(bad(format!("unknown wall {w:?}")));
            }
        }
        Ok(())
    }

    /// True when the two operators commute.
    pub fn descriptor_commutes(&self, p: &PathDescriptor, q: &PathDescriptor) -> Result<bool, SchemeError> {
        for d in p.class.defects().into_iter().chain(q.class.defects()) {
            if d >= self.defects.len() {
                return Err(SchemeError::InvalidDescriptor {
                    descriptor: format!("{:?}", if p.class.defects().contains(&d) { p } else { q }),
                    reason: "defect index out of range for this setup".into(),
                });
            }
        }
        let phase = self.model().braid_phase(p.excitation, q.excitation)?;
        Ok(!(phase == -1 && p.class.intersection_parity(q.class)))
    }

    fn product_commutes(&self, a: &FormalProduct, b: &FormalProduct) -> Result<bool, SchemeError> {
        let mut anti = false;
        for p in &a.factors {
            for q in &b.factors {
                anti ^= !self.descriptor_commutes(p, q)?;
            }
        }
        Ok(!anti)
    }

    /// Checks the invariants of the setup itself.
    pub fn validate(&self) -> Result<(), SchemeError> {
        for (i, d) in self.defects.iter().enumerate() {
            if self.defects[..i].iter().any(|e| e.id == d.id) {
                return Err(SchemeError::InvalidSetup(format!("duplicate defect id {:?}", d.id)));
            }
            for a in &d.condensable {
                if !self.model().owns(*a) {
                    return Err(AnyonError::ModelMismatch.into());
                }
            }
            match (d.kind, &d.wall) {
                (DefectKind::Twist, Some(w)) => {
                    let wall = self.bundle.wall(w)?;
                    let want = wall.condensable_at_twist();
                    let same = want.iter().all(|a| in_span(&d.condensable, *a))
                        && d.condensable.iter().all(|a| in_span(&want, *a));
                    if !same {
                        return Err(SchemeError::InvalidSetup(format!(
                            "twist {} condenses a different set from wall {w}",
                            d.id
                        )));
                    }
                }
                (DefectKind::Twist, None) => {
                    return Err(SchemeError::InvalidSetup(format!("twist {} has no wall", d.id)))
                }
                (_, Some(_)) => {
                    return Err(SchemeError::InvalidSetup(format!("{} {} cannot bound a wall", d.kind, d.id)))
                }
                _ => {}
            }
        }
        for r in &self.relations {
            if r.a >= self.defects.len() || r.b >= self.defects.len() || r.a == r.b {
                return Err(SchemeError::InvalidSetup("relation refers to a missing defect".into()));
            }
        }
        self.check_threading_acyclic()?;
        self.qubit_basis().map(|_| ())
    }

    fn check_threading_acyclic(&self) -> Result<(), SchemeError> {
        let n = self.defects.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        fn visit(u: usize, rel: &[Relation], state: &mut [u8]) -> bool {
            state[u] = 1;
            for r in rel.iter().filter(|r| r.kind == RelationKind::Threads && r.a == u) {
                if state[r.b] == 1 || (state[r.b] == 0 && !visit(r.b, rel, state)) {
                    return false;
                }
            }
            state[u] = 2;
            true
        }
        for u in 0..n {
            if state[u] == 0 && !visit(u, &self.relations, &mut state) {
                return Err(SchemeError::InvalidSetup("threading relations contain a cycle".into()));
            }
        }
        Ok(())
    }

    /// The declared pairs, after checking the standard symplectic pattern.
    pub fn qubit_basis(&self) -> Result<Vec<(PathDescriptor, PathDescriptor)>, SchemeError> {
        let flat: Vec<&PathDescriptor> = self.qubits.iter().flat_map(|(x, z)| [x, z]).collect();
        for p in &flat {
            self.check_descriptor(p)?;
        }
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                let should_anticommute = i % 2 == 0 && j == i + 1;
                if self.descriptor_commutes(flat[i], flat[j])? == should_anticommute {
                    return Err(SchemeError::BasisViolation {
                        first: self.basis_label(i),
                        second: self.basis_label(j),
                        expected: if should_anticommute { "anticommute" } else { "commute" },
                    });
                }
            }
        }
        Ok(self.qubits.clone())
    }

    fn basis_label(&self, i: usize) -> String {
        let (x, z) = &self.qubits[i / 2];
        let p = if i.is_multiple_of(2) { x } else { z };
        format!("{}{} = {}", if i.is_multiple_of(2) { "X" } else { "Z" }, i / 2, self.describe(p))
    }

    /// Logical Pauli of one descriptor, read off from which basis operators
    /// it anticommutes with.
    pub fn descriptor_pauli(&self, p: &PathDescriptor) -> Result<PauliOperator, SchemeError> {
        let k = self.qubits.len();
        let mut op = PauliOperator::identity(k);
        for (i, (x, z)) in self.qubits.iter().enumerate() {
            let xb = !self.descriptor_commutes(p, z)?;
            let zb = !self.descriptor_commutes(p, x)?;
            op.set(i, Pauli::from_bits(xb, zb));
        }
        Ok(op)
    }

    pub fn product_pauli(&self, fp: &FormalProduct) -> Result<PauliOperator, SchemeError> {
        let mut op = PauliOperator::identity(self.qubits.len());
        for f in &fp.factors {
            op = op.product(&self.descriptor_pauli(f)?);
        }
        let phase = (op.phase() + fp.phase) % 4;
        Ok(op.with_phase(phase))
    }

    fn image(&self, mv: &BraidMove, p: &PathDescriptor) -> FormalProduct {
        mv.transform
            .iter()
            .find(|(from, _)| from.matches(p))
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| FormalProduct::single(p.clone()))
    }

    /// Checks a move's declaration: it only rewrites paths touching its two
    /// defects, its images are well formed, and it preserves every pairwise
    /// commutation among the basis descriptors.
    pub fn check_move(&self, mv: &BraidMove) -> Result<(), SchemeError> {
        let err = |reason: String| SchemeError::InconsistentMove { name: mv.name.clone(), reason };
        let (a, b) = mv.kind.defects();
        if a >= self.defects.len() || b >= self.defects.len() || a == b {
            return Err(err("move must name two distinct defects of the setup".into()));
        }
        for (from, to) in &mv.transform {
            self.check_descriptor(from)?;
            if !from.class.defects().iter().any(|d| *d == a || *d == b) {
                return Err(err(format!("rewrites {}, which touches neither moving defect", self.describe(from))));
            }
            for f in &to.factors {
                self.check_descriptor(f)?;
            }
        }
        let flat: Vec<&PathDescriptor> = self.qubits.iter().flat_map(|(x, z)| [x, z]).collect();
        let images: Vec<FormalProduct> = flat.iter().map(|p| self.image(mv, p)).collect();
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                let before = self.descriptor_commutes(flat[i], flat[j])?;
                let after = self.product_commutes(&images[i], &images[j])?;
                if before != after {
                    return Err(err(format!(
                        "images of {} and {} no longer {}",
                        self.basis_label(i),
                        self.basis_label(j),
                        if before { "commute" } else { "anticommute" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// Logical Clifford map of a move.
    pub fn braid_action(&self, mv: &BraidMove) -> Result<CliffordTableau, SchemeError> {
        self.check_move(mv)?;
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        for (x, z) in &self.qubits {
            for (p, out) in [(x, &mut xs), (z, &mut zs)] {
                let img = self.product_pauli(&self.image(mv, p))?;
                if !img.is_hermitian() {
                    return Err(SchemeError::InconsistentMove {
                        name: mv.name.clone(),
                        reason: format!("image of {} is not Hermitian: {img}", self.describe(p)),
                    });
                }
                out.push(img);
            }
        }
        CliffordTableau::new(xs, zs)
            .map_err(|e| SchemeError::InconsistentMove { name: mv.name.clone(), reason: e.to_string() })
    }
}

/// Group generated by the moves' tableaux (signs included).
pub fn generate_braid_group(
    setup: &DefectSetup,
    moves: &[BraidMove],
    bound: usize,
) -> Result<BraidGroupReport, SchemeError> {
    let tabs = moves.iter().map(|m| setup.braid_action(m)).collect::<Result<Vec<_>, _>>()?;
    if tabs.is_empty() {
        let group = GroupReport { order: 1, partial: false, mode: GroupMode::ModGlobalPhase };
        return Ok(BraidGroupReport { group, all_clifford: true });
    }
    let (elements, partial) = group_elements(&tabs, bound, GroupMode::ModGlobalPhase)?;
    let all_clifford = elements.iter().all(|t| t.validate().is_ok());
    let group = GroupReport { order: elements.len(), partial, mode: GroupMode::ModGlobalPhase };
    Ok(BraidGroupReport { group, all_clifford })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidGroupReport {
    pub group: GroupReport,
    /// Every element passed symplectic validation.
    pub all_clifford: bool,
}

/// Checks `exchange(a, b)` applied twice against a declared
/// `monodromy(a, b)`, for every pair where both exist.
pub fn check_exchange_squares(scheme: &Scheme) -> Result<Vec<(String, String, bool)>, SchemeError> {
    let mut out = Vec::new();
    for ex in &scheme.moves {
        let MoveKind::Exchange(a, b) = ex.kind else { continue };
        for mo in &scheme.moves {
            let MoveKind::Monodromy(c, d) = mo.kind else { continue };
            if (a, b) == (c, d) || (a, b) == (d, c) {
                let t = scheme.setup.braid_action(ex)?;
                let sq = t.then(&t)?;
                out.push((ex.name.clone(), mo.name.clone(), sq == scheme.setup.braid_action(mo)?));
            }
        }
    }
    Ok(out)
}
