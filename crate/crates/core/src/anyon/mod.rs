//! Abelian `Z2^k` excitation models with spatial dimensions, domain walls and
//! twist condensation.
//!
//! Self-statistics extend to composites as a quadratic form,
//! `θ(g ⊕ h) = θ(g) θ(h) B(g, h)`, and mutual braiding is the bilinear
//! extension of `B`. The dimension of a composite is the largest generator
//! dimension it contains.

pub mod builtin;

use serde::Serialize;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use thiserror::Error;

pub const MAX_GENERATORS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnyonError {
    #[error("excitations belong to different models")]
    ModelMismatch,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid wall {wall:?}: {reason}")]
    InvalidWall { wall: String, reason: String },
    #[error("unknown excitation {0:?}")]
    UnknownExcitation(String),
    #[error("unknown built-in {0:?}")]
    UnknownBuiltin(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    pub dim: usize,
    pub theta: i8,
}

/// Named excitation outside the `Z2^k` algebra (for example a loop that is
/// not an eigenstate of its partners). Stored for reference only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExcitationLabel {
    pub name: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcitationModel {
    name: String,
    dimension: usize,
    generators: Vec<Generator>,
    braiding: Vec<Vec<i8>>,
    labels: Vec<ExcitationLabel>,
    tag: u64,
}

/// Element of `Z2^k`, tied to its model by a fingerprint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Excitation {
    bits: u64,
    tag: u64,
}

impl Excitation {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn is_vacuum(self) -> bool {
        self.bits == 0
    }
}

impl ExcitationModel {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        generators: Vec<Generator>,
        braiding: Vec<Vec<i8>>,
        labels: Vec<ExcitationLabel>,
    ) -> Result<Self, AnyonError> {
        let name = name.into();
        let mut hasher = DefaultHasher::new();
        (&name, dimension, &generators, &braiding).hash(&mut hasher);
        let model = ExcitationModel { name, dimension, generators, braiding, labels, tag: hasher.finish() };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), AnyonError> {
        let bad = |s: String| Err(AnyonError::InvalidModel(s));
        let k = self.generators.len();
        if self.dimension < 2 {
            return bad(format!("ambient dimension {} is below 2", self.dimension));
        }
        if k > MAX_GENERATORS {
            return bad(format!("{k} generators exceeds the limit of {MAX_GENERATORS}"));
        }
        let mut names = BTreeSet::new();
        for g in &self.generators {
            if g.name.is_empty() || g.name.contains(|c: char| c.is_whitespace() || c == '*') || g.name == "1" {
                return bad(format!("generator name {:?} is not usable", g.name));
            }
            if !names.insert(g.name.as_str()) {
                return bad(format!("duplicate generator name {:?}", g.name));
            }
            if g.dim > self.dimension - 2 {
                return bad(format!("generator {} has dimension {} > D-2 = {}", g.name, g.dim, self.dimension - 2));
            }
            if g.theta != 1 && g.theta != -1 {
                return bad(format!("generator {} has statistics {} (expected +1 or -1)", g.name, g.theta));
            }
        }
        if self.braiding.len() != k || self.braiding.iter().any(|r| r.len() != k) {
            return bad(format!("braiding matrix must be {k}x{k}"));
        }
        for i in 0..k {
            if self.braiding[i][i] != 1 {
                return bad(format!("B({0},{0}) must be +1", self.generators[i].name));
            }
            for j in 0..k {
                let b = self.braiding[i][j];
                if b != 1 && b != -1 {
                    return bad(format!("B entry ({i},{j}) is {b}"));
                }
                if b != self.braiding[j][i] {
                    return bad(format!(
                        "braiding matrix not symmetric at ({}, {})",
                        self.generators[i].name, self.generators[j].name
                    ));
                }
                if b == -1 && self.generators[i].dim + self.generators[j].dim != self.dimension - 2 {
                    return bad(format!(
                        "{} and {} braid nontrivially but their dimensions do not sum to D-2",
                        self.generators[i].name, self.generators[j].name
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn braiding_matrix(&self) -> &[Vec<i8>] {
        &self.braiding
    }

    pub fn labels(&self) -> &[ExcitationLabel] {
        &self.labels
    }

    pub fn vacuum(&self) -> Excitation {
        Excitation { bits: 0, tag: self.tag }
    }

    pub fn generator(&self, i: usize) -> Excitation {
        assert!(i < self.generators.len());
        Excitation { bits: 1 << i, tag: self.tag }
    }

    pub fn from_bits(&self, bits: u64) -> Result<Excitation, AnyonError> {
        if bits >> self.generators.len() != 0 {
            return Err(AnyonError::UnknownExcitation(format!("bit pattern {bits:#b}")));
        }
        Ok(Excitation { bits, tag: self.tag })
    }

    /// All `2^k` elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = Excitation> + '_ {
        (0..1u64 << self.generators.len()).map(|bits| Excitation { bits, tag: self.tag })
    }

    pub fn owns(&self, a: Excitation) -> bool {
        a.tag == self.tag
    }

    fn check(&self, a: Excitation) -> Result<(), AnyonError> {
        if self.owns(a) {
            Ok(())
        } else {
            Err(AnyonError::ModelMismatch)
        }
    }

    /// Parses `"1"`, a single name, names joined by `*` or whitespace, or
    /// names written back to back when that is unambiguous (`"em"`).
    pub fn parse(&self, s: &str) -> Result<Excitation, AnyonError> {
        let t = s.trim();
        if t == "1" || t.eq_ignore_ascii_case("vacuum") {
            return Ok(self.vacuum());
        }
        let mut bits = 0u64;
        for tok in t.split(|c: char| c == '*' || c.is_whitespace()).filter(|x| !x.is_empty()) {
            bits ^= self.parse_concatenated(tok).ok_or_else(|| AnyonError::UnknownExcitation(s.to_string()))?;
        }
        if t.is_empty() {
            return Err(AnyonError::UnknownExcitation(s.to_string()));
        }
        Ok(Excitation { bits, tag: self.tag })
    }

    fn parse_concatenated(&self, tok: &str) -> Option<u64> {
        if tok.is_empty() {
            return Some(0);
        }
        // longest name first keeps e1/e10 style names unambiguous
        let mut order: Vec<usize> = (0..self.generators.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.generators[i].name.len()));
        for i in order {
            if let Some(rest) = tok.strip_prefix(self.generators[i].name.as_str()) {
                if let Some(b) = self.parse_concatenated(rest) {
                    return Some(b ^ (1 << i));
                }
            }
        }
        None
    }

    pub fn name_of(&self, a: Excitation) -> String {
        if a.bits == 0 {
            return "1".into();
        }
        (0..self.generators.len()).filter(|i| a.bits >> i & 1 == 1).map(|i| self.generators[i].name.as_str()).collect()
    }

    pub fn fuse(&self, a: Excitation, b: Excitation) -> Result<Excitation, AnyonError> {
        self.check(a)?;
        self.check(b)?;
        Ok(Excitation { bits: a.bits ^ b.bits, tag: self.tag })
    }

    pub fn statistics(&self, a: Excitation) -> Result<i8, AnyonError> {
        self.check(a)?;
        Ok(self.theta_bits(a.bits))
    }

    pub fn braid_phase(&self, a: Excitation, b: Excitation) -> Result<i8, AnyonError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.braid_bits(a.bits, b.bits))
    }

    pub fn is_generalised_fermion(&self, a: Excitation) -> Result<bool, AnyonError> {
        Ok(!a.is_vacuum() && self.statistics(a)? == -1)
    }

    /// Largest generator dimension present; `None` for the vacuum.
    pub fn excitation_dim(&self, a: Excitation) -> Option<usize> {
        self.dim_bits(a.bits)
    }

    fn dim_bits(&self, bits: u64) -> Option<usize> {
        (0..self.generators.len()).filter(|i| bits >> i & 1 == 1).map(|i| self.generators[i].dim).max()
    }

    fn theta_bits(&self, bits: u64) -> i8 {
        let set: Vec<usize> = (0..self.generators.len()).filter(|i| bits >> i & 1 == 1).collect();
        let mut t = 1i8;
        for (n, &i) in set.iter().enumerate() {
            t *= self.generators[i].theta;
            for &j in &set[n + 1..] {
                t *= self.braiding[i][j];
            }
        }
        t
    }

    fn braid_bits(&self, a: u64, b: u64) -> i8 {
        let mut t = 1i8;
        for i in (0..self.generators.len()).filter(|i| a >> i & 1 == 1) {
            for j in (0..self.generators.len()).filter(|j| b >> j & 1 == 1) {
                t *= self.braiding[i][j];
            }
        }
        t
    }

    /// Direct product with another model of the same ambient dimension.
    pub fn stack(&self, other: &ExcitationModel) -> Result<ExcitationModel, AnyonError> {
        if self.dimension != other.dimension {
            return Err(AnyonError::InvalidModel("stacked models must share the ambient dimension".into()));
        }
        let k1 = self.generators.len();
        let k = k1 + other.generators.len();
        let mut gens = self.generators.clone();
        for g in &other.generators {
            let mut g = g.clone();
            while gens.iter().any(|h| h.name == g.name) {
                g.name.push('\'');
            }
            gens.push(g);
        }
        let mut braiding = vec![vec![1i8; k]; k];
        for (row, src) in braiding.iter_mut().zip(&self.braiding) {
            row[..k1].copy_from_slice(src);
        }
        for (row, src) in braiding[k1..].iter_mut().zip(&other.braiding) {
            row[k1..].copy_from_slice(src);
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        ExcitationModel::new(format!("{}+{}", self.name, other.name), self.dimension, gens, braiding, labels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainWall {
    name: String,
    phi: Vec<u64>,
    wall_dim: usize,
    tag: u64,
}

impl DomainWall {
    /// `images[i]` is the image of generator `i`.
    pub fn new(
        model: &ExcitationModel,
        name: impl Into<String>,
        images: Vec<Excitation>,
        wall_dim: usize,
    ) -> Result<Self, AnyonError> {
        let name = name.into();
        let invalid = |reason: String| AnyonError::InvalidWall { wall: name.clone(), reason };
        let k = model.num_generators();
        if images.len() != k {
            return Err(invalid(format!("{} images given for {k} generators", images.len())));
        }
        for &img in &images {
            model.check(img)?;
        }
        if wall_dim < 1 || wall_dim > model.dimension() - 1 {
            return Err(invalid(format!("wall dimension {wall_dim} outside [1, {}]", model.dimension() - 1)));
        }
        let phi: Vec<u64> = images.iter().map(|e| e.bits).collect();
        let wall = DomainWall { name: name.clone(), phi, wall_dim, tag: model.tag };
        // invertibility over GF(2)
        let rows: Vec<crate::gf2::BitVec> = wall
            .phi
            .iter()
            .map(|&b| crate::gf2::BitVec::from_bools(&(0..k).map(|i| b >> i & 1 == 1).collect::<Vec<_>>()))
            .collect();
        if k > 0 && crate::gf2::rank(&rows) != k {
            return Err(invalid("map is not invertible".into()));
        }
        for i in 0..k {
            if model.theta_bits(wall.phi[i]) != model.generators[i].theta {
                return Err(invalid(format!("does not preserve the statistics of {}", model.generators[i].name)));
            }
            for j in 0..k {
                if model.braid_bits(wall.phi[i], wall.phi[j]) != model.braiding[i][j] {
                    return Err(invalid(format!(
                        "does not preserve braiding of {} with {}",
                        model.generators[i].name, model.generators[j].name
                    )));
                }
            }
        }
        let check_dims = |bits: u64| model.dim_bits(wall.map_bits(bits)) == model.dim_bits(bits);
        let dims_ok = if k <= 16 { (1..1u64 << k).all(check_dims) } else { (0..k).all(|i| check_dims(1 << i)) };
        if !dims_ok {
            return Err(invalid("does not preserve excitation dimensions".into()));
        }
        Ok(wall)
    }

    pub fn identity(model: &ExcitationModel, name: impl Into<String>, wall_dim: usize) -> Result<Self, AnyonError> {
        let images = (0..model.num_generators()).map(|i| model.generator(i)).collect();
        DomainWall::new(model, name, images, wall_dim)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn wall_dim(&self) -> usize {
        self.wall_dim
    }

    pub fn images(&self) -> &[u64] {
        &self.phi
    }

    fn map_bits(&self, bits: u64) -> u64 {
        let mut out = 0;
        for (i, &img) in self.phi.iter().enumerate() {
            if bits >> i & 1 == 1 {
                out ^= img;
            }
        }
        out
    }

    pub fn apply(&self, a: Excitation) -> Result<Excitation, AnyonError> {
        if a.tag != self.tag {
            return Err(AnyonError::ModelMismatch);
        }
        Ok(Excitation { bits: self.map_bits(a.bits), tag: self.tag })
    }

    /// `{ g ⊕ phi(g) }`, sorted by bit pattern.
    pub fn condensable_at_twist(&self) -> Vec<Excitation> {
        let k = self.phi.len();
        let set: BTreeSet<u64> = (0..1u64 << k).map(|g| g ^ self.map_bits(g)).collect();
        set.into_iter().map(|bits| Excitation { bits, tag: self.tag }).collect()
    }

    /// The same wall acting as the identity on the factor appended by
    /// [`ExcitationModel::stack`].
    pub fn extend_identity(&self, stacked: &ExcitationModel) -> Result<DomainWall, AnyonError> {
        let k1 = self.phi.len();
        let images = (0..stacked.num_generators())
            .map(|i| if i < k1 { Excitation { bits: self.phi[i], tag: stacked.tag } } else { stacked.generator(i) })
            .collect();
        DomainWall::new(stacked, self.name.clone(), images, self.wall_dim)
    }
}

pub fn fuse(model: &ExcitationModel, a: Excitation, b: Excitation) -> Result<Excitation, AnyonError> {
    model.fuse(a, b)
}

pub fn wall_apply(w: &DomainWall, a: Excitation) -> Result<Excitation, AnyonError> {
    w.apply(a)
}

pub fn condensable_at_twist(w: &DomainWall) -> Vec<Excitation> {
    w.condensable_at_twist()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The condensing generalised fermion.
    pub a: String,
    /// An excitation carried across the wall to `a ⊕ b`.
    pub b: String,
    #[serde(skip)]
    pub a_exc: Excitation,
    #[serde(skip)]
    pub b_exc: Excitation,
    pub fermion_dim: usize,
    pub partner_dim: usize,
    pub twist_dim: usize,
    /// `braid_phase(b, a ⊕ b)`, expected to be -1.
    pub braid_check: i8,
    /// `dim(a) + dim(b) == D - 2`.
    pub dimension_check: bool,
    /// Whether the fermion is extended, so that a threaded puncture is needed
    /// to give the logical operator a closed support.
    pub threaded_puncture_required: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EligibilityReport {
    pub model: String,
    pub wall: String,
    pub eligible: bool,
    pub condensable: Vec<String>,
    pub witness: Option<Witness>,
    pub reason: Option<String>,
}

/// Looks for a generalised fermion `a` condensing at the wall's twists
/// together with a partner `b` such that `phi(b) = a ⊕ b`. The smallest
/// candidates in bit order are chosen so that reports are reproducible.
pub fn clifford_eligibility(model: &ExcitationModel, w: &DomainWall) -> Result<EligibilityReport, AnyonError> {
    if w.tag != model.tag {
        return Err(AnyonError::ModelMismatch);
    }
    let condensable = w.condensable_at_twist();
    let mut report = EligibilityReport {
        model: model.name.clone(),
        wall: w.name.clone(),
        eligible: false,
        condensable: condensable.iter().map(|&a| model.name_of(a)).collect(),
        witness: None,
        reason: None,
    };
    let fermions: Vec<Excitation> =
        condensable.iter().copied().filter(|&a| !a.is_vacuum() && model.theta_bits(a.bits) == -1).collect();
    if condensable.len() == 1 {
        report.reason = Some("only the vacuum condenses at the twists".into());
        return Ok(report);
    }
    if fermions.is_empty() {
        report.reason = Some("no generalised fermion condenses at the twists".into());
        return Ok(report);
    }
    let mut last_reason = None;
    for a in fermions {
        let b =
            model.elements().find(|&b| w.map_bits(b.bits) == a.bits ^ b.bits).expect("a lies in the image of 1 + phi");
        let fermion_dim = model.excitation_dim(a).unwrap_or(0);
        let partner_dim = model.excitation_dim(b).unwrap_or(0);
        let twist_dim = 2 * fermion_dim;
        let witness = Witness {
            a: model.name_of(a),
            b: model.name_of(b),
            a_exc: a,
            b_exc: b,
            fermion_dim,
            partner_dim,
            twist_dim,
            braid_check: model.braid_bits(b.bits, a.bits ^ b.bits),
            dimension_check: fermion_dim + partner_dim + 2 == model.dimension,
            threaded_puncture_required: fermion_dim >= 1,
        };
        let reason = if witness.braid_check != -1 {
            Some(format!(
                "{} and {} braid trivially",
                witness.b,
                model.name_of(Excitation { bits: a.bits ^ b.bits, tag: model.tag })
            ))
        } else if !witness.dimension_check {
            Some(format!("dimensions of {} and {} do not sum to D-2", witness.a, witness.b))
        } else if twist_dim + 1 != w.wall_dim {
            Some(format!(
                "twists of a {}-dimensional wall are {}-dimensional but {} needs {}-dimensional twists",
                w.wall_dim,
                w.wall_dim - 1,
                witness.a,
                twist_dim
            ))
        } else {
            None
        };
        match reason {
            None => {
                report.eligible = true;
                report.witness = Some(witness);
                return Ok(report);
            }
            Some(r) => last_reason = Some(r),
        }
    }
    report.reason = last_reason;
    Ok(report)
}

impl fmt::Display for EligibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} / wall {}", self.model, self.wall)?;
        writeln!(f, "condensable at twist: {{{}}}", self.condensable.join(", "))?;
        match &self.witness {
            Some(w) if self.eligible => {
                writeln!(f, "eligible: yes")?;
                writeln!(f, "witness a = {} (dim {}), b = {} (dim {})", w.a, w.fermion_dim, w.b, w.partner_dim)?;
                writeln!(f, "twist dimension {}", w.twist_dim)?;
                writeln!(f, "braid_phase(b, a*b) = {}", w.braid_check)?;
                write!(f, "threaded puncture required: {}", if w.threaded_puncture_required { "yes" } else { "no" })
            }
            _ => write!(f, "eligible: no ({})", self.reason.as_deref().unwrap_or("no witness")),
        }
    }
}
