use super::{CliffordTableau, PauliError};
use serde::Serialize;
use std::collections::{HashSet, VecDeque};

/// How two tableaux are identified during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupMode {
    /// Distinct signed tableaux: the group of unitaries modulo global phase.
    #[default]
    ModGlobalPhase,
    /// Also forget the signs of the images, i.e. work modulo Pauli conjugation.
    ModPauli,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub order: usize,
    /// The bound was reached before the group closed.
    pub partial: bool,
    pub mode: GroupMode,
}

fn key(t: &CliffordTableau, mode: GroupMode) -> Vec<u64> {
    let n = t.num_qubits();
    let mut k = Vec::new();
    for q in 0..n {
        for img in [t.x_image(q), t.z_image(q)] {
            k.extend_from_slice(img.x_bits().words());
            k.extend_from_slice(img.z_bits().words());
            if mode == GroupMode::ModGlobalPhase {
                k.push(img.phase() as u64);
            }
        }
    }
    k
}

/// Breadth-first closure of the generators, stopping after `bound` elements.
pub fn group_elements(
    generators: &[CliffordTableau],
    bound: usize,
    mode: GroupMode,
) -> Result<(Vec<CliffordTableau>, bool), PauliError> {
    let Some(first) = generators.first() else {
        return Ok((vec![], false));
    };
    let n = first.num_qubits();
    if let Some(g) = generators.iter().find(|g| g.num_qubits() != n) {
        return Err(PauliError::SizeMismatch(n, g.num_qubits()));
    }
    let id = CliffordTableau::identity(n);
    let mut seen = HashSet::new();
    seen.insert(key(&id, mode));
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(t) = queue.pop_front() {
        for g in generators {
            let next = t.then(g)?;
            if seen.insert(key(&next, mode)) {
                if elements.len() >= bound {
                    return Ok((elements, true));
                }
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok((elements, false))
}

pub fn generate_group(
    generators: &[CliffordTableau],
    bound: usize,
    mode: GroupMode,
) -> Result<GroupReport, PauliError> {
    let (elements, partial) = group_elements(generators, bound, mode)?;
    Ok(GroupReport { order: elements.len(), partial, mode })
}
