//! Code deformation by stabiliser measurement.
//!
//! A hole moves one cell at a time: single-qubit measurements carve the cell
//! it enters, then the stabilisers of the cell it leaves are measured back in.
//! Every outcome is normalised to +1 by a recorded Pauli correction, so the
//! induced logical map is deterministic.

mod scenarios;
mod script;

pub use scenarios::{cnot_braid, out_and_back, rough_rough_braid, smallest_cnot_braid, BraidScenario};
pub use script::{move_hole, BraidScript, DeformationStep, Direction, HoleMove, StepKind};

use crate::gf2::Echelon;
use crate::lattice::{distance_bruteforce, CodeError, LatticeCode, LatticeError, StabiliserCode};
use crate::pauli::{CliffordTableau, Pauli, PauliError, PauliOperator};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error("logical measurement attempted: {0} commutes with the stabiliser group without belonging to it")]
    LogicalMeasurement(String),
    #[error("measured operator is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("operator acts on {got} qubits, code has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("step {step}: {message}")]
    BadStep { step: usize, message: String },
    #[error("number of logical qubits changed from {before} to {after} at step {step}")]
    LogicalCountChanged { step: usize, before: usize, after: usize },
    #[error("distance dropped to {distance} (floor {floor}) after step {step}")]
    DistanceFloor { step: usize, distance: usize, floor: usize },
    #[error("configuration not restored: the final stabiliser group differs from the initial one")]
    ConfigurationNotRestored,
    #[error("path collides with another hole or the boundary at move {index}: {source}")]
    PathCollision { index: usize, source: LatticeError },
    #[error("no hole with index {0}")]
    NoSuchHole(usize),
    #[error("cannot parse braid script at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// What a measurement did to the stabiliser group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasurementEffect {
    /// Already in the group up to sign.
    Unchanged,
    /// Generator `index` anticommuted and was replaced.
    Replaced { index: usize, removed: PauliOperator },
}

/// Stabiliser group, tracked logical representatives and Pauli frame.
#[derive(Clone, Debug)]
pub struct DeformationState {
    n: usize,
    generators: Vec<PauliOperator>,
    /// `[X̄_0, Z̄_0, X̄_1, Z̄_1, ...]` of the initial basis, as updated.
    reps: Vec<PauliOperator>,
    frame: PauliOperator,
}

impl DeformationState {
    pub fn new(code: &StabiliserCode) -> Self {
        DeformationState {
            n: code.num_qubits(),
            generators: code.generators().to_vec(),
            reps: code.logical_pairs().iter().flat_map(|(x, z)| [x.clone(), z.clone()]).collect(),
            frame: PauliOperator::identity(code.num_qubits()),
        }
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn representatives(&self) -> &[PauliOperator] {
        &self.reps
    }

    /// Current code with the tracked representatives as its logical basis.
    pub fn code(&self) -> StabiliserCode {
        let pairs = self.reps.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
        StabiliserCode::from_parts_unchecked(self.n, self.generators.clone(), pairs)
    }

    pub fn num_logical(&self) -> usize {
        self.n - crate::gf2::rank(&self.generators.iter().map(|g| g.symplectic()).collect::<Vec<_>>())
    }

    /// Accumulated correction applied to force +1 outcomes.
    pub fn byproduct_frame(&self) -> &PauliOperator {
        &self.frame
    }

    /// Measures `m` assuming outcome +1.
    pub fn apply_measurement(&mut self, m: &PauliOperator) -> Result<MeasurementEffect, DeformationError> {
        self.apply_measurement_with_outcome(m, 1)
    }

    /// Measures `m` with the given outcome (±1). A -1 outcome on a fresh
    /// measurement is corrected by the generator it displaced, which is
    /// recorded in the frame.
    pub fn apply_measurement_with_outcome(
        &mut self,
        m: &PauliOperator,
        outcome: i8,
    ) -> Result<MeasurementEffect, DeformationError> {
        if m.num_qubits() != self.n {
            return Err(DeformationError::SizeMismatch { expected: self.n, got: m.num_qubits() });
        }
        if !m.is_hermitian() {
            return Err(DeformationError::NotHermitian(m.to_string()));
        }
        let Some(idx) = self.generators.iter().position(|g| !g.commutes_with(m)) else {
            let e = Echelon::from_rows(2 * self.n, &self.generators.iter().map(|g| g.symplectic()).collect::<Vec<_>>());
            if e.contains(&m.symplectic()) {
                return Ok(MeasurementEffect::Unchanged);
            }
            return Err(DeformationError::LogicalMeasurement(m.to_string()));
        };
        let g = self.generators[idx].clone();
        for (j, h) in self.generators.iter_mut().enumerate() {
            if j != idx && !h.commutes_with(m) {
                *h = h.product(&g);
            }
        }
        for r in self.reps.iter_mut() {
            if !r.commutes_with(m) {
                *r = r.product(&g);
            }
        }
        self.generators[idx] = m.clone();
        if outcome < 0 {
            self.frame = self.frame.product(&g);
        }
        Ok(MeasurementEffect::Replaced { index: idx, removed: g })
    }

    /// Writes `p` (which must commute with the group) as `i^k` times a
    /// product of initial basis operators, given the initial basis `basis`.
    fn decompose(&self, p: &PauliOperator, basis: &[PauliOperator]) -> Result<PauliOperator, DeformationError> {
        let k = basis.len() / 2;
        let mut logical = PauliOperator::identity(k);
        let mut lift = PauliOperator::identity(self.n);
        for i in 0..k {
            let (xb, zb) = (&basis[2 * i], &basis[2 * i + 1]);
            let x = !p.commutes_with(zb);
            let z = !p.commutes_with(xb);
            logical.set(i, Pauli::from_bits(x, z));
            match (x, z) {
                (true, true) => {
                    let y = xb.product(zb);
                    lift = lift.product(&y.clone().with_phase(y.phase() + 1));
                }
                (true, false) => lift = lift.product(xb),
                (false, true) => lift = lift.product(zb),
                _ => {}
            }
        }
        // p * lift must be a stabiliser up to a phase
        let q = p.product(&lift);
        let rows: Vec<_> = self.generators.iter().map(|g| g.symplectic()).collect();
        let e = Echelon::from_rows(2 * self.n, &rows);
        let red = e.reduce(&q.symplectic());
        if !red.residual.is_zero() {
            return Err(DeformationError::BadStep {
                step: 0,
                message: format!("representative {p} is not a combination of the initial logical basis"),
            });
        }
        let mut s = PauliOperator::identity(self.n);
        for i in red.combo.ones() {
            s = s.product(&self.generators[i]);
        }
        // q = i^t s, and p = q * lift acts as i^t * lift on the code space
        let t = (q.phase() + 4 - s.phase()) % 4;
        Ok(logical.with_phase(t))
    }
}

#[derive(Clone, Debug, Default)]
pub struct BraidOptions {
    /// Fail if the brute-force distance drops below this after any step.
    pub distance_floor: Option<usize>,
    /// Check the floor every this many steps (1 when unset).
    pub checkpoint_every: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct BraidOutcome {
    pub tableau: CliffordTableau,
    pub steps: usize,
    pub final_state: DeformationState,
    /// Smallest distance seen at checkpoints, when a floor was configured.
    pub min_distance: Option<usize>,
}

/// Runs a script on a lattice code and returns the induced map on the code's
/// logical basis.
pub fn run_braid(
    lc: &LatticeCode,
    script: &BraidScript,
    opts: &BraidOptions,
) -> Result<BraidOutcome, DeformationError> {
    let code = &lc.code;
    let mut state = DeformationState::new(code);
    let k0 = state.num_logical();
    let basis = state.reps.clone();
    let every = opts.checkpoint_every.unwrap_or(1).max(1);
    let mut min_distance = None;
    for (i, step) in script.steps.iter().enumerate() {
        let m = step.operator(&lc.lattice).map_err(|message| DeformationError::BadStep { step: i, message })?;
        state.apply_measurement(&m).map_err(|e| match e {
            DeformationError::LogicalMeasurement(s) => {
                DeformationError::BadStep { step: i, message: format!("logical measurement attempted: {s}") }
            }
            other => other,
        })?;
        let k = state.num_logical();
        if k != k0 {
            return Err(DeformationError::LogicalCountChanged { step: i, before: k0, after: k });
        }
        if let Some(floor) = opts.distance_floor {
            if (i + 1) % every == 0 || i + 1 == script.steps.len() {
                match distance_bruteforce(&state.code(), floor.saturating_sub(1)) {
                    Ok(d) => return Err(DeformationError::DistanceFloor { step: i, distance: d, floor }),
                    Err(CodeError::NotFound { .. }) => min_distance = Some(floor),
                    Err(e) => return Err(DeformationError::Lattice(e.into())),
                }
            }
        }
    }
    let initial = Echelon::from_rows(
        2 * code.num_qubits(),
        &code.generators().iter().map(|g| g.symplectic()).collect::<Vec<_>>(),
    );
    let fin =
        Echelon::from_rows(2 * code.num_qubits(), &state.generators.iter().map(|g| g.symplectic()).collect::<Vec<_>>());
    let same = initial.rank() == fin.rank() && code.generators().iter().all(|g| fin.contains(&g.symplectic()));
    if !same {
        return Err(DeformationError::ConfigurationNotRestored);
    }
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for (j, r) in state.reps.iter().enumerate() {
        let img = state.decompose(r, &basis)?;
        if j % 2 == 0 {
            xs.push(img);
        } else {
            zs.push(img);
        }
    }
    let tableau = CliffordTableau::new(xs, zs)?;
    Ok(BraidOutcome { tableau, steps: script.steps.len(), final_state: state, min_distance })
}
