//! Logical programs for the three-stack puncture register, their gadget
//! expansion, and exhaustive verification by dense simulation.
//!
//! The register holds data qubits `1..=N` (odd `N >= 3`) and ancillas `a`,
//! `b`. Physical index `q - 1` holds data qubit `q`; `a` is `N` and `b` is
//! `N + 1`. Qubit `N` is carried by the threaded puncture; pair `k` carries
//! `2k - 1` and `2k`.

mod gadgets;
mod sim;
mod text;
mod verify;

#[cfg(test)]
mod tests;

pub use gadgets::{compile_ccz, compile_gate, compile_h, compile_swap, h_gadget, i_gadget, GateSpec, ProgramBuilder};
pub use sim::Operator;
pub use verify::{
    verify, verify_naive, BranchClass, BranchReport, Gate, Target, Verdict, VerifyOptions, DEFAULT_QUBIT_CAP,
};

use crate::pauli::{CliffordTableau, Pauli, PauliOperator};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("N must be odd and at least 3, got {0}")]
    BadRegister(usize),
    #[error("{qubits} simulated qubits exceed the cap of {cap}; raise the cap or pick a smaller N")]
    CapExceeded { qubits: usize, cap: usize },
    #[error("no qubit {0:?} in this register")]
    BadQubit(String),
    #[error("instruction {index}: {message}")]
    BadInstruction { index: usize, message: String },
    #[error("no {gadget} route from {from} to {to}")]
    NoRoute { gadget: &'static str, from: String, to: String },
    #[error("dataflow violation at instruction {index}: {message}")]
    Dataflow { index: usize, message: String },
    #[error("instruction {index}: qubit {qubit} is entangled with the register and cannot be re-prepared")]
    PrepOnEntangled { index: usize, qubit: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    BadGate(String),
}

/// `N` data qubits plus the ancillas `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Register {
    n: usize,
}

impl Register {
    pub fn new(n: usize) -> Result<Self, CompileError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(CompileError::BadRegister(n));
        }
        Ok(Register { n })
    }

    /// Number of data qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Data qubits plus ancillas.
    pub fn num_qubits(&self) -> usize {
        self.n + 2
    }

    pub fn num_pairs(&self) -> usize {
        (self.n - 1) / 2
    }

    /// Physical index of data qubit `q` (1-based).
    pub fn data(&self, q: usize) -> usize {
        assert!((1..=self.n).contains(&q), "data qubit {q} out of range");
        q - 1
    }

    pub fn threaded(&self) -> usize {
        self.n - 1
    }

    pub fn a(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.n + 1
    }

    pub fn is_ancilla(&self, i: usize) -> bool {
        i >= self.n
    }

    /// Pair index `k` (1-based) of a data qubit other than `N`.
    pub fn pair_of(&self, i: usize) -> Option<usize> {
        (i < self.n - 1).then_some(i / 2 + 1)
    }

    pub fn name(&self, i: usize) -> String {
        match i {
            i if i < self.n => (i + 1).to_string(),
            i if i == self.n => "a".into(),
            i if i == self.n + 1 => "b".into(),
            _ => format!("?{i}"),
        }
    }

    pub fn parse(&self, s: &str) -> Result<usize, CompileError> {
        match s.trim() {
            "a" => Ok(self.a()),
            "b" => Ok(self.b()),
            t => match t.parse::<usize>() {
                Ok(q) if (1..=self.n).contains(&q) => Ok(q - 1),
                _ => Err(CompileError::BadQubit(t.into())),
            },
        }
    }
}

/// Classical control: fire when measurement bit `bit` reads `value`
/// (`true` for the −1 outcome).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub bit: usize,
    pub value: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Instruction {
    /// Discards the qubit's state and prepares `|0>`.
    PrepZ {
        qubit: usize,
    },
    /// Discards the qubit's state and prepares `|+>`.
    PrepX {
        qubit: usize,
    },
    MeasX {
        qubit: usize,
        bit: usize,
    },
    MeasZ {
        qubit: usize,
        bit: usize,
    },
    PauliX {
        qubit: usize,
        cond: Option<Condition>,
    },
    PauliZ {
        qubit: usize,
        cond: Option<Condition>,
    },
    /// CZ between qubit `N` and `other`.
    Cz {
        other: usize,
    },
    /// Transversal CZ between the first two stacks: `CZ_ab` times `CZ` on
    /// every pair.
    GlobalCz12,
    /// Transversal CCZ: `CCZ_{a,b,N}` times `CCZ_{2k-1,2k,N}` for every pair.
    GlobalCcz,
    /// Braid of pair `pair`'s second puncture around `h_alpha`:
    /// `CNOT(a -> 2k-1) CNOT(2k -> b)`.
    BraidCnot {
        pair: usize,
    },
}

impl Instruction {
    pub fn measured_bit(&self) -> Option<usize> {
        match *self {
            Instruction::MeasX { bit, .. } | Instruction::MeasZ { bit, .. } => Some(bit),
            _ => None,
        }
    }

    pub fn condition(&self) -> Option<Condition> {
        match *self {
            Instruction::PauliX { cond, .. } | Instruction::PauliZ { cond, .. } => cond,
            _ => None,
        }
    }

    /// Qubits the instruction acts on.
    pub fn qubits(&self, reg: &Register) -> Vec<usize> {
        match *self {
            Instruction::PrepZ { qubit }
            | Instruction::PrepX { qubit }
            | Instruction::MeasX { qubit, .. }
            | Instruction::MeasZ { qubit, .. }
            | Instruction::PauliX { qubit, .. }
            | Instruction::PauliZ { qubit, .. } => vec![qubit],
            Instruction::Cz { other } => vec![reg.threaded(), other],
            Instruction::GlobalCz12 => {
                let mut v: Vec<usize> = (0..2 * reg.num_pairs()).collect();
                v.extend([reg.a(), reg.b()]);
                v
            }
            Instruction::GlobalCcz => (0..reg.num_qubits()).collect(),
            Instruction::BraidCnot { pair } => vec![reg.a(), 2 * pair - 2, 2 * pair - 1, reg.b()],
        }
    }

    /// Clifford action of unconditional Clifford instructions.
    pub fn clifford(&self, reg: &Register) -> Option<CliffordTableau> {
        let n = reg.num_qubits();
        let chain = |gates: Vec<CliffordTableau>| {
            gates.into_iter().try_fold(CliffordTableau::identity(n), |acc, g| acc.then(&g)).expect("same size")
        };
        match *self {
            Instruction::PauliX { qubit, cond: None } => {
                Some(CliffordTableau::pauli(&PauliOperator::single(n, qubit, Pauli::X)))
            }
            Instruction::PauliZ { qubit, cond: None } => {
                Some(CliffordTableau::pauli(&PauliOperator::single(n, qubit, Pauli::Z)))
            }
            Instruction::Cz { other } => Some(CliffordTableau::cz(n, reg.threaded(), other)),
            Instruction::GlobalCz12 => {
                let mut g = vec![CliffordTableau::cz(n, reg.a(), reg.b())];
                g.extend((0..reg.num_pairs()).map(|k| CliffordTableau::cz(n, 2 * k, 2 * k + 1)));
                Some(chain(g))
            }
            Instruction::BraidCnot { pair } => Some(chain(vec![
                CliffordTableau::cnot(n, reg.a(), 2 * pair - 2),
                CliffordTableau::cnot(n, 2 * pair - 1, reg.b()),
            ])),
            _ => None,
        }
    }

    fn validate(&self, reg: &Register) -> Result<(), String> {
        let nq = reg.num_qubits();
        match *self {
            Instruction::Cz { other } if other == reg.threaded() => Err("CZ needs a partner other than N".into()),
            Instruction::BraidCnot { pair } if pair == 0 || pair > reg.num_pairs() => {
                Err(format!("no defect pair {pair}"))
            }
            _ if self.qubits(reg).iter().any(|&q| q >= nq) => Err("qubit out of range".into()),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    /// Teleports through a CZ, applying H on the way.
    H,
    /// Teleports through a braided CNOT.
    I,
}

/// Instructions `start..end` form a gadget moving the logical state on
/// `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetSpan {
    pub kind: GadgetKind,
    pub from: usize,
    pub to: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    register: Register,
    instructions: Vec<Instruction>,
    bit_names: Vec<String>,
    gadgets: Vec<GadgetSpan>,
}

/// Resource tally of a program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResourceCount {
    pub h_gadgets: usize,
    pub i_gadgets: usize,
    pub measurements: usize,
    pub preparations: usize,
    pub conditional_paulis: usize,
    pub cz: usize,
    pub global_transversal: usize,
    pub braids: usize,
}

impl ResourceCount {
    pub fn gadgets(&self) -> usize {
        self.h_gadgets + self.i_gadgets
    }
}

impl Program {
    pub fn new(register: Register) -> Self {
        Program { register, instructions: Vec::new(), bit_names: Vec::new(), gadgets: Vec::new() }
    }

    /// Assembles a program, checking instruction ranges, that bits are
    /// written once and only read after being written, and gadget spans.
    pub fn from_parts(
        register: Register,
        instructions: Vec<Instruction>,
        bit_names: Vec<String>,
        gadgets: Vec<GadgetSpan>,
    ) -> Result<Self, CompileError> {
        let p = Program { register, instructions, bit_names, gadgets };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), CompileError> {
        let mut written = vec![false; self.bit_names.len()];
        for (index, ins) in self.instructions.iter().enumerate() {
            let bad = |message: String| CompileError::BadInstruction { index, message };
            ins.validate(&self.register).map_err(bad)?;
            if let Some(c) = ins.condition() {
                if !written.get(c.bit).copied().unwrap_or(false) {
                    return Err(bad(format!("condition reads bit {} before it is measured", c.bit)));
                }
            }
            if let Some(b) = ins.measured_bit() {
                match written.get_mut(b) {
                    Some(w) if !*w => *w = true,
                    Some(_) => return Err(bad(format!("bit {} measured twice", self.bit_names[b]))),
                    None => return Err(bad(format!("undeclared bit {b}"))),
                }
            }
        }
        for g in &self.gadgets {
            if g.start > g.end || g.end > self.instructions.len() {
                return Err(CompileError::BadInstruction {
                    index: g.start,
                    message: "gadget span out of range".into(),
                });
            }
        }
        Ok(())
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn bit_names(&self) -> &[String] {
        &self.bit_names
    }

    pub fn gadgets(&self) -> &[GadgetSpan] {
        &self.gadgets
    }

    pub fn num_measurements(&self) -> usize {
        self.instructions.iter().filter(|i| i.measured_bit().is_some()).count()
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Indices of conditional instructions.
    pub fn corrections(&self) -> Vec<usize> {
        (0..self.instructions.len()).filter(|&i| self.instructions[i].condition().is_some()).collect()
    }

    /// The program with instruction `index` deleted. Gadget spans are
    /// dropped since they no longer describe the circuit.
    pub fn without(&self, index: usize) -> Program {
        let mut instructions = self.instructions.clone();
        instructions.remove(index);
        Program { register: self.register, instructions, bit_names: self.bit_names.clone(), gadgets: Vec::new() }
    }

    /// Concatenation; bits of `other` are renumbered after ours.
    pub fn then(&self, other: &Program) -> Result<Program, CompileError> {
        if other.register != self.register {
            return Err(CompileError::BadGate("programs on different registers".into()));
        }
        let off = self.bit_names.len();
        let shift = self.instructions.len();
        let mut out = self.clone();
        out.bit_names.extend((0..other.bit_names.len()).map(|i| format!("m{}", off + i)));
        out.instructions.extend(other.instructions.iter().map(|ins| match *ins {
            Instruction::MeasX { qubit, bit } => Instruction::MeasX { qubit, bit: bit + off },
            Instruction::MeasZ { qubit, bit } => Instruction::MeasZ { qubit, bit: bit + off },
            Instruction::PauliX { qubit, cond } => {
                Instruction::PauliX { qubit, cond: cond.map(|c| Condition { bit: c.bit + off, ..c }) }
            }
            Instruction::PauliZ { qubit, cond } => {
                Instruction::PauliZ { qubit, cond: cond.map(|c| Condition { bit: c.bit + off, ..c }) }
            }
            other => other,
        }));
        out.gadgets.extend(other.gadgets.iter().map(|g| GadgetSpan {
            start: g.start + shift,
            end: g.end + shift,
            ..*g
        }));
        Ok(out)
    }

    pub fn resource_count(&self) -> ResourceCount {
        let mut c = ResourceCount::default();
        for ins in &self.instructions {
            match ins {
                Instruction::PrepZ { .. } | Instruction::PrepX { .. } => c.preparations += 1,
                Instruction::MeasX { .. } | Instruction::MeasZ { .. } => c.measurements += 1,
                Instruction::PauliX { cond: Some(_), .. } | Instruction::PauliZ { cond: Some(_), .. } => {
                    c.conditional_paulis += 1
                }
                Instruction::PauliX { .. } | Instruction::PauliZ { .. } => {}
                Instruction::Cz { .. } => c.cz += 1,
                Instruction::GlobalCz12 | Instruction::GlobalCcz => c.global_transversal += 1,
                Instruction::BraidCnot { .. } => c.braids += 1,
            }
        }
        for g in &self.gadgets {
            match g.kind {
                GadgetKind::H => c.h_gadgets += 1,
                GadgetKind::I => c.i_gadgets += 1,
            }
        }
        c
    }

    /// Static dataflow check against the gadget annotations: no qubit holding
    /// logical data is prepared or measured except the source of the gadget
    /// consuming it, gadgets move data onto free qubits, and every logical
    /// state ends where `layout` says (`layout[q]` is the final home of data
    /// qubit `q + 1`; `None` means "back home").
    pub fn check_dataflow(&self, layout: Option<&[usize]>) -> Result<(), CompileError> {
        let reg = &self.register;
        let mut holds: Vec<Option<usize>> = (0..reg.num_qubits()).map(|i| (i < reg.n()).then_some(i)).collect();
        let mut spans = self.gadgets.clone();
        spans.sort_by_key(|g| (g.start, g.end));
        let name = |i: usize| reg.name(i);
        for (index, ins) in self.instructions.iter().enumerate() {
            let active = spans.iter().find(|g| g.start <= index && index < g.end);
            let err = |message: String| CompileError::Dataflow { index, message };
            match *ins {
                Instruction::PrepZ { qubit } | Instruction::PrepX { qubit } => {
                    if let Some(l) = holds[qubit] {
                        return Err(err(format!("preparing {} discards logical qubit {}", name(qubit), l + 1)));
                    }
                }
                Instruction::MeasX { qubit, .. } | Instruction::MeasZ { qubit, .. } => {
                    if let Some(l) = holds[qubit] {
                        if active.map(|g| g.from) != Some(qubit) {
                            return Err(err(format!(
                                "measuring {} outside its gadget destroys logical qubit {}",
                                name(qubit),
                                l + 1
                            )));
                        }
                    }
                }
                _ => {}
            }
            for g in spans.iter().filter(|g| g.end == index + 1) {
                let Some(l) = holds[g.from].take() else {
                    return Err(err(format!("gadget moves from {}, which holds no data", name(g.from))));
                };
                if holds[g.to].is_some() {
                    return Err(err(format!("gadget moves onto {}, which already holds data", name(g.to))));
                }
                holds[g.to] = Some(l);
            }
        }
        for q in 0..reg.n() {
            let want = layout.map(|l| l[q]).unwrap_or(q);
            if holds[want] != Some(q) {
                return Err(CompileError::Dataflow {
                    index: self.instructions.len(),
                    message: format!("logical qubit {} does not end on {}", q + 1, name(want)),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
