//! Gadget expansion and the H, CCZ and SWAP compilers.
//!
//! Gadget sequences are written as operator products in the literature; the
//! builder emits them right to left. `H_xy` teleports the state on `x` to
//! `y` through a CZ, applying H; `I_xy` teleports it through a braided CNOT.

use super::{CompileError, Condition, GadgetKind, GadgetSpan, Gate, Instruction, Program, Register, Target};
use std::str::FromStr;

/// Accumulates instructions and tracks which qubits are known to be `|0>`,
/// so redundant resets can be skipped.
#[derive(Clone, Debug)]
pub struct ProgramBuilder {
    reg: Register,
    ins: Vec<Instruction>,
    bits: usize,
    gadgets: Vec<GadgetSpan>,
    zero: Vec<bool>,
}

impl ProgramBuilder {
    pub fn new(reg: Register) -> Self {
        let zero = (0..reg.num_qubits()).map(|q| reg.is_ancilla(q)).collect();
        ProgramBuilder { reg, ins: Vec::new(), bits: 0, gadgets: Vec::new(), zero }
    }

    pub fn register(&self) -> &Register {
        &self.reg
    }

    pub fn push(&mut self, ins: Instruction) {
        let reg = self.reg;
        match ins {
            Instruction::PrepZ { qubit } => self.zero[qubit] = true,
            Instruction::PrepX { qubit }
            | Instruction::MeasX { qubit, .. }
            | Instruction::MeasZ { qubit, .. }
            | Instruction::PauliX { qubit, .. } => self.zero[qubit] = false,
            Instruction::BraidCnot { pair } => {
                let (t1, c2) = (2 * pair - 2, 2 * pair - 1);
                self.zero[t1] &= self.zero[reg.a()];
                self.zero[reg.b()] &= self.zero[c2];
            }
            // diagonal gates leave |0> alone
            Instruction::PauliZ { .. } | Instruction::Cz { .. } | Instruction::GlobalCz12 | Instruction::GlobalCcz => {}
        }
        self.ins.push(ins);
    }

    fn measure(&mut self, qubit: usize, x_basis: bool) -> usize {
        let bit = self.bits;
        self.bits += 1;
        self.push(if x_basis { Instruction::MeasX { qubit, bit } } else { Instruction::MeasZ { qubit, bit } });
        bit
    }

    pub fn measure_x(&mut self, qubit: usize) -> usize {
        self.measure(qubit, true)
    }

    pub fn measure_z(&mut self, qubit: usize) -> usize {
        self.measure(qubit, false)
    }

    /// Prepares `|0>` unless the qubit is already known to hold it.
    pub fn zero(&mut self, qubit: usize) {
        if !self.zero[qubit] {
            self.push(Instruction::PrepZ { qubit });
        }
    }

    fn gadget(&mut self, kind: GadgetKind, from: usize, to: usize, body: impl FnOnce(&mut Self)) {
        let start = self.ins.len();
        body(self);
        self.gadgets.push(GadgetSpan { kind, from, to, start, end: self.ins.len() });
    }

    /// The program so far, without returning ancillas to `|0>`.
    pub fn build(self) -> Program {
        let bit_names = (0..self.bits).map(|i| format!("m{i}")).collect();
        Program { register: self.reg, instructions: self.ins, bit_names, gadgets: self.gadgets }
    }

    /// Resets both ancillas and builds.
    pub fn finish(mut self) -> Program {
        let (a, b) = (self.reg.a(), self.reg.b());
        self.zero(a);
        self.zero(b);
        self.build()
    }
}

fn on(c: usize) -> Option<Condition> {
    Some(Condition { bit: c, value: true })
}

/// Emits `H_xy`: `PrepX(y); CZ(x, y); MeasX(x -> m); X(y) if m`. The CZ is
/// direct when one side is qubit `N`; between the ancillas it is the
/// difference of two transversal `CZ_12` applications, the first with `y`
/// in `|0>`.
pub fn h_gadget(pb: &mut ProgramBuilder, x: usize, y: usize) -> Result<(), CompileError> {
    let reg = *pb.register();
    let (t, a, b) = (reg.threaded(), reg.a(), reg.b());
    let no_route = || CompileError::NoRoute { gadget: "H", from: reg.name(x), to: reg.name(y) };
    if x == y || x >= reg.num_qubits() || y >= reg.num_qubits() {
        return Err(no_route());
    }
    let partner = if x == t {
        Some(y)
    } else if y == t {
        Some(x)
    } else {
        None
    };
    let ancillas = (x == a && y == b) || (x == b && y == a);
    if partner.is_none() && !ancillas {
        return Err(no_route());
    }
    pb.gadget(GadgetKind::H, x, y, |pb| {
        match partner {
            Some(other) => {
                pb.push(Instruction::PrepX { qubit: y });
                pb.push(Instruction::Cz { other });
            }
            None => {
                pb.push(Instruction::PrepZ { qubit: y });
                pb.push(Instruction::GlobalCz12);
                pb.push(Instruction::PrepX { qubit: y });
                pb.push(Instruction::GlobalCz12);
            }
        }
        let m = pb.measure_x(x);
        pb.push(Instruction::PauliX { qubit: y, cond: on(m) });
    });
    Ok(())
}

/// Emits `I_xy` through `BraidCnot`, which applies `CNOT(a -> 2k-1)` and
/// `CNOT(2k -> b)` together. The CNOT not in use is neutralised first: `b`
/// goes to `|+>` (an invariant target) or `a` to `|0>` (an idle control).
///
/// With control `x` and target `y` the gadget is `PrepZ(y); CNOT;
/// MeasX(x -> m); Z(y) if m`; with control `y` and target `x` it is
/// `PrepX(y); CNOT; MeasZ(x -> m); X(y) if m`.
pub fn i_gadget(pb: &mut ProgramBuilder, x: usize, y: usize) -> Result<(), CompileError> {
    let reg = *pb.register();
    let (a, b) = (reg.a(), reg.b());
    let no_route = || CompileError::NoRoute { gadget: "I", from: reg.name(x), to: reg.name(y) };
    // (pair, control, target) of the CNOT in use
    let (pair, control, target) = if y == a || x == a {
        let d = if y == a { x } else { y };
        match reg.pair_of(d) {
            Some(k) if d % 2 == 0 => (k, a, d),
            _ => return Err(no_route()),
        }
    } else if y == b || x == b {
        let d = if y == b { x } else { y };
        match reg.pair_of(d) {
            Some(k) if d % 2 == 1 => (k, d, b),
            _ => return Err(no_route()),
        }
    } else {
        return Err(no_route());
    };
    pb.gadget(GadgetKind::I, x, y, |pb| {
        if control == a {
            pb.push(Instruction::PrepX { qubit: b });
        } else {
            pb.zero(a);
        }
        if control == x {
            pb.push(Instruction::PrepZ { qubit: y });
            pb.push(Instruction::BraidCnot { pair });
            let m = pb.measure_x(x);
            pb.push(Instruction::PauliZ { qubit: y, cond: on(m) });
        } else {
            debug_assert_eq!(target, x);
            pb.push(Instruction::PrepX { qubit: y });
            pb.push(Instruction::BraidCnot { pair });
            let m = pb.measure_z(x);
            pb.push(Instruction::PauliX { qubit: y, cond: on(m) });
        }
    });
    Ok(())
}

fn emit_h(pb: &mut ProgramBuilder, q: usize) -> Result<(), CompileError> {
    let reg = *pb.register();
    let (t, a, b) = (reg.threaded(), reg.a(), reg.b());
    // operator products, applied right to left
    let seq: Vec<(GadgetKind, usize, usize)> = if q == t {
        // H_{b,N} H_{a,b} H_{N,a}
        vec![(GadgetKind::H, t, a), (GadgetKind::H, a, b), (GadgetKind::H, b, t)]
    } else if q.is_multiple_of(2) {
        // H_{a,N} H_{N,q} H_{b,N} H_{N,a} H_{a,b} I_{q,a}
        vec![
            (GadgetKind::I, q, a),
            (GadgetKind::H, a, b),
            (GadgetKind::H, t, a),
            (GadgetKind::H, b, t),
            (GadgetKind::H, t, q),
            (GadgetKind::H, a, t),
        ]
    } else {
        // H_{a,N} H_{N,q} H_{b,N} H_{N,b} H_{b,a} I_{q,b}
        vec![
            (GadgetKind::I, q, b),
            (GadgetKind::H, b, a),
            (GadgetKind::H, t, b),
            (GadgetKind::H, a, t),
            (GadgetKind::H, t, q),
            (GadgetKind::H, b, t),
        ]
    };
    for (kind, x, y) in seq {
        match kind {
            GadgetKind::H => h_gadget(pb, x, y)?,
            GadgetKind::I => i_gadget(pb, x, y)?,
        }
    }
    Ok(())
}

fn emit_swap_n(pb: &mut ProgramBuilder, x: usize) -> Result<(), CompileError> {
    let t = pb.register().threaded();
    // H_N CZ H_N . H_x CZ H_x . H_N CZ H_N
    for h in [t, x, t] {
        emit_h(pb, h)?;
        pb.push(Instruction::Cz { other: x });
        emit_h(pb, h)?;
    }
    Ok(())
}

fn emit_swap(pb: &mut ProgramBuilder, x: usize, y: usize) -> Result<(), CompileError> {
    let t = pb.register().threaded();
    match (x == t, y == t) {
        (true, _) => emit_swap_n(pb, y),
        (_, true) => emit_swap_n(pb, x),
        _ => {
            emit_swap_n(pb, x)?;
            emit_swap_n(pb, y)?;
            emit_swap_n(pb, x)
        }
    }
}

/// CCZ on pair `k` (1-based) and qubit `N`. With other pairs present, pair
/// `k`'s first qubit is parked on `a` while a transversal CCZ acts on the
/// rest, then restored before a second one; the other pairs see CCZ twice.
fn emit_ccz_aligned(pb: &mut ProgramBuilder, k: usize) -> Result<(), CompileError> {
    let reg = *pb.register();
    let (a, b) = (reg.a(), reg.b());
    if reg.num_pairs() == 1 {
        pb.zero(b);
        pb.push(Instruction::GlobalCcz);
        return Ok(());
    }
    let first = 2 * k - 2;
    i_gadget(pb, first, a)?;
    pb.push(Instruction::PrepZ { qubit: first });
    pb.zero(b);
    pb.push(Instruction::GlobalCcz);
    i_gadget(pb, a, first)?;
    pb.zero(b);
    pb.push(Instruction::GlobalCcz);
    Ok(())
}

fn aligned_pair(reg: &Register, s: &[usize; 3]) -> Option<usize> {
    let t = reg.threaded();
    let mut v = s.to_vec();
    v.sort_unstable();
    (v[2] == t && v[0].is_multiple_of(2) && v[1] == v[0] + 1).then(|| v[0] / 2 + 1)
}

fn partner(q: usize) -> usize {
    q ^ 1
}

/// `H` on data qubit `q` (1-based).
pub fn compile_h(reg: &Register, q: usize) -> Result<Program, CompileError> {
    let mut pb = ProgramBuilder::new(*reg);
    let p = reg.parse(&q.to_string())?;
    emit_h(&mut pb, p)?;
    Ok(pb.finish())
}

/// `SWAP` of data qubit `x` with qubit `N`.
pub fn compile_swap(reg: &Register, x: usize) -> Result<Program, CompileError> {
    let p = reg.parse(&x.to_string())?;
    if p == reg.threaded() {
        return Err(CompileError::BadGate(format!("SWAP partner must differ from {}", reg.n())));
    }
    let mut pb = ProgramBuilder::new(*reg);
    emit_swap_n(&mut pb, p)?;
    Ok(pb.finish())
}

/// `CCZ` on three distinct data qubits (1-based).
pub fn compile_ccz(reg: &Register, x: usize, y: usize, z: usize) -> Result<Program, CompileError> {
    let s = [reg.parse(&x.to_string())?, reg.parse(&y.to_string())?, reg.parse(&z.to_string())?];
    if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
        return Err(CompileError::BadGate(format!("CCZ needs distinct qubits, got {x},{y},{z}")));
    }
    let t = reg.threaded();
    // transpositions that bring the triple onto a pair plus N
    let mut swaps = Vec::new();
    let mut pos = s;
    if !pos.contains(&t) {
        swaps.push((pos[2], t));
        pos[2] = t;
    }
    if aligned_pair(reg, &pos).is_none() {
        let others: Vec<usize> = pos.iter().copied().filter(|&p| p != t).collect();
        let (u, v) = (others[0], others[1]);
        let w = partner(u);
        swaps.push((v, w));
        for p in pos.iter_mut() {
            if *p == v {
                *p = w;
            }
        }
    }
    let k = aligned_pair(reg, &pos).expect("triple aligned after swaps");
    let mut pb = ProgramBuilder::new(*reg);
    for &(p, q) in &swaps {
        emit_swap(&mut pb, p, q)?;
    }
    emit_ccz_aligned(&mut pb, k)?;
    for &(p, q) in swaps.iter().rev() {
        emit_swap(&mut pb, p, q)?;
    }
    Ok(pb.finish())
}

/// Gate request as written on the command line: `h:3`, `ccz:1,2,5`,
/// `swap:1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateSpec {
    H(usize),
    Ccz(usize, usize, usize),
    /// SWAP with qubit `N`.
    Swap(usize),
}

impl FromStr for GateSpec {
    type Err = CompileError;

    fn from_str(s: &str) -> Result<Self, CompileError> {
        let bad = || CompileError::BadGate(format!("bad gate {s:?}; expected h:q, ccz:x,y,z or swap:x"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums =
            args.split(',').map(|a| a.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
        match (kind.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("h", [q]) => Ok(GateSpec::H(*q)),
            ("ccz", [x, y, z]) => Ok(GateSpec::Ccz(*x, *y, *z)),
            ("swap", [x]) => Ok(GateSpec::Swap(*x)),
            _ => Err(bad()),
        }
    }
}

impl GateSpec {
    pub fn target(&self, reg: &Register) -> Target {
        match *self {
            GateSpec::H(q) => Target::gate(Gate::H(q)),
            GateSpec::Ccz(x, y, z) => Target::gate(Gate::Ccz(x, y, z)),
            GateSpec::Swap(x) => Target::gate(Gate::Swap(x, reg.n())),
        }
    }
}

pub fn compile_gate(reg: &Register, spec: &GateSpec) -> Result<Program, CompileError> {
    match *spec {
        GateSpec::H(q) => compile_h(reg, q),
        GateSpec::Ccz(x, y, z) => compile_ccz(reg, x, y, z),
        GateSpec::Swap(x) => compile_swap(reg, x),
    }
}
