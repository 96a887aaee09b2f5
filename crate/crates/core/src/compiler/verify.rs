//! Exhaustive branch verification.
//!
//! [`verify`] walks the program once, splitting the simulated map at every
//! measurement and merging branches whose maps agree up to phase and whose
//! still-needed classical bits agree: such branches have identical futures,
//! so checking one checks all of them, and their number is carried along
//! exactly. [`verify_naive`] replays the program separately for every
//! outcome string and serves as the oracle for the merged walk.

use super::sim::{Operator, Step, TOL};
use super::{CompileError, Instruction, Program, Register, ResourceCount};
use num_bigint::BigUint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;

pub const DEFAULT_QUBIT_CAP: usize = 12;

/// A gate on data qubits, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "gate", content = "qubits", rename_all = "snake_case")]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
    Ccz(usize, usize, usize),
    Swap(usize, usize),
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H{q}"),
            Gate::X(q) => write!(f, "X{q}"),
            Gate::Z(q) => write!(f, "Z{q}"),
            Gate::Cz(a, b) => write!(f, "CZ{a},{b}"),
            Gate::Cnot(a, b) => write!(f, "CNOT{a},{b}"),
            Gate::Ccz(a, b, c) => write!(f, "CCZ{a},{b},{c}"),
            Gate::Swap(a, b) => write!(f, "SWAP{a},{b}"),
        }
    }
}

/// The intended action: `gates` in time order on the data qubits, with data
/// qubit `q` ending on physical qubit `layout[q - 1]` and every other qubit
/// in `|0>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Target {
    pub gates: Vec<Gate>,
    pub layout: Option<Vec<usize>>,
}

impl Target {
    pub fn identity() -> Self {
        Target { gates: vec![], layout: None }
    }

    pub fn gate(g: Gate) -> Self {
        Target { gates: vec![g], layout: None }
    }

    pub fn gates(gates: Vec<Gate>) -> Self {
        Target { gates, layout: None }
    }

    pub fn with_layout(mut self, layout: Vec<usize>) -> Self {
        self.layout = Some(layout);
        self
    }

    /// The target as a map from data-qubit inputs to the full register.
    pub fn expected(&self, reg: &Register) -> Result<Operator, CompileError> {
        let n = reg.n();
        let mut u = Operator::embedding(n, n);
        let q = |x: usize| {
            if (1..=n).contains(&x) {
                Ok(x - 1)
            } else {
                Err(CompileError::BadGate(format!("target names data qubit {x}, register has {n}")))
            }
        };
        for g in &self.gates {
            match *g {
                Gate::H(a) => u.h(q(a)?),
                Gate::X(a) => u.x(q(a)?),
                Gate::Z(a) => u.z(q(a)?),
                Gate::Cz(a, b) => u.cz(q(a)?, q(b)?),
                Gate::Cnot(a, b) => u.cnot(q(a)?, q(b)?),
                Gate::Ccz(a, b, c) => u.ccz(q(a)?, q(b)?, q(c)?),
                Gate::Swap(a, b) => {
                    let (a, b) = (q(a)?, q(b)?);
                    u.cnot(a, b);
                    u.cnot(b, a);
                    u.cnot(a, b);
                }
            }
        }
        let layout: Vec<usize> = self.layout.clone().unwrap_or_else(|| (0..n).collect());
        if layout.len() != n || layout.iter().any(|&p| p >= reg.num_qubits()) {
            return Err(CompileError::BadGate("layout must place every data qubit on a register qubit".into()));
        }
        let rows = 1usize << reg.num_qubits();
        let columns = (0..1usize << n)
            .map(|j| {
                let mut col = vec![Complex64::new(0.0, 0.0); rows];
                for (k, &amp) in u.column(j).iter().enumerate() {
                    let pos = (0..n).filter(|&b| k >> b & 1 == 1).fold(0, |acc, b| acc | 1 << layout[b]);
                    col[pos] += amp;
                }
                col
            })
            .collect();
        Ok(Operator::from_columns(reg.num_qubits(), columns))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest register (data plus ancillas) that will be simulated.
    pub qubit_cap: usize,
    /// Individual outcome strings are listed when there are at most this
    /// many branches.
    pub list_branches_up_to: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { qubit_cap: DEFAULT_QUBIT_CAP, list_branches_up_to: 1 << 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Outcome string with probability zero for every input.
    Unreachable,
}

fn big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Branches sharing one final map.
#[derive(Clone, Debug, Serialize)]
pub struct BranchClass {
    /// Lexicographically first outcome string (`1` for the −1 outcome).
    pub representative: String,
    #[serde(serialize_with = "big")]
    pub count: BigUint,
    pub verdict: Verdict,
    pub failing_input: Option<String>,
    pub reason: Option<String>,
    pub branches: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub n: usize,
    pub target: Target,
    pub measurements: usize,
    #[serde(serialize_with = "big")]
    pub total_branches: BigUint,
    #[serde(serialize_with = "big")]
    pub passed: BigUint,
    #[serde(serialize_with = "big")]
    pub failed: BigUint,
    #[serde(serialize_with = "big")]
    pub unreachable: BigUint,
    pub classes: Vec<BranchClass>,
    pub resources: ResourceCount,
}

impl BranchReport {
    /// No branch fails (unreachable branches are vacuous passes).
    pub fn all_pass(&self) -> bool {
        self.failed == BigUint::default()
    }

    /// Sorted outcome strings of failing branches, when they were listed.
    pub fn failing_branches(&self) -> Option<Vec<String>> {
        let mut out = Vec::new();
        for c in self.classes.iter().filter(|c| c.verdict == Verdict::Fail) {
            out.extend(c.branches.clone()?);
        }
        out.sort();
        Some(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Spanning inputs: every basis state, and every basis state with one qubit
/// replaced by `|+>`.
fn inputs(n: usize) -> Vec<(String, Vec<Complex64>)> {
    let dim = 1usize << n;
    let basis = |j: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[j] = Complex64::new(1.0, 0.0);
        v
    };
    let label = |j: usize, plus: Option<usize>| {
        let s: String = (0..n)
            .map(|q| {
                if Some(q) == plus {
                    '+'
                } else if j >> q & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        format!("|{s}>")
    };
    let mut out: Vec<_> = (0..dim).map(|j| (label(j, None), basis(j))).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for q in 0..n {
        for j in (0..dim).filter(|j| j >> q & 1 == 0) {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[j] = Complex64::new(s, 0.0);
            v[j | 1 << q] = Complex64::new(s, 0.0);
            out.push((label(j, Some(q)), v));
        }
    }
    out
}

/// Compares a final map with the target, up to one global scalar.
fn judge(op: &Operator, expected: &Operator, reg: &Register) -> (Verdict, Option<String>, Option<String>) {
    if op.is_zero() {
        return (Verdict::Unreachable, None, None);
    }
    let mut num = Complex64::new(0.0, 0.0);
    for j in 0..op.cols() {
        for (e, m) in expected.column(j).iter().zip(op.column(j)) {
            num += e.conj() * m;
        }
    }
    let c = num / expected.norm_sqr();
    let scale = op.norm_sqr().sqrt();
    if c.norm() < 1e-6 * scale {
        return (Verdict::Fail, Some(inputs(reg.n())[0].0.clone()), Some("no overlap with the target".into()));
    }
    for (label, v) in inputs(reg.n()) {
        let got = op.apply_to(&v);
        let want = expected.apply_to(&v);
        let err: f64 = got.iter().zip(&want).map(|(g, w)| (g - c * w).norm_sqr()).sum::<f64>().sqrt();
        if err > 1e3 * TOL * scale {
            let stray = (0..reg.num_qubits())
                .filter(|&q| {
                    got.iter()
                        .enumerate()
                        .any(|(i, z)| i >> q & 1 == 1 && want[i].norm() < TOL && z.norm() > 1e-6 * scale)
                })
                .map(|q| reg.name(q))
                .collect::<Vec<_>>();
            let reason = if stray.is_empty() {
                "output differs from the target".to_string()
            } else {
                format!("output differs from the target; unexpected population on {}", stray.join(", "))
            };
            return (Verdict::Fail, Some(label), Some(reason));
        }
    }
    (Verdict::Pass, None, None)
}

fn check_cap(reg: &Register, opts: &VerifyOptions) -> Result<(), CompileError> {
    if reg.num_qubits() > opts.qubit_cap {
        return Err(CompileError::CapExceeded { qubits: reg.num_qubits(), cap: opts.qubit_cap });
    }
    Ok(())
}

/// Runs one instruction on one branch. Measurements are handled by the
/// callers since they fork.
fn step(
    op: &mut Operator,
    reg: &Register,
    ins: &Instruction,
    bits: &[Option<bool>],
    index: usize,
) -> Result<(), CompileError> {
    match *ins {
        Instruction::PrepZ { qubit } | Instruction::PrepX { qubit } => {
            if let Step::Entangled = op.reset(qubit, matches!(ins, Instruction::PrepX { .. })) {
                return Err(CompileError::PrepOnEntangled { index, qubit: reg.name(qubit) });
            }
        }
        Instruction::PauliX { cond: Some(c), .. } | Instruction::PauliZ { cond: Some(c), .. } => {
            if bits[c.bit] == Some(c.value) {
                op.apply_unitary(reg, ins);
            }
        }
        Instruction::MeasX { .. } | Instruction::MeasZ { .. } => unreachable!("measurements fork"),
        _ => op.apply_unitary(reg, ins),
    }
    Ok(())
}

/// Projects onto the outcome; an outcome of negligible weight relative to
/// the incoming branch becomes exactly zero.
fn measure(op: &mut Operator, ins: &Instruction, outcome: bool) {
    let before = op.norm_sqr();
    match *ins {
        Instruction::MeasX { qubit, .. } => op.project_x(qubit, outcome),
        Instruction::MeasZ { qubit, .. } => op.project_z(qubit, outcome),
        _ => unreachable!(),
    }
    if op.norm_sqr() < TOL * TOL * before {
        op.clear();
    }
}

struct Node {
    op: Operator,
    bits: Vec<Option<bool>>,
    count: BigUint,
    rep: String,
    members: Option<Vec<String>>,
}

fn absorb(into: &mut Node, from: Node) {
    into.count += from.count;
    if from.rep < into.rep {
        into.rep = from.rep;
    }
    if let (Some(a), Some(b)) = (&mut into.members, from.members) {
        a.extend(b);
    }
}

fn finish(program: &Program, target: &Target, expected: &Operator, finals: Vec<Node>, dead: Vec<Node>) -> BranchReport {
    let reg = program.register();
    let mut classes: Vec<BranchClass> = finals
        .into_par_iter()
        .map(|node| {
            let (verdict, failing_input, reason) = judge(&node.op, expected, reg);
            BranchClass {
                representative: node.rep,
                count: node.count,
                verdict,
                failing_input,
                reason,
                branches: node.members,
            }
        })
        .collect();
    classes.extend(dead.into_iter().map(|node| BranchClass {
        representative: node.rep,
        count: node.count,
        verdict: Verdict::Unreachable,
        failing_input: None,
        reason: None,
        branches: node.members,
    }));
    for c in &mut classes {
        if let Some(b) = &mut c.branches {
            b.sort();
        }
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    let sum = |v: Verdict| classes.iter().filter(|c| c.verdict == v).map(|c| c.count.clone()).sum::<BigUint>();
    let m = program.num_measurements();
    BranchReport {
        n: reg.n(),
        target: target.clone(),
        measurements: m,
        total_branches: BigUint::from(1u8) << m,
        passed: sum(Verdict::Pass),
        failed: sum(Verdict::Fail),
        unreachable: sum(Verdict::Unreachable),
        classes,
        resources: program.resource_count(),
    }
}

/// Verifies `program` against `target` over every measurement outcome.
pub fn verify(program: &Program, target: &Target, opts: &VerifyOptions) -> Result<BranchReport, CompileError> {
    let reg = *program.register();
    check_cap(&reg, opts)?;
    let expected = target.expected(&reg)?;
    let ins = program.instructions();
    let nbits = program.bit_names().len();
    // a bit is forgotten once no later instruction reads it
    let mut last_read = vec![None; nbits];
    for (i, x) in ins.iter().enumerate() {
        if let Some(c) = x.condition() {
            last_read[c.bit] = Some(i);
        }
    }
    let list = program.num_measurements() < usize::BITS as usize
        && (1usize << program.num_measurements()) <= opts.list_branches_up_to;
    let mut start = Operator::embedding(reg.num_qubits(), reg.n());
    start.canonicalise();
    let mut nodes = vec![Node {
        op: start,
        bits: vec![None; nbits],
        count: BigUint::from(1u8),
        rep: String::new(),
        members: list.then(|| vec![String::new()]),
    }];
    let mut dead: Vec<Node> = Vec::new();
    for (index, x) in ins.iter().enumerate() {
        let mut next: Vec<Node> = Vec::with_capacity(nodes.len() * 2);
        for mut node in nodes {
            if let Some(bit) = x.measured_bit() {
                for outcome in [false, true] {
                    let mut op = node.op.clone();
                    measure(&mut op, x, outcome);
                    let ch = if outcome { '1' } else { '0' };
                    let mut bits = node.bits.clone();
                    bits[bit] = Some(outcome);
                    let child = Node {
                        op,
                        bits,
                        count: node.count.clone(),
                        rep: format!("{}{ch}", node.rep),
                        members: node.members.as_ref().map(|ms| ms.iter().map(|s| format!("{s}{ch}")).collect()),
                    };
                    next.push(child);
                }
            } else {
                step(&mut node.op, &reg, x, &node.bits, index)?;
                next.push(node);
            }
        }
        let mut merged: Vec<Node> = Vec::with_capacity(next.len());
        for mut node in next {
            if node.op.is_zero() {
                // pad unreachable strings to full length at the end
                dead.push(node);
                continue;
            }
            for (b, v) in node.bits.iter_mut().enumerate() {
                if last_read[b].is_none_or(|l| l <= index) {
                    *v = None;
                }
            }
            node.op.canonicalise();
            match merged.iter_mut().find(|m| m.bits == node.bits && m.op.approx_eq(&node.op)) {
                Some(m) => absorb(m, node),
                None => merged.push(node),
            }
        }
        nodes = merged;
    }
    // an unreachable prefix stands for every completion of it
    let m = program.num_measurements();
    let dead = dead
        .into_iter()
        .map(|mut d| {
            let free = m - d.rep.len();
            d.count <<= free;
            d.rep.push_str(&"0".repeat(free));
            d.members = d.members.map(|ms| {
                ms.iter().flat_map(|s| (0..1usize << free).map(move |t| format!("{s}{}", suffix(t, free)))).collect()
            });
            d
        })
        .collect();
    Ok(finish(program, target, &expected, nodes, dead))
}

fn suffix(t: usize, len: usize) -> String {
    (0..len).map(|i| if t >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Replays the program once per outcome string. Refuses more than
/// `max_measurements` measurements.
pub fn verify_naive(
    program: &Program,
    target: &Target,
    opts: &VerifyOptions,
    max_measurements: usize,
) -> Result<BranchReport, CompileError> {
    let reg = *program.register();
    check_cap(&reg, opts)?;
    let m = program.num_measurements();
    if m > max_measurements || m >= usize::BITS as usize {
        return Err(CompileError::BadGate(format!("{m} measurements is too many for naive enumeration")));
    }
    let expected = target.expected(&reg)?;
    let nbits = program.bit_names().len();
    let run = |outcomes: usize| -> Result<Node, CompileError> {
        let mut op = Operator::embedding(reg.num_qubits(), reg.n());
        let mut bits = vec![None; nbits];
        let mut k = 0;
        for (index, x) in program.instructions().iter().enumerate() {
            if let Some(bit) = x.measured_bit() {
                let outcome = outcomes >> (m - 1 - k) & 1 == 1;
                k += 1;
                measure(&mut op, x, outcome);
                bits[bit] = Some(outcome);
            } else {
                step(&mut op, &reg, x, &bits, index)?;
            }
        }
        let rep = suffix(outcomes, m);
        Ok(Node { op, bits, count: BigUint::from(1u8), members: Some(vec![rep.clone()]), rep })
    };
    let nodes = (0..1usize << m).into_par_iter().map(run).collect::<Result<Vec<_>, _>>()?;
    Ok(finish(program, target, &expected, nodes, Vec::new()))
}
