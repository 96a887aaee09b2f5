//! Line-oriented program listing.
//!
//! ```text
//! register 3
//! begin h 3 a
//! prep_x a
//! cz a
//! meas_x 3 -> m0
//! x a if m0
//! end
//! ```
//!
//! `if !m0` fires on the +1 outcome. `#` starts a comment.

use super::{CompileError, Condition, GadgetKind, GadgetSpan, Instruction, Program, Register};
use std::collections::HashMap;
use std::fmt::Write;

impl Program {
    pub fn to_text(&self) -> String {
        let reg = &self.register;
        let q = |i: usize| reg.name(i);
        let cond = |c: &Option<Condition>| match c {
            None => String::new(),
            Some(c) if c.value => format!(" if {}", self.bit_names[c.bit]),
            Some(c) => format!(" if !{}", self.bit_names[c.bit]),
        };
        let mut out = format!("register {}\n", reg.n());
        for (i, ins) in self.instructions.iter().enumerate() {
            for g in self.gadgets.iter().filter(|g| g.start == i) {
                let k = match g.kind {
                    GadgetKind::H => "h",
                    GadgetKind::I => "i",
                };
                let _ = writeln!(out, "begin {k} {} {}", q(g.from), q(g.to));
            }
            let line = match ins {
                Instruction::PrepZ { qubit } => format!("prep_z {}", q(*qubit)),
                Instruction::PrepX { qubit } => format!("prep_x {}", q(*qubit)),
                Instruction::MeasX { qubit, bit } => format!("meas_x {} -> {}", q(*qubit), self.bit_names[*bit]),
                Instruction::MeasZ { qubit, bit } => format!("meas_z {} -> {}", q(*qubit), self.bit_names[*bit]),
                Instruction::PauliX { qubit, cond: c } => format!("x {}{}", q(*qubit), cond(c)),
                Instruction::PauliZ { qubit, cond: c } => format!("z {}{}", q(*qubit), cond(c)),
                Instruction::Cz { other } => format!("cz {}", q(*other)),
                Instruction::GlobalCz12 => "global_cz12".into(),
                Instruction::GlobalCcz => "global_ccz".into(),
                Instruction::BraidCnot { pair } => format!("braid_cnot {pair}"),
            };
            out.push_str(&line);
            out.push('\n');
            for _ in self.gadgets.iter().filter(|g| g.end == i + 1) {
                out.push_str("end\n");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Program, CompileError> {
        let mut reg: Option<Register> = None;
        let mut instructions = Vec::new();
        let mut bits: Vec<String> = Vec::new();
        let mut bit_index: HashMap<String, usize> = HashMap::new();
        let mut open: Vec<(GadgetKind, usize, usize, usize)> = Vec::new();
        let mut gadgets = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let perr = |message: String| CompileError::Parse { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            if words[0] == "register" {
                if reg.is_some() || words.len() != 2 {
                    return Err(perr("expected a single `register N` line".into()));
                }
                let n = words[1].parse().map_err(|_| perr(format!("bad register size {:?}", words[1])))?;
                reg = Some(Register::new(n).map_err(|e| perr(e.to_string()))?);
                continue;
            }
            let r = reg.ok_or_else(|| perr("`register N` must come first".into()))?;
            let qubit = |s: &str| r.parse(s).map_err(|e| perr(e.to_string()));
            let arity = |n: usize| {
                if words.len() == n {
                    Ok(())
                } else {
                    Err(perr(format!("`{}` takes {} argument(s)", words[0], n - 1)))
                }
            };
            let ins = match words[0] {
                "begin" => {
                    arity(4)?;
                    let kind = match words[1] {
                        "h" => GadgetKind::H,
                        "i" => GadgetKind::I,
                        k => return Err(perr(format!("unknown gadget {k:?}"))),
                    };
                    open.push((kind, qubit(words[2])?, qubit(words[3])?, instructions.len()));
                    continue;
                }
                "end" => {
                    arity(1)?;
                    let (kind, from, to, start) = open.pop().ok_or_else(|| perr("`end` without `begin`".into()))?;
                    gadgets.push(GadgetSpan { kind, from, to, start, end: instructions.len() });
                    continue;
                }
                "prep_z" => {
                    arity(2)?;
                    Instruction::PrepZ { qubit: qubit(words[1])? }
                }
                "prep_x" => {
                    arity(2)?;
                    Instruction::PrepX { qubit: qubit(words[1])? }
                }
                "meas_x" | "meas_z" => {
                    if words.len() != 4 || words[2] != "->" {
                        return Err(perr(format!("expected `{} <qubit> -> <bit>`", words[0])));
                    }
                    let name = words[3].to_string();
                    if bit_index.contains_key(&name) {
                        return Err(perr(format!("bit {name} measured twice")));
                    }
                    let bit = bits.len();
                    bit_index.insert(name.clone(), bit);
                    bits.push(name);
                    let q = qubit(words[1])?;
                    if words[0] == "meas_x" {
                        Instruction::MeasX { qubit: q, bit }
                    } else {
                        Instruction::MeasZ { qubit: q, bit }
                    }
                }
                "x" | "z" => {
                    let cond = match words.len() {
                        2 => None,
                        4 if words[2] == "if" => {
                            let (name, value) = match words[3].strip_prefix('!') {
                                Some(n) => (n, false),
                                None => (words[3], true),
                            };
                            let bit = *bit_index
                                .get(name)
                                .ok_or_else(|| perr(format!("bit {name} is read before it is measured")))?;
                            Some(Condition { bit, value })
                        }
                        _ => return Err(perr(format!("expected `{} <qubit> [if [!]<bit>]`", words[0]))),
                    };
                    let q = qubit(words[1])?;
                    if words[0] == "x" {
                        Instruction::PauliX { qubit: q, cond }
                    } else {
                        Instruction::PauliZ { qubit: q, cond }
                    }
                }
                "cz" => {
                    arity(2)?;
                    Instruction::Cz { other: qubit(words[1])? }
                }
                "global_cz12" => {
                    arity(1)?;
                    Instruction::GlobalCz12
                }
                "global_ccz" => {
                    arity(1)?;
                    Instruction::GlobalCcz
                }
                "braid_cnot" => {
                    arity(2)?;
                    let pair = words[1].parse().map_err(|_| perr(format!("bad pair index {:?}", words[1])))?;
                    Instruction::BraidCnot { pair }
                }
                w => return Err(perr(format!("unknown instruction {w:?}"))),
            };
            if let Err(m) = ins.validate(&r) {
                return Err(perr(m));
            }
            instructions.push(ins);
        }
        if !open.is_empty() {
            return Err(CompileError::Parse { line: text.lines().count(), message: "unterminated `begin`".into() });
        }
        let reg = reg.ok_or(CompileError::Parse { line: 1, message: "missing `register N`".into() })?;
        gadgets.sort_by_key(|g: &GadgetSpan| g.start);
        Program::from_parts(reg, instructions, bits, gadgets)
    }
}
