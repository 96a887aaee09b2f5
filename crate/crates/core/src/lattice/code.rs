//! Generic stabiliser codes: validation, logical-basis extraction and
//! brute-force distance.
//!
//! For CSS codes the first member of every logical pair is Z-type and the
//! second X-type, the convention under which rough boundaries terminate the
//! first operator as a Z-string.

use crate::gf2::{nullspace, BitVec, Echelon};
use crate::pauli::{Pauli, PauliOperator};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("inconsistent code: {0}")]
    Inconsistent(Violation),
    #[error("no logical operator of weight <= {searched}")]
    NotFound { searched: usize },
    #[error("search up to weight {max_weight} needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { max_weight: usize, needed: u128, budget: u128 },
    #[error("cannot parse code text at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabiliserCode {
    n: usize,
    generators: Vec<PauliOperator>,
    logical_pairs: Vec<(PauliOperator, PauliOperator)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    SizeMismatch { generator: usize },
    NotHermitian { generator: usize },
    Identity { generator: usize },
    Anticommuting { first: usize, second: usize },
    ContainsMinusIdentity { generators: Vec<usize> },
    LogicalSize { pair: usize },
    LogicalNotHermitian { pair: usize },
    LogicalOutsideCentraliser { pair: usize, member: char, generator: usize },
    LogicalPairing { first: usize, second: usize },
    LogicalCount { expected: usize, found: usize },
    LogicalDependent,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SizeMismatch { generator } => write!(f, "generator {generator} has the wrong size"),
            Violation::NotHermitian { generator } => write!(f, "generator {generator} is not Hermitian"),
            Violation::Identity { generator } => write!(f, "generator {generator} is the identity"),
            Violation::Anticommuting { first, second } => {
                write!(f, "generators {first} and {second} anticommute")
            }
            Violation::ContainsMinusIdentity { generators } => {
                write!(f, "group contains -I (product of generators {generators:?})")
            }
            Violation::LogicalSize { pair } => write!(f, "logical pair {pair} has the wrong size"),
            Violation::LogicalNotHermitian { pair } => write!(f, "logical pair {pair} is not Hermitian"),
            Violation::LogicalOutsideCentraliser { pair, member, generator } => {
                write!(f, "logical {member}{pair} anticommutes with generator {generator}")
            }
            Violation::LogicalPairing { first, second } => {
                write!(f, "logical operators {first} and {second} violate the pairing relations")
            }
            Violation::LogicalCount { expected, found } => {
                write!(f, "code encodes {expected} qubits but {found} logical pairs are given")
            }
            Violation::LogicalDependent => write!(f, "logical operators are not independent of the stabiliser group"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub n: usize,
    pub k: usize,
    pub violation: Option<Violation>,
}

impl StabiliserCode {
    /// Builds the code and extracts a logical basis.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self, CodeError> {
        let mut code = StabiliserCode { n, generators, logical_pairs: vec![] };
        code.logical_pairs = extract_logicals(&code)?;
        Ok(code)
    }

    /// Uses the given logical pairs, checking every invariant.
    pub fn with_logicals(
        n: usize,
        generators: Vec<PauliOperator>,
        logical_pairs: Vec<(PauliOperator, PauliOperator)>,
    ) -> Result<Self, CodeError> {
        let code = StabiliserCode { n, generators, logical_pairs };
        match validate(&code).violation {
            None => Ok(code),
            Some(v) => Err(CodeError::Inconsistent(v)),
        }
    }

    /// No checks at all; for deliberately broken codes in tests and tools.
    pub fn from_parts_unchecked(
        n: usize,
        generators: Vec<PauliOperator>,
        logical_pairs: Vec<(PauliOperator, PauliOperator)>,
    ) -> Self {
        StabiliserCode { n, generators, logical_pairs }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_pairs(&self) -> &[(PauliOperator, PauliOperator)] {
        &self.logical_pairs
    }

    pub fn rank(&self) -> usize {
        group_echelon(self.n, &self.generators).rank()
    }

    /// `n - rank(generators)`.
    pub fn num_logical(&self) -> usize {
        self.n - self.rank()
    }

    pub fn is_css(&self) -> bool {
        self.generators.iter().all(|g| g.is_x_type() || g.is_z_type())
    }

    /// Membership in the stabiliser group up to sign.
    pub fn in_group_up_to_sign(&self, p: &PauliOperator) -> bool {
        group_echelon(self.n, &self.generators).contains(&p.symplectic())
    }

    /// One Pauli string per line, generators first, then `# logical` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        for (x, z) in &self.logical_pairs {
            s.push_str(&format!("# logical {x} {z}\n"));
        }
        s
    }

    /// Reads the generator list written by [`StabiliserCode::to_text`] and
    /// re-extracts logicals.
    pub fn from_text(text: &str) -> Result<Self, CodeError> {
        let mut gens = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let p: PauliOperator = t
                .parse()
                .map_err(|e: crate::pauli::PauliError| CodeError::Parse { line: i + 1, message: e.to_string() })?;
            if let Some(first) = gens.first().map(|g: &PauliOperator| g.num_qubits()) {
                if first != p.num_qubits() {
                    return Err(CodeError::Parse { line: i + 1, message: "length differs from earlier lines".into() });
                }
            }
            gens.push(p);
        }
        let n = gens.first().map(|g| g.num_qubits()).unwrap_or(0);
        StabiliserCode::new(n, gens)
    }
}

pub(crate) fn group_echelon(n: usize, generators: &[PauliOperator]) -> Echelon {
    let mut e = Echelon::new(2 * n, generators.len());
    for g in generators {
        let _ = e.insert(&g.symplectic());
    }
    e
}

fn product_of(n: usize, generators: &[PauliOperator], combo: &BitVec) -> PauliOperator {
    let mut acc = PauliOperator::identity(n);
    for i in combo.ones() {
        acc = acc.product(&generators[i]);
    }
    acc
}

fn check_generators(code: &StabiliserCode) -> Option<Violation> {
    let n = code.n;
    for (i, g) in code.generators.iter().enumerate() {
        if g.num_qubits() != n {
            return Some(Violation::SizeMismatch { generator: i });
        }
        if !g.is_hermitian() {
            return Some(Violation::NotHermitian { generator: i });
        }
        if g.is_trivial() {
            return Some(Violation::Identity { generator: i });
        }
    }
    for i in 0..code.generators.len() {
        for j in i + 1..code.generators.len() {
            if !code.generators[i].commutes_with(&code.generators[j]) {
                return Some(Violation::Anticommuting { first: i, second: j });
            }
        }
    }
    // a dependency whose product is -I; the sign is multiplicative over
    // dependencies, so checking each one found by elimination suffices
    let mut e = Echelon::new(2 * n, code.generators.len());
    for g in &code.generators {
        if let Err(combo) = e.insert(&g.symplectic()) {
            if product_of(n, &code.generators, &combo).phase() != 0 {
                return Some(Violation::ContainsMinusIdentity { generators: combo.ones().collect() });
            }
        }
    }
    None
}

pub fn validate(code: &StabiliserCode) -> ValidationReport {
    let mut report = ValidationReport { valid: false, n: code.n, k: 0, violation: check_generators(code) };
    if report.violation.is_some() {
        return report;
    }
    let e = group_echelon(code.n, &code.generators);
    report.k = code.n - e.rank();
    report.violation = check_logicals(code, report.k);
    report.valid = report.violation.is_none();
    report
}

fn check_logicals(code: &StabiliserCode, k: usize) -> Option<Violation> {
    let pairs = &code.logical_pairs;
    if pairs.len() != k {
        return Some(Violation::LogicalCount { expected: k, found: pairs.len() });
    }
    for (i, (x, z)) in pairs.iter().enumerate() {
        if x.num_qubits() != code.n || z.num_qubits() != code.n {
            return Some(Violation::LogicalSize { pair: i });
        }
        if !x.is_hermitian() || !z.is_hermitian() {
            return Some(Violation::LogicalNotHermitian { pair: i });
        }
        for (member, op) in [('X', x), ('Z', z)] {
            if let Some(g) = code.generators.iter().position(|g| !g.commutes_with(op)) {
                return Some(Violation::LogicalOutsideCentraliser { pair: i, member, generator: g });
            }
        }
    }
    let flat: Vec<&PauliOperator> = pairs.iter().flat_map(|(x, z)| [x, z]).collect();
    for a in 0..flat.len() {
        for b in a + 1..flat.len() {
            let partners = a % 2 == 0 && b == a + 1;
            if flat[a].commutes_with(flat[b]) == partners {
                return Some(Violation::LogicalPairing { first: a, second: b });
            }
        }
    }
    let mut wider = Echelon::new(2 * code.n, code.generators.len() + flat.len());
    for g in &code.generators {
        let _ = wider.insert(&g.symplectic());
    }
    for op in flat {
        if wider.insert(&op.symplectic()).is_err() {
            return Some(Violation::LogicalDependent);
        }
    }
    None
}

fn symplectic_product(a: &BitVec, b: &BitVec, n: usize) -> bool {
    a.slice(0, n).and_parity(&b.slice(n, n)) ^ a.slice(n, n).and_parity(&b.slice(0, n))
}

/// Symplectic Gram–Schmidt over the centraliser modulo the stabiliser group.
/// Deterministic for a fixed generator order.
pub fn extract_logicals(code: &StabiliserCode) -> Result<Vec<(PauliOperator, PauliOperator)>, CodeError> {
    if let Some(v) = check_generators(code) {
        return Err(CodeError::Inconsistent(v));
    }
    let n = code.n;
    let stab = group_echelon(n, &code.generators);
    let css = code.is_css();
    let candidates: Vec<BitVec> = if css {
        let hx: Vec<BitVec> =
            code.generators.iter().filter(|g| g.is_x_type() && !g.is_z_type()).map(|g| g.x_bits().clone()).collect();
        let hz: Vec<BitVec> =
            code.generators.iter().filter(|g| g.is_z_type() && !g.is_x_type()).map(|g| g.z_bits().clone()).collect();
        let zeros = BitVec::zeros(n);
        let mut out = Vec::new();
        // Z-type operators commuting with the X checks, then X-type with the Z checks
        for v in nullspace(&hx, n) {
            out.push(zeros.concat(&v));
        }
        for v in nullspace(&hz, n) {
            out.push(v.concat(&zeros));
        }
        out
    } else {
        // centraliser: v with <v, g> = 0, i.e. (z, x) orthogonal to g's (x, z)
        let swapped: Vec<BitVec> = code.generators.iter().map(|g| g.z_bits().concat(g.x_bits())).collect();
        nullspace(&swapped, 2 * n)
    };
    let mut cap = Echelon::new(2 * n, code.generators.len() + candidates.len());
    for g in &code.generators {
        let _ = cap.insert(&g.symplectic());
    }
    let mut reps: Vec<BitVec> = Vec::new();
    for c in candidates {
        if cap.insert(&c).is_ok() {
            reps.push(c);
        }
    }
    let k = n - stab.rank();
    if reps.len() != 2 * k {
        return Err(CodeError::Inconsistent(Violation::LogicalCount { expected: k, found: reps.len() / 2 }));
    }
    let mut pairs = Vec::new();
    while let Some(u) = (!reps.is_empty()).then(|| reps.remove(0)) {
        let Some(pos) = reps.iter().position(|v| symplectic_product(&u, v, n)) else {
            return Err(CodeError::Inconsistent(Violation::LogicalDependent));
        };
        let v = reps.remove(pos);
        for w in reps.iter_mut() {
            let wv = symplectic_product(w, &v, n);
            let wu = symplectic_product(w, &u, n);
            if wv {
                w.xor_assign(&u);
            }
            if wu {
                w.xor_assign(&v);
            }
        }
        pairs.push((u, v));
    }
    let x_stabs: Vec<PauliOperator> = code.generators.iter().filter(|g| g.is_x_type()).cloned().collect();
    let z_stabs: Vec<PauliOperator> = code.generators.iter().filter(|g| g.is_z_type()).cloned().collect();
    let reduce = |v: &BitVec| {
        let p = PauliOperator::from_symplectic(v, 0);
        let pool: &[PauliOperator] = if !css {
            &code.generators
        } else if p.is_z_type() {
            &z_stabs
        } else {
            &x_stabs
        };
        reduce_weight(&p, pool)
    };
    Ok(pairs.iter().map(|(u, v)| (reduce(u), reduce(v))).collect())
}

const EXACT_REDUCTION_LIMIT: usize = 16;

/// Lowers the weight of `p` by multiplying with elements of the span of
/// `pool`. Exhaustive over the span for small pools, greedy descent otherwise.
/// The result is Hermitian with phase 0.
pub fn reduce_weight(p: &PauliOperator, pool: &[PauliOperator]) -> PauliOperator {
    let useful: Vec<&PauliOperator> = pool.iter().collect();
    let mut best = p.clone().with_phase(0);
    if useful.len() <= EXACT_REDUCTION_LIMIT {
        // Gray-code walk over the whole span
        let mut cur = best.clone();
        for step in 1u64..(1u64 << useful.len()) {
            let bit = step.trailing_zeros() as usize;
            cur = cur.product(useful[bit]);
            if cur.weight() < best.weight() {
                best = cur.clone();
            }
        }
    } else {
        loop {
            let mut improved = false;
            for g in &useful {
                let t = best.product(g);
                if t.weight() < best.weight() {
                    best = t;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }
    best.with_phase(0)
}

/// Default leaf budget for [`distance_bruteforce`].
pub const DEFAULT_DISTANCE_BUDGET: u128 = 400_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Minimum weight of a centraliser element outside the stabiliser group,
/// searching weights `1..=max_weight`.
pub fn distance_bruteforce(code: &StabiliserCode, max_weight: usize) -> Result<usize, CodeError> {
    distance_bruteforce_with_budget(code, max_weight, DEFAULT_DISTANCE_BUDGET)
}

pub fn distance_bruteforce_with_budget(
    code: &StabiliserCode,
    max_weight: usize,
    budget: u128,
) -> Result<usize, CodeError> {
    let n = code.n;
    let needed: u128 = (1..=max_weight.min(n)).map(|w| binomial(n, w) * 3u128.pow(w as u32)).sum();
    if needed > budget {
        return Err(CodeError::BudgetExceeded { max_weight, needed, budget });
    }
    let stab = group_echelon(n, &code.generators);
    // syndrome and symplectic vector of every single-qubit Pauli
    let singles: Vec<[(BitVec, BitVec); 3]> = (0..n)
        .map(|q| {
            [Pauli::X, Pauli::Y, Pauli::Z].map(|p| {
                let op = PauliOperator::single(n, q, p);
                let syn =
                    BitVec::from_bools(&code.generators.iter().map(|g| !g.commutes_with(&op)).collect::<Vec<_>>());
                (syn, op.symplectic())
            })
        })
        .collect();
    for w in 1..=max_weight.min(n) {
        let found = (0..n)
            .into_par_iter()
            .any(|q0| singles[q0].iter().any(|s| search(&singles, &stab, n, q0 + 1, w - 1, s.0.clone(), s.1.clone())));
        if found {
            return Ok(w);
        }
    }
    Err(CodeError::NotFound { searched: max_weight })
}

fn search(
    singles: &[[(BitVec, BitVec); 3]],
    stab: &Echelon,
    n: usize,
    start: usize,
    remaining: usize,
    syn: BitVec,
    vec: BitVec,
) -> bool {
    if remaining == 0 {
        return syn.is_zero() && !stab.contains(&vec);
    }
    for q in start..=n - remaining {
        for s in &singles[q] {
            let mut syn2 = syn.clone();
            syn2.xor_assign(&s.0);
            let mut vec2 = vec.clone();
            vec2.xor_assign(&s.1);
            if search(singles, stab, n, q + 1, remaining - 1, syn2, vec2) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn five_qubit() -> StabiliserCode {
        let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| p(s)).collect();
        StabiliserCode::new(5, gens).unwrap()
    }

    #[test]
    fn five_qubit_code() {
        let c = five_qubit();
        assert_eq!(c.num_logical(), 1);
        assert!(validate(&c).valid);
        assert_eq!(distance_bruteforce(&c, 3).unwrap(), 3);
        assert_eq!(distance_bruteforce(&c, 2), Err(CodeError::NotFound { searched: 2 }));
        assert_eq!(distance_bruteforce(&c, 0), Err(CodeError::NotFound { searched: 0 }));
    }

    #[test]
    fn anticommuting_pair_named() {
        let c = StabiliserCode::from_parts_unchecked(2, vec![p("XI"), p("ZI")], vec![]);
        assert_eq!(validate(&c).violation, Some(Violation::Anticommuting { first: 0, second: 1 }));
    }

    #[test]
    fn minus_identity_detected() {
        let c = StabiliserCode::from_parts_unchecked(2, vec![p("ZZ"), p("-ZZ")], vec![]);
        let r = validate(&c);
        assert!(!r.valid);
        assert!(r.violation.unwrap().to_string().contains("-I"));
    }

    #[test]
    fn repetition_code_logicals() {
        let c = StabiliserCode::new(3, vec![p("ZZI"), p("IZZ")]).unwrap();
        let pairs = c.logical_pairs();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0.weight(), 1);
        assert_eq!(pairs[0].1.weight(), 3);
        assert!(validate(&c).valid);
    }

    #[test]
    fn fully_constrained_code() {
        let c = StabiliserCode::new(2, vec![p("XX"), p("ZZ")]).unwrap();
        assert!(c.logical_pairs().is_empty());
    }

    #[test]
    fn text_round_trip() {
        let c = five_qubit();
        let back = StabiliserCode::from_text(&c.to_text()).unwrap();
        assert_eq!(back.generators(), c.generators());
    }

    #[test]
    fn budget_guard() {
        let c = five_qubit();
        assert!(matches!(distance_bruteforce_with_budget(&c, 3, 10), Err(CodeError::BudgetExceeded { .. })));
    }
}
