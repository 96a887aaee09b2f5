//! Pauli operators in binary-symplectic form and Clifford tableaux.
//!
//! A [`PauliOperator`] on `n` qubits is `i^phase` times a tensor product of
//! `I, X, Y, Z`, with `(x, z) = (1, 1)` standing for `Y = iXZ`. The phase is
//! relative to that labelled product, so `X * Z = -iY` has phase 3.

mod clifford;
mod group;

pub use clifford::{compose, CliffordTableau};
pub use group::{generate_group, group_elements, GroupMode, GroupReport};

use crate::gf2::BitVec;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("size mismatch: {0} qubits vs {1} qubits")]
    SizeMismatch(usize, usize),
    #[error("cannot parse Pauli string {0:?}: {1}")]
    Parse(String, String),
    #[error("qubit index {0} out of range for {1} qubits")]
    QubitOutOfRange(usize, usize),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut op = PauliOperator::identity(n);
        op.set(qubit, p);
        op
    }

    /// Builds `i^phase` times the labelled product described by the bits.
    pub fn from_bits(x: BitVec, z: BitVec, phase: u8) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::SizeMismatch(x.len(), z.len()));
        }
        Ok(PauliOperator { x, z, phase: phase & 3 })
    }

    /// Inverse of [`PauliOperator::symplectic`].
    pub fn from_symplectic(v: &BitVec, phase: u8) -> Self {
        let n = v.len() / 2;
        PauliOperator { x: v.slice(0, n), z: v.slice(n, n), phase: phase & 3 }
    }

    /// Sparse constructor from `(qubit, Pauli)` pairs.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Result<Self, PauliError> {
        let mut op = PauliOperator::identity(n);
        for &(q, p) in terms {
            if q >= n {
                return Err(PauliError::QubitOutOfRange(q, n));
            }
            op = op.product(&PauliOperator::single(n, q, p));
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    /// Overwrites the label on one qubit, leaving the phase field alone.
    pub fn set(&mut self, qubit: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    /// `x ++ z`, length `2n`.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// Identity up to phase.
    pub fn is_trivial(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn same_up_to_phase(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Pure X-type (no Z or Y factors).
    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn negated(&self) -> Self {
        self.clone().with_phase(self.phase + 2)
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        self.check_size(other)?;
        Ok(self.product(other))
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        self.check_size(other)?;
        Ok(self.commutes_with(other))
    }

    /// Operator product `self * other`. Panics on a size mismatch.
    pub fn product(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.num_qubits(), other.num_qubits(), "Pauli size mismatch");
        let mut plus = 0u32;
        let mut minus = 0u32;
        let (xa, za, xb, zb) = (self.x.words(), self.z.words(), other.x.words(), other.z.words());
        for k in 0..xa.len() {
            let (x1, z1, x2, z2) = (xa[k], za[k], xb[k], zb[k]);
            // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i
            plus += (x1 & !z1 & x2 & z2).count_ones()
                + (x1 & z1 & !x2 & z2).count_ones()
                + (!x1 & z1 & x2 & !z2).count_ones();
            minus += (x1 & z1 & x2 & !z2).count_ones()
                + (!x1 & z1 & x2 & z2).count_ones()
                + (x1 & !z1 & !x2 & z2).count_ones();
        }
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        let phase = (self.phase as u32 + other.phase as u32 + plus + 3 * minus) % 4;
        PauliOperator { x, z, phase: phase as u8 }
    }

    /// Panics on a size mismatch.
    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        assert_eq!(self.num_qubits(), other.num_qubits(), "Pauli size mismatch");
        !(self.x.and_parity(&other.z) ^ self.z.and_parity(&other.x))
    }

    /// Embeds into a larger register, qubit `q` going to `map[q]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> PauliOperator {
        let mut op = PauliOperator::identity(n).with_phase(self.phase);
        for q in self.support() {
            op.set(map[q], self.get(q));
        }
        op
    }

    fn check_size(&self, other: &PauliOperator) -> Result<(), PauliError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(PauliError::SizeMismatch(self.num_qubits(), other.num_qubits()));
        }
        Ok(())
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (phase, body) = if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else {
            (0, t)
        };
        if body.is_empty() {
            return Err(PauliError::Parse(s.to_string(), "no qubit labels".into()));
        }
        let mut op = PauliOperator::identity(body.chars().count()).with_phase(phase);
        for (q, c) in body.chars().enumerate() {
            let p = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(PauliError::Parse(s.to_string(), format!("unexpected character {other:?}"))),
            };
            op.set(q, p);
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let r = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(r.to_string(), "-iY");
        assert_eq!(r.phase(), 3);
        assert_eq!(p("Z").product(&p("X")).to_string(), "iY");
    }

    #[test]
    fn anticommuting_pair() {
        assert!(!p("XI").commutes(&p("ZI")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
    }

    #[test]
    fn size_mismatch() {
        assert_eq!(p("X").multiply(&p("XX")), Err(PauliError::SizeMismatch(1, 2)));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn string_round_trip() {
        for s in ["+XYZI", "iZZ", "-Y", "-iXIY"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XQ".parse::<PauliOperator>().is_err());
    }

    #[test]
    fn square_of_y_is_identity() {
        let y = p("Y");
        assert_eq!(y.product(&y), p("I"));
    }

    #[test]
    fn large_register_products() {
        let n = 130;
        let a = PauliOperator::from_sparse(n, &[(0, Pauli::X), (70, Pauli::Y), (129, Pauli::Z)]).unwrap();
        let b = PauliOperator::from_sparse(n, &[(70, Pauli::Z), (129, Pauli::X)]).unwrap();
        // YZ = iX, ZX = iY
        let r = a.product(&b);
        assert_eq!(r.phase(), 2);
        assert_eq!(r.get(70), Pauli::X);
        assert_eq!(r.get(129), Pauli::Y);
        assert!(a.commutes_with(&b));
    }
}
