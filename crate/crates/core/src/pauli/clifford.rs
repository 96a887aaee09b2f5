use super::{Pauli, PauliError, PauliOperator};
use crate::gf2::Echelon;
use std::fmt;

/// A Clifford unitary `U` recorded by the images `U X_i U†` and `U Z_i U†`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    x_images: Vec<PauliOperator>,
    z_images: Vec<PauliOperator>,
}

impl CliffordTableau {
    /// Validates Hermiticity, sizes and the canonical commutation relations.
    pub fn new(x_images: Vec<PauliOperator>, z_images: Vec<PauliOperator>) -> Result<Self, PauliError> {
        let t = CliffordTableau { x_images, z_images };
        t.validate()?;
        Ok(t)
    }

    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            x_images: (0..n).map(|q| PauliOperator::single(n, q, Pauli::X)).collect(),
            z_images: (0..n).map(|q| PauliOperator::single(n, q, Pauli::Z)).collect(),
        }
    }

    pub fn hadamard(n: usize, q: usize) -> Self {
        let mut t = CliffordTableau::identity(n);
        t.x_images[q] = PauliOperator::single(n, q, Pauli::Z);
        t.z_images[q] = PauliOperator::single(n, q, Pauli::X);
        t
    }

    /// `S = diag(1, i)`: X -> Y, Z -> Z.
    pub fn phase_gate(n: usize, q: usize) -> Self {
        let mut t = CliffordTableau::identity(n);
        t.x_images[q] = PauliOperator::single(n, q, Pauli::Y);
        t
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        let mut t = CliffordTableau::identity(n);
        t.x_images[control] = PauliOperator::from_sparse(n, &[(control, Pauli::X), (target, Pauli::X)]).unwrap();
        t.z_images[target] = PauliOperator::from_sparse(n, &[(control, Pauli::Z), (target, Pauli::Z)]).unwrap();
        t
    }

    pub fn cz(n: usize, a: usize, b: usize) -> Self {
        assert_ne!(a, b);
        let mut t = CliffordTableau::identity(n);
        t.x_images[a] = PauliOperator::from_sparse(n, &[(a, Pauli::X), (b, Pauli::Z)]).unwrap();
        t.x_images[b] = PauliOperator::from_sparse(n, &[(b, Pauli::X), (a, Pauli::Z)]).unwrap();
        t
    }

    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut t = CliffordTableau::identity(n);
        t.x_images.swap(a, b);
        t.z_images.swap(a, b);
        t
    }

    /// Conjugation by a Pauli operator: flips the sign of anticommuting images.
    pub fn pauli(p: &PauliOperator) -> Self {
        let n = p.num_qubits();
        let mut t = CliffordTableau::identity(n);
        for q in 0..n {
            if !t.x_images[q].commutes_with(p) {
                t.x_images[q] = t.x_images[q].negated();
            }
            if !t.z_images[q].commutes_with(p) {
                t.z_images[q] = t.z_images[q].negated();
            }
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.x_images.len()
    }

    pub fn x_image(&self, q: usize) -> &PauliOperator {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliOperator {
        &self.z_images[q]
    }

    pub fn validate(&self) -> Result<(), PauliError> {
        let n = self.x_images.len();
        if self.z_images.len() != n {
            return Err(PauliError::InvalidTableau(format!("{} X images but {} Z images", n, self.z_images.len())));
        }
        let all: Vec<(&PauliOperator, String)> = self
            .x_images
            .iter()
            .enumerate()
            .map(|(i, p)| (p, format!("X{i}")))
            .chain(self.z_images.iter().enumerate().map(|(i, p)| (p, format!("Z{i}"))))
            .collect();
        for (p, name) in &all {
            if p.num_qubits() != n {
                return Err(PauliError::InvalidTableau(format!("image of {name} acts on {} qubits", p.num_qubits())));
            }
            if !p.is_hermitian() {
                return Err(PauliError::InvalidTableau(format!("image of {name} is not Hermitian: {p}")));
            }
        }
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let expected = !(j == i + n);
                if all[i].0.commutes_with(all[j].0) != expected {
                    return Err(PauliError::InvalidTableau(format!(
                        "images of {} and {} have the wrong commutation relation",
                        all[i].1, all[j].1
                    )));
                }
            }
        }
        let mut e = Echelon::new(2 * n, 2 * n);
        for (p, name) in &all {
            if e.insert(&p.symplectic()).is_err() {
                return Err(PauliError::InvalidTableau(format!("image of {name} is dependent")));
            }
        }
        Ok(())
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &PauliOperator) -> Result<PauliOperator, PauliError> {
        if p.num_qubits() != self.num_qubits() {
            return Err(PauliError::SizeMismatch(self.num_qubits(), p.num_qubits()));
        }
        Ok(self.apply(p))
    }

    fn apply(&self, p: &PauliOperator) -> PauliOperator {
        let n = self.num_qubits();
        let mut acc = PauliOperator::identity(n).with_phase(p.phase());
        for q in p.support() {
            match p.get(q) {
                Pauli::X => acc = acc.product(&self.x_images[q]),
                Pauli::Z => acc = acc.product(&self.z_images[q]),
                Pauli::Y => {
                    // Y = i X Z
                    acc = acc.product(&self.x_images[q]).product(&self.z_images[q]);
                    acc = acc.clone().with_phase(acc.phase() + 1);
                }
                Pauli::I => {}
            }
        }
        acc
    }

    /// The tableau of "apply `self`, then `next`".
    pub fn then(&self, next: &CliffordTableau) -> Result<CliffordTableau, PauliError> {
        if self.num_qubits() != next.num_qubits() {
            return Err(PauliError::SizeMismatch(self.num_qubits(), next.num_qubits()));
        }
        Ok(CliffordTableau {
            x_images: self.x_images.iter().map(|p| next.apply(p)).collect(),
            z_images: self.z_images.iter().map(|p| next.apply(p)).collect(),
        })
    }

    /// Same images ignoring their phase fields.
    pub fn equals_up_to_phase(&self, other: &CliffordTableau) -> bool {
        self.num_qubits() == other.num_qubits()
            && self.x_images.iter().zip(&other.x_images).all(|(a, b)| a.same_up_to_phase(b))
            && self.z_images.iter().zip(&other.z_images).all(|(a, b)| a.same_up_to_phase(b))
    }

    pub fn is_identity(&self) -> bool {
        *self == CliffordTableau::identity(self.num_qubits())
    }

    /// Relabels qubits: qubit `q` of `self` becomes `map[q]` of an `n`-qubit
    /// tableau acting trivially elsewhere.
    pub fn embed(&self, n: usize, map: &[usize]) -> CliffordTableau {
        let mut t = CliffordTableau::identity(n);
        for q in 0..self.num_qubits() {
            t.x_images[map[q]] = self.x_images[q].embed(n, map);
            t.z_images[map[q]] = self.z_images[q].embed(n, map);
        }
        t
    }
}

/// `t1` applied first, then `t2`.
pub fn compose(t1: &CliffordTableau, t2: &CliffordTableau) -> Result<CliffordTableau, PauliError> {
    t1.then(t2)
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.num_qubits() {
            writeln!(f, "X{q} -> {}", self.x_images[q])?;
            writeln!(f, "Z{q} -> {}", self.z_images[q])?;
        }
        Ok(())
    }
}

impl fmt::Debug for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
