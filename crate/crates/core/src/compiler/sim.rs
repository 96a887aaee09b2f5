//! Dense simulation of a linear map from the data qubits into the full
//! register.
//!
//! Column `j` is the image of computational basis input `|j>` on the data
//! qubits (ancillas start in `|0>`). Bit `i` of a row index is physical
//! qubit `i`. Working on the whole map at once keeps relative phases between
//! inputs, so one run decides equality with a unitary up to global phase.

use super::{Instruction, Register};
use num_complex::Complex64;

/// Relative tolerance for every floating-point comparison in this module
/// and in verification.
pub(crate) const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    nq: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// What happened to a conditional or probabilistic step.
pub(crate) enum Step {
    Done,
    /// A reset hit a qubit entangled with the rest.
    Entangled,
}

impl Operator {
    /// The embedding of `n_in` data qubits into `nq` qubits.
    pub fn embedding(nq: usize, n_in: usize) -> Self {
        let rows = 1usize << nq;
        let cols = 1usize << n_in;
        let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
        for j in 0..cols {
            data[j * rows + j] = Complex64::new(1.0, 0.0);
        }
        Operator { nq, cols, data }
    }

    pub fn from_columns(nq: usize, columns: Vec<Vec<Complex64>>) -> Self {
        let rows = 1usize << nq;
        assert!(columns.iter().all(|c| c.len() == rows));
        let cols = columns.len();
        Operator { nq, cols, data: columns.into_iter().flatten().collect() }
    }

    pub fn num_qubits(&self) -> usize {
        self.nq
    }

    pub fn rows(&self) -> usize {
        1 << self.nq
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        let r = self.rows();
        &self.data[j * r..(j + 1) * r]
    }

    /// `M v` for an input vector over the columns.
    pub fn apply_to(&self, v: &[Complex64]) -> Vec<Complex64> {
        let r = self.rows();
        let mut out = vec![Complex64::new(0.0, 0.0); r];
        for (j, &c) in v.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.column(j)) {
                *o += c * m;
            }
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.norm_sqr() == 0.0)
    }

    pub fn clear(&mut self) {
        self.data.fill(Complex64::new(0.0, 0.0));
    }

    /// Rescales to unit Frobenius norm with the first significant entry real
    /// and positive, so equal-up-to-phase maps compare equal.
    pub fn canonicalise(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return;
        }
        let pivot = self.data.iter().find(|z| z.norm() > 1e-6 * norm).copied().unwrap_or(Complex64::new(1.0, 0.0));
        let scale = pivot.conj() / (pivot.norm() * norm);
        for z in &mut self.data {
            *z *= scale;
        }
    }

    /// Entrywise closeness, for canonicalised operators.
    pub fn approx_eq(&self, other: &Operator) -> bool {
        self.nq == other.nq
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| (a - b).norm() < 1e-7)
    }

    fn for_each_pair(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let r = self.rows();
        let m = 1usize << q;
        for col in self.data.chunks_mut(r) {
            for i in 0..r {
                if i & m == 0 {
                    let (lo, hi) = col.split_at_mut(i | m);
                    f(&mut lo[i], &mut hi[0]);
                }
            }
        }
    }

    fn phase_where(&mut self, mask: usize) {
        let r = self.rows();
        for col in self.data.chunks_mut(r) {
            for (i, z) in col.iter_mut().enumerate() {
                if i & mask == mask {
                    *z = -*z;
                }
            }
        }
    }

    pub fn x(&mut self, q: usize) {
        self.for_each_pair(q, std::mem::swap);
    }

    pub fn z(&mut self, q: usize) {
        self.phase_where(1 << q);
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        self.phase_where((1 << a) | (1 << b));
    }

    pub fn ccz(&mut self, a: usize, b: usize, c: usize) {
        self.phase_where((1 << a) | (1 << b) | (1 << c));
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        let r = self.rows();
        let (cm, tm) = (1usize << control, 1usize << target);
        for col in self.data.chunks_mut(r) {
            for i in 0..r {
                if i & cm != 0 && i & tm == 0 {
                    col.swap(i, i | tm);
                }
            }
        }
    }

    pub fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        self.for_each_pair(q, |a, b| {
            let (x, y) = (*a, *b);
            *a = (x + y) * s;
            *b = (x - y) * s;
        });
    }

    /// Projects onto the Z eigenspace `(-1)^outcome`.
    pub fn project_z(&mut self, q: usize, outcome: bool) {
        let r = self.rows();
        let m = 1usize << q;
        let zero = Complex64::new(0.0, 0.0);
        for col in self.data.chunks_mut(r) {
            for (i, z) in col.iter_mut().enumerate() {
                if (i & m != 0) != outcome {
                    *z = zero;
                }
            }
        }
    }

    /// Projects onto the X eigenspace `(-1)^outcome`.
    pub fn project_x(&mut self, q: usize, outcome: bool) {
        let sign = if outcome { -1.0 } else { 1.0 };
        self.for_each_pair(q, |a, b| {
            let avg = (*a + *b * sign) * 0.5;
            *a = avg;
            *b = avg * sign;
        });
    }

    /// Replaces qubit `q` by `|0>` (or `|+>` when `plus`), provided the map
    /// factors as `|s> (x) A` on that qubit. Otherwise the reset is not a
    /// linear operation on pure states and the caller is told.
    pub(crate) fn reset(&mut self, q: usize, plus: bool) -> Step {
        let r = self.rows();
        let m = 1usize << q;
        let (mut n0, mut n1, mut inner) = (0.0, 0.0, Complex64::new(0.0, 0.0));
        for col in self.data.chunks(r) {
            for i in (0..r).filter(|i| i & m == 0) {
                let (a, b) = (col[i], col[i | m]);
                n0 += a.norm_sqr();
                n1 += b.norm_sqr();
                inner += a.conj() * b;
            }
        }
        let total = n0 + n1;
        if total == 0.0 {
            return Step::Done;
        }
        // Cauchy-Schwarz is tight exactly when the two halves are parallel
        if n0 * n1 - inner.norm_sqr() > TOL * total * total {
            return Step::Entangled;
        }
        // A = (conj(s0) A0 + conj(s1) A1) with |s> the unit qubit state
        let (s0, s1) = if n0 >= n1 {
            let lambda = inner / n0;
            let k = (1.0 + lambda.norm_sqr()).sqrt();
            (Complex64::new(1.0 / k, 0.0), lambda / k)
        } else {
            let mu = inner.conj() / n1;
            let k = (1.0 + mu.norm_sqr()).sqrt();
            (mu / k, Complex64::new(1.0 / k, 0.0))
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for col in self.data.chunks_mut(r) {
            for i in (0..r).filter(|i| i & m == 0) {
                let a = s0.conj() * col[i] + s1.conj() * col[i | m];
                if plus {
                    col[i] = a * s;
                    col[i | m] = a * s;
                } else {
                    col[i] = a;
                    col[i | m] = Complex64::new(0.0, 0.0);
                }
            }
        }
        Step::Done
    }

    /// Applies a unitary instruction; measurements, preparations and
    /// conditional Paulis are handled by the caller.
    pub(crate) fn apply_unitary(&mut self, reg: &Register, ins: &Instruction) {
        match *ins {
            Instruction::PauliX { qubit, .. } => self.x(qubit),
            Instruction::PauliZ { qubit, .. } => self.z(qubit),
            Instruction::Cz { other } => self.cz(reg.threaded(), other),
            Instruction::GlobalCz12 => {
                self.cz(reg.a(), reg.b());
                for k in 0..reg.num_pairs() {
                    self.cz(2 * k, 2 * k + 1);
                }
            }
            Instruction::GlobalCcz => {
                self.ccz(reg.a(), reg.b(), reg.threaded());
                for k in 0..reg.num_pairs() {
                    self.ccz(2 * k, 2 * k + 1, reg.threaded());
                }
            }
            Instruction::BraidCnot { pair } => {
                self.cnot(reg.a(), 2 * pair - 2);
                self.cnot(2 * pair - 1, reg.b());
            }
            _ => unreachable!("not a unitary instruction"),
        }
    }
}
