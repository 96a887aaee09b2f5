//! Randomised invariants across the crate.

use proptest::prelude::*;
use topobraid::compiler::{compile_h, verify, Gate, Register, Target, VerifyOptions};
use topobraid::deformation::DeformationState;
use topobraid::lattice::{build_planar_code, HoleSpec, LatticeSpec};
use topobraid::pauli::{CliffordTableau, Pauli, PauliOperator};

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(0usize..4, n), 0u8..4).prop_map(move |(labels, phase)| {
        let terms: Vec<(usize, Pauli)> = labels.iter().enumerate().map(|(q, &l)| (q, PAULIS[l])).collect();
        PauliOperator::from_sparse(n, &terms).unwrap().with_phase(phase)
    })
}

#[derive(Clone, Debug)]
enum G {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

fn gates(n: usize, len: usize) -> impl Strategy<Value = Vec<G>> {
    let g = prop_oneof![
        (0..n).prop_map(G::H),
        (0..n).prop_map(G::S),
        (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| G::Cnot(a, b)),
    ];
    prop::collection::vec(g, 0..len)
}

fn circuit(n: usize, gs: &[G]) -> CliffordTableau {
    gs.iter().fold(CliffordTableau::identity(n), |acc, g| {
        let t = match *g {
            G::H(q) => CliffordTableau::hadamard(n, q),
            G::S(q) => CliffordTableau::phase_gate(n, q),
            G::Cnot(a, b) => CliffordTableau::cnot(n, a, b),
        };
        acc.then(&t).unwrap()
    })
}

proptest! {
    #[test]
    fn pauli_product_is_associative((p, q, r) in (1usize..6).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))) {
        prop_assert_eq!(p.product(&q).product(&r), p.product(&q.product(&r)));
    }

    #[test]
    fn commutation_matches_product_order((p, q) in (1usize..6).prop_flat_map(|n| (pauli(n), pauli(n)))) {
        prop_assert_eq!(p.commutes_with(&q), q.commutes_with(&p));
        let (pq, qp) = (p.product(&q), q.product(&p));
        if p.commutes_with(&q) {
            prop_assert_eq!(pq, qp);
        } else {
            prop_assert_eq!(pq, qp.negated());
        }
    }

    #[test]
    fn squares_are_scalars(p in (1usize..6).prop_flat_map(pauli)) {
        let sq = p.product(&p);
        prop_assert!(sq.is_trivial());
        prop_assert_eq!(sq.phase(), (2 * p.phase()) % 4);
    }

    #[test]
    fn random_circuits_are_homomorphisms(
        (gs, p, q) in (2usize..5).prop_flat_map(|n| (gates(n, 30), pauli(n), pauli(n)))
    ) {
        let n = p.num_qubits();
        let c = circuit(n, &gs);
        prop_assert!(c.validate().is_ok());
        let (cp, cq) = (c.conjugate(&p).unwrap(), c.conjugate(&q).unwrap());
        prop_assert_eq!(c.conjugate(&p.product(&q)).unwrap(), cp.product(&cq));
        prop_assert_eq!(cp.commutes_with(&cq), p.commutes_with(&q));
    }

    #[test]
    fn planar_patches_encode_one_qubit(w in 1usize..5, h in 1usize..5) {
        let lc = build_planar_code(&LatticeSpec::planar(w, h)).unwrap();
        prop_assert_eq!(lc.lattice.num_qubits(), (w + 1) * h + w * (h - 1));
        prop_assert_eq!(lc.code.num_logical(), 1);
    }

    #[test]
    fn each_interior_hole_adds_a_qubit(rough in any::<bool>(), r in 1i64..3, c in 1i64..3) {
        let hole = if rough { HoleSpec::rough(r + 1, c + 1) } else { HoleSpec::smooth(r, c) };
        let lc = build_planar_code(&LatticeSpec::planar(5, 5).with_hole(hole)).unwrap();
        prop_assert_eq!(lc.code.num_logical(), 2);
    }

    /// Measuring products of single-qubit X or Z on a small patch keeps a
    /// commuting Hermitian group, a symplectic logical basis and a fixed
    /// logical count.
    #[test]
    fn deformation_preserves_code_structure(
        steps in prop::collection::vec((any::<bool>(), prop::collection::vec(0usize..12, 1..3), any::<bool>()), 1..12)
    ) {
        let lc = build_planar_code(&LatticeSpec::planar(2, 3)).unwrap();
        let n = lc.lattice.num_qubits();
        let mut st = DeformationState::new(&lc.code);
        let k = st.num_logical();
        for (xtype, qubits, minus) in steps {
            let p = if xtype { Pauli::X } else { Pauli::Z };
            let mut terms: Vec<(usize, Pauli)> = qubits.iter().map(|&q| (q % n, p)).collect();
            terms.sort_by_key(|t| t.0);
            terms.dedup_by_key(|t| t.0);
            let m = PauliOperator::from_sparse(n, &terms).unwrap();
            if st.apply_measurement_with_outcome(&m, if minus { -1 } else { 1 }).is_ok() {
                prop_assert_eq!(st.num_logical(), k);
                let gens = st.generators();
                prop_assert!(gens.iter().all(|g| g.is_hermitian()));
                prop_assert!(gens.iter().all(|g| gens.iter().all(|h| g.commutes_with(h))));
                let reps = st.representatives();
                prop_assert!(reps.iter().all(|r| gens.iter().all(|g| g.commutes_with(r))));
                for (i, r) in reps.iter().enumerate() {
                    for (j, s) in reps.iter().enumerate() {
                        prop_assert_eq!(r.commutes_with(s), i / 2 != j / 2 || i == j);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Sequences of compiled Hadamards verify as the same sequence of gates.
    #[test]
    fn compiled_hadamard_sequences_verify(qs in prop::collection::vec(1usize..=3, 1..4)) {
        let reg = Register::new(3).unwrap();
        let mut prog = compile_h(&reg, qs[0]).unwrap();
        for &q in &qs[1..] {
            prog = prog.then(&compile_h(&reg, q).unwrap()).unwrap();
        }
        let target = Target::gates(qs.iter().map(|&q| Gate::H(q)).collect());
        let rep = verify(&prog, &target, &VerifyOptions::default()).unwrap();
        prop_assert!(rep.all_pass());
        prop_assert_eq!(rep.total_branches, num_bigint::BigUint::from(1u8) << prog.num_measurements());
    }
}
