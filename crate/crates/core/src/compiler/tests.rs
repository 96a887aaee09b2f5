use super::*;
use crate::pauli::Pauli;
use crate::scheme::universal_register;
use num_bigint::BigUint;
use num_complex::Complex64;

fn reg(n: usize) -> Register {
    Register::new(n).unwrap()
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

fn full_unitary(r: &Register, ins: Instruction) -> Operator {
    let nq = r.num_qubits();
    let mut op = Operator::embedding(nq, nq);
    op.apply_unitary(r, &ins);
    op
}

fn bit(i: usize, q: usize) -> bool {
    i >> q & 1 == 1
}

#[test]
fn register_rules() {
    assert!(Register::new(4).is_err());
    assert!(Register::new(1).is_err());
    let r = reg(5);
    assert_eq!(r.num_qubits(), 7);
    assert_eq!(r.name(r.a()), "a");
    assert_eq!(r.parse("5").unwrap(), r.threaded());
    assert_eq!(r.pair_of(r.data(4)), Some(2));
    assert_eq!(r.pair_of(r.threaded()), None);
}

#[test]
fn transversal_gates_are_the_literal_products() {
    // diagonal phases written out from the operator products directly
    for n in [3, 5] {
        let r = reg(n);
        let (t, a, b) = (n - 1, n, n + 1);
        let pairs = (n - 1) / 2;
        let ccz = full_unitary(&r, Instruction::GlobalCcz);
        let cz = full_unitary(&r, Instruction::GlobalCz12);
        for i in 0..1usize << r.num_qubits() {
            let mut ones = usize::from(bit(i, a) && bit(i, b) && bit(i, t));
            ones += (0..pairs).filter(|&k| bit(i, 2 * k) && bit(i, 2 * k + 1) && bit(i, t)).count();
            let want = if ones % 2 == 1 { -1.0 } else { 1.0 };
            assert_eq!(ccz.column(i)[i], Complex64::new(want, 0.0));
            let mut ones = usize::from(bit(i, a) && bit(i, b));
            ones += (0..pairs).filter(|&k| bit(i, 2 * k) && bit(i, 2 * k + 1)).count();
            let want = if ones % 2 == 1 { -1.0 } else { 1.0 };
            assert_eq!(cz.column(i)[i], Complex64::new(want, 0.0));
        }
    }
}

#[test]
fn braid_cnot_matches_scheme_and_dense_routes() {
    for n in [3, 5, 7] {
        let r = reg(n);
        let scheme = universal_register(n).unwrap();
        for k in 1..=r.num_pairs() {
            let ins = Instruction::BraidCnot { pair: k };
            let tab = ins.clifford(&r).unwrap();
            let mv = scheme.find_move(&format!("monodromy(h{},h_alpha)", 2 * k)).unwrap();
            let from_scheme = scheme.setup.braid_action(mv).unwrap();
            assert!(tab.equals_up_to_phase(&from_scheme), "N={n} k={k}");
            // a CNOT circuit permutes basis states: |v> -> |M v>, with column
            // j of M the X part of the image of X_j
            let dense = full_unitary(&r, ins);
            for i in 0..1usize << r.num_qubits() {
                let mut img = 0usize;
                for j in (0..r.num_qubits()).filter(|&j| bit(i, j)) {
                    let x = tab.x_image(j);
                    for q in 0..r.num_qubits() {
                        if x.get(q).bits().0 {
                            img ^= 1 << q;
                        }
                    }
                }
                assert_eq!(dense.column(i)[img], Complex64::new(1.0, 0.0));
            }
        }
    }
}

#[test]
fn dense_pauli_conjugation_matches_tableau() {
    // U is diagonal with U|0> = |0>, so U X_q U^dagger |0> = U |e_q>
    let r = reg(3);
    let ins = Instruction::GlobalCz12;
    let tab = ins.clifford(&r).unwrap();
    let u = full_unitary(&r, ins);
    let nq = r.num_qubits();
    for q in 0..nq {
        let img = tab.x_image(q);
        let mut rhs = Operator::embedding(nq, nq);
        let mut phase = Complex64::i().powu(img.phase() as u32);
        for p in 0..nq {
            match img.get(p) {
                Pauli::X => rhs.x(p),
                Pauli::Z => rhs.z(p),
                Pauli::Y => {
                    // Y = i X Z
                    rhs.z(p);
                    rhs.x(p);
                    phase *= Complex64::i();
                }
                Pauli::I => {}
            }
        }
        let want: Vec<Complex64> = rhs.column(0).iter().map(|z| z * phase).collect();
        assert_eq!(u.column(1 << q), want.as_slice(), "qubit {q}");
    }
}

#[test]
fn global_ccz_with_zero_ancilla_is_ccz() {
    let r = reg(3);
    let p = Program::from_parts(r, vec![Instruction::GlobalCcz], vec![], vec![]).unwrap();
    assert!(verify(&p, &Target::gate(Gate::Ccz(1, 2, 3)), &opts()).unwrap().all_pass());
    let r = reg(5);
    let p = Program::from_parts(r, vec![Instruction::GlobalCz12], vec![], vec![]).unwrap();
    let rep = verify(&p, &Target::gates(vec![Gate::Cz(1, 2), Gate::Cz(3, 4)]), &opts()).unwrap();
    assert!(rep.all_pass());
}

#[test]
fn braid_cnot_squared_is_identity() {
    let r = reg(5);
    let ins = vec![Instruction::BraidCnot { pair: 2 }; 2];
    let p = Program::from_parts(r, ins, vec![], vec![]).unwrap();
    assert!(verify(&p, &Target::identity(), &opts()).unwrap().all_pass());
}

#[test]
fn empty_program_is_identity_with_one_branch() {
    let p = Program::new(reg(3));
    let rep = verify(&p, &Target::identity(), &opts()).unwrap();
    assert!(rep.all_pass());
    assert_eq!(rep.total_branches, BigUint::from(1u8));
    assert_eq!(p.resource_count(), ResourceCount::default());
}

#[test]
fn h_gadget_moves_state_with_hadamard() {
    let r = reg(3);
    let mut pb = ProgramBuilder::new(r);
    h_gadget(&mut pb, r.threaded(), r.a()).unwrap();
    pb.push(Instruction::PrepZ { qubit: r.threaded() });
    let p = pb.build();
    let target = Target::gate(Gate::H(3)).with_layout(vec![0, 1, r.a()]);
    let rep = verify(&p, &target, &opts()).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_json());
    assert_eq!(rep.total_branches, BigUint::from(2u8));
    // the ancilla-ancilla form goes through the transversal CZ trick
    let mut pb = ProgramBuilder::new(r);
    h_gadget(&mut pb, r.threaded(), r.a()).unwrap();
    h_gadget(&mut pb, r.a(), r.b()).unwrap();
    pb.push(Instruction::PrepZ { qubit: r.threaded() });
    pb.push(Instruction::PrepZ { qubit: r.a() });
    let p = pb.build();
    assert_eq!(p.resource_count().global_transversal, 2);
    let target = Target::identity().with_layout(vec![0, 1, r.b()]);
    assert!(verify(&p, &target, &opts()).unwrap().all_pass());
}

#[test]
fn h_gadget_needs_a_cz_route() {
    let r = reg(3);
    let mut pb = ProgramBuilder::new(r);
    assert!(matches!(h_gadget(&mut pb, 0, 1), Err(CompileError::NoRoute { .. })));
    assert!(matches!(h_gadget(&mut pb, 0, r.a()), Err(CompileError::NoRoute { .. })));
    assert!(matches!(i_gadget(&mut pb, 1, r.a()), Err(CompileError::NoRoute { .. })));
    assert!(matches!(i_gadget(&mut pb, r.threaded(), r.b()), Err(CompileError::NoRoute { .. })));
}

#[test]
fn i_gadget_variants_teleport() {
    let r = reg(3);
    let (a, b) = (r.a(), r.b());
    // 1 -> a uses CNOT(a -> 1): control on the destination
    let mut pb = ProgramBuilder::new(r);
    i_gadget(&mut pb, 0, a).unwrap();
    pb.push(Instruction::PrepZ { qubit: 0 });
    pb.zero(b);
    let p = pb.build();
    assert!(matches!(p.instructions().iter().find(|i| i.measured_bit().is_some()), Some(Instruction::MeasZ { .. })));
    let rep = verify(&p, &Target::identity().with_layout(vec![a, 1, 2]), &opts()).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_json());
    // 2 -> b uses CNOT(2 -> b): control on the source
    let mut pb = ProgramBuilder::new(r);
    i_gadget(&mut pb, 1, b).unwrap();
    pb.push(Instruction::PrepZ { qubit: 1 });
    let p = pb.build();
    assert!(matches!(p.instructions().iter().find(|i| i.measured_bit().is_some()), Some(Instruction::MeasX { .. })));
    let rep = verify(&p, &Target::identity().with_layout(vec![0, b, 2]), &opts()).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_json());
}

#[test]
fn i_gadget_round_trips() {
    let r = reg(5);
    let (a, b) = (r.a(), r.b());
    for (q, anc) in [(2, a), (3, b)] {
        let mut pb = ProgramBuilder::new(r);
        i_gadget(&mut pb, q, anc).unwrap();
        i_gadget(&mut pb, anc, q).unwrap();
        let p = pb.finish();
        p.check_dataflow(None).unwrap();
        let rep = verify(&p, &Target::identity(), &opts()).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json());
        assert_eq!(rep.measurements, 2);
    }
}

#[test]
fn hadamards_on_three_qubits() {
    let r = reg(3);
    for (q, m) in [(1, 6), (2, 6), (3, 3)] {
        let p = compile_h(&r, q).unwrap();
        p.check_dataflow(None).unwrap();
        assert_eq!(p.num_measurements(), m, "H{q}");
        let target = Target::gate(Gate::H(q));
        let rep = verify(&p, &target, &opts()).unwrap();
        assert!(rep.all_pass(), "H{q}: {}", rep.to_json());
        assert_eq!(rep.total_branches, BigUint::from(1u64 << m));
        assert_eq!(rep.passed, BigUint::from(1u64 << m));
        // the per-branch oracle agrees outcome by outcome
        let naive = verify_naive(&p, &target, &opts(), 12).unwrap();
        assert!(naive.all_pass());
        assert_eq!(naive.classes.len(), 1 << m);
    }
}

#[test]
fn h3_has_three_gadgets() {
    let p = compile_h(&reg(3), 3).unwrap();
    let c = p.resource_count();
    assert_eq!((c.h_gadgets, c.i_gadgets, c.measurements, c.braids), (3, 0, 3, 0));
    let p = compile_h(&reg(3), 1).unwrap();
    let c = p.resource_count();
    assert_eq!((c.h_gadgets, c.i_gadgets, c.braids), (5, 1, 1));
}

#[test]
fn hadamard_on_second_pair() {
    let r = reg(5);
    let p = compile_h(&r, 4).unwrap();
    assert!(p.instructions().contains(&Instruction::BraidCnot { pair: 2 }));
    assert!(verify(&p, &Target::gate(Gate::H(4)), &opts()).unwrap().all_pass());
    for q in [1, 3, 5] {
        assert!(verify(&compile_h(&r, q).unwrap(), &Target::gate(Gate::H(q)), &opts()).unwrap().all_pass(), "H{q}");
    }
}

#[test]
fn hadamard_twice_is_identity() {
    let r = reg(3);
    for q in 1..=3 {
        let h = compile_h(&r, q).unwrap();
        let hh = h.then(&h).unwrap();
        assert_eq!(hh.num_measurements(), 2 * h.num_measurements());
        assert!(verify(&hh, &Target::identity(), &opts()).unwrap().all_pass());
    }
}

#[test]
fn ccz_three_qubits_is_one_transversal_gate() {
    let r = reg(3);
    let p = compile_ccz(&r, 1, 2, 3).unwrap();
    assert_eq!(p.instructions(), &[Instruction::GlobalCcz]);
    assert!(verify(&p, &Target::gate(Gate::Ccz(1, 2, 3)), &opts()).unwrap().all_pass());
    let p2 = compile_ccz(&r, 3, 1, 2).unwrap();
    assert_eq!(p, p2);
}

#[test]
fn ccz_isolation_five_qubits() {
    let r = reg(5);
    let p = compile_ccz(&r, 1, 2, 5).unwrap();
    p.check_dataflow(None).unwrap();
    let c = p.resource_count();
    assert_eq!((c.i_gadgets, c.h_gadgets, c.measurements, c.global_transversal, c.braids), (2, 0, 2, 2, 2));
    let rep = verify(&p, &Target::gate(Gate::Ccz(1, 2, 5)), &opts()).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_json());
    let naive = verify_naive(&p, &Target::gate(Gate::Ccz(1, 2, 5)), &opts(), 4).unwrap();
    assert!(naive.all_pass());
    // the second pair is isolated the same way
    let p = compile_ccz(&r, 3, 4, 5).unwrap();
    assert!(verify(&p, &Target::gate(Gate::Ccz(3, 4, 5)), &opts()).unwrap().all_pass());
    // and CCZ is its own inverse
    let p = compile_ccz(&r, 1, 2, 5).unwrap();
    assert!(verify(&p.then(&p).unwrap(), &Target::identity(), &opts()).unwrap().all_pass());
}

#[test]
fn swap_with_threaded_qubit() {
    let r = reg(3);
    let p = compile_swap(&r, 1).unwrap();
    p.check_dataflow(None).unwrap();
    let rep = verify(&p, &Target::gate(Gate::Swap(1, 3)), &opts()).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_json());
    assert_eq!(rep.measurements, 4 * 3 + 2 * 6);
    let twice = p.then(&p).unwrap();
    assert!(verify(&twice, &Target::identity(), &opts()).unwrap().all_pass());
    assert!(compile_swap(&r, 3).is_err());
}

#[test]
fn ccz_on_unaligned_triples() {
    let r = reg(5);
    for (x, y, z) in [(1, 3, 5), (2, 3, 4)] {
        let p = compile_ccz(&r, x, y, z).unwrap();
        p.check_dataflow(None).unwrap();
        let rep = verify(&p, &Target::gate(Gate::Ccz(x, y, z)), &opts()).unwrap();
        assert!(rep.all_pass(), "CCZ{x}{y}{z}: {:?}", rep.classes.iter().find(|c| c.verdict == Verdict::Fail));
        assert!(rep.branches_listed_or_large());
    }
}

impl BranchReport {
    fn branches_listed_or_large(&self) -> bool {
        self.measurements > 12 || self.classes.iter().all(|c| c.branches.is_some())
    }
}

#[test]
fn deleting_a_correction_fails_exactly_where_it_fires() {
    let r = reg(3);
    let p = compile_h(&r, 3).unwrap();
    let target = Target::gate(Gate::H(3));
    let corrections = p.corrections();
    assert_eq!(corrections.len(), 3);
    for &idx in &corrections {
        let cond = p.instructions()[idx].condition().unwrap();
        let mutant = p.without(idx);
        let rep = verify(&mutant, &target, &opts()).unwrap();
        let mut fires: Vec<String> = (0..8usize)
            .map(|b| format!("{:03b}", b))
            .filter(|s| (s.as_bytes()[cond.bit] == b'1') == cond.value)
            .collect();
        fires.sort();
        assert_eq!(rep.failing_branches().unwrap(), fires, "correction at {idx}");
        let naive = verify_naive(&mutant, &target, &opts(), 8).unwrap();
        assert_eq!(naive.failing_branches().unwrap(), fires);
        assert!(rep.classes.iter().filter(|c| c.verdict == Verdict::Fail).all(|c| c.failing_input.is_some()));
    }
}

#[test]
fn merged_walk_agrees_with_naive_on_mutants() {
    // every single deletion of a compiled H1 program, both walks
    let r = reg(3);
    let p = compile_h(&r, 1).unwrap();
    let target = Target::gate(Gate::H(1));
    for idx in 0..p.len() {
        let m = p.without(idx);
        let (a, b) = (verify(&m, &target, &opts()), verify_naive(&m, &target, &opts(), 8));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a.failing_branches(), b.failing_branches(), "deletion {idx}");
                assert_eq!(a.passed, b.passed);
            }
            (Err(a), Err(b)) => assert_eq!(a, b),
            (a, b) => panic!("deletion {idx}: walks disagree: {:?} vs {:?}", a.map(|r| r.passed), b.map(|r| r.passed)),
        }
    }
}

#[test]
fn reset_of_live_data_is_caught() {
    let r = reg(3);
    let p = Program::from_parts(r, vec![Instruction::PrepZ { qubit: 0 }], vec![], vec![]).unwrap();
    assert!(matches!(verify(&p, &Target::identity(), &opts()), Err(CompileError::PrepOnEntangled { .. })));
    assert!(matches!(p.check_dataflow(None), Err(CompileError::Dataflow { index: 0, .. })));
}

#[test]
fn measuring_data_outside_a_gadget_is_a_dataflow_error() {
    let r = reg(3);
    let p = Program::from_parts(r, vec![Instruction::MeasZ { qubit: 1, bit: 0 }], vec!["m0".into()], vec![]).unwrap();
    assert!(matches!(p.check_dataflow(None), Err(CompileError::Dataflow { .. })));
    let rep = verify(&p, &Target::identity(), &opts()).unwrap();
    assert!(!rep.all_pass());
}

#[test]
fn condition_before_measurement_rejected() {
    let r = reg(3);
    let ins = vec![Instruction::PauliX { qubit: 0, cond: Some(Condition { bit: 0, value: true }) }];
    assert!(Program::from_parts(r, ins, vec!["m0".into()], vec![]).is_err());
    let e = Program::from_text("register 3\nx 1 if m0\n").unwrap_err();
    assert!(matches!(e, CompileError::Parse { line: 2, .. }));
}

#[test]
fn text_round_trip() {
    let r = reg(5);
    for p in [compile_h(&r, 2).unwrap(), compile_ccz(&r, 1, 2, 5).unwrap(), Program::new(r)] {
        let text = p.to_text();
        let back = Program::from_text(&text).unwrap();
        assert_eq!(back, p, "{text}");
    }
    let text = compile_h(&reg(3), 3).unwrap().to_text();
    assert!(text.starts_with("register 3\nbegin h 3 a\nprep_x a\ncz a\nmeas_x 3 -> m0\nx a if m0\nend\n"), "{text}");
}

#[test]
fn parse_errors_carry_lines() {
    for (text, line) in [
        ("register 4\n", 1),
        ("prep_z a\n", 1),
        ("register 3\nprep_z c\n", 2),
        ("register 3\n\ncz 3\n", 3),
        ("register 3\nbraid_cnot 2\n", 2),
        ("register 3\nmeas_x 1 -> m\nmeas_x 2 -> m\n", 3),
        ("register 3\nend\n", 2),
    ] {
        match Program::from_text(text) {
            Err(CompileError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn cap_is_enforced() {
    let r = reg(11);
    let p = Program::new(r);
    assert!(matches!(verify(&p, &Target::identity(), &opts()), Err(CompileError::CapExceeded { qubits: 13, cap: 12 })));
}

#[test]
fn gate_specs_parse() {
    assert_eq!("h:3".parse::<GateSpec>().unwrap(), GateSpec::H(3));
    assert_eq!("ccz:1,2,5".parse::<GateSpec>().unwrap(), GateSpec::Ccz(1, 2, 5));
    assert_eq!("swap:1".parse::<GateSpec>().unwrap(), GateSpec::Swap(1));
    assert!("cnot:1,2".parse::<GateSpec>().is_err());
    assert!(compile_ccz(&reg(3), 1, 1, 2).is_err());
    assert!(compile_h(&reg(3), 4).is_err());
}

#[test]
fn report_json_shape() {
    let p = compile_h(&reg(3), 3).unwrap();
    let rep = verify(&p, &Target::gate(Gate::H(3)), &opts()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(v["total_branches"], "8");
    assert_eq!(v["measurements"], 3);
    assert_eq!(v["classes"][0]["verdict"], "pass");
    assert_eq!(v["classes"][0]["branches"].as_array().unwrap().len(), 8);
}

#[test]
fn literal_h2_order_reads_an_empty_ancilla() {
    // H_b3 H_32 H_a3 H_3b H_ab I_2b applied right to left: H_ab starts from
    // `a` while the state sits on `b`
    let r = reg(3);
    let (t, a, b) = (r.threaded(), r.a(), r.b());
    let mut pb = ProgramBuilder::new(r);
    i_gadget(&mut pb, 1, b).unwrap();
    for (x, y) in [(a, b), (t, b), (a, t), (t, 1), (b, t)] {
        h_gadget(&mut pb, x, y).unwrap();
    }
    let p = pb.finish();
    assert!(matches!(p.check_dataflow(None), Err(CompileError::Dataflow { .. })));
    assert!(!matches!(verify(&p, &Target::gate(Gate::H(2)), &opts()), Ok(rep) if rep.all_pass()));
}
