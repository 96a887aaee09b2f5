//! Acceptance checks. Each test prints one `PASS`/`FAIL` line with its
//! measured runtime and pinned bound, then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topobraid::anyon::{builtin, clifford_eligibility};
use topobraid::compiler::{
    compile_ccz, compile_h, compile_swap, verify, verify_naive, Gate, Register, Target, VerifyOptions,
};
use topobraid::deformation::{out_and_back, smallest_cnot_braid, BraidOptions};
use topobraid::lattice::{build_planar_code, HoleSpec, LatticeSpec};
use topobraid::pauli::{group_elements, CliffordTableau, GroupMode, Pauli, PauliOperator};
use topobraid::scheme::{
    builtin_scheme, generate_braid_group, levin_wen_3d, selfdual_surface, twist_2d_surface, universal_register,
};

/// Writes the criterion line straight to stdout so it shows up even when
/// the test harness captures output.
fn report(id: u8, title: &str, bound: Duration, start: Instant, failures: &[String]) {
    let took = start.elapsed();
    let mut problems = failures.to_vec();
    if took > bound {
        problems.push(format!("took {:.2?}, bound {:.0?}", took, bound));
    }
    let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "acceptance {id}: {verdict} {title} ({took:.2?}, bound {bound:.0?})").unwrap();
    for p in &problems {
        writeln!(out, "    {p}").unwrap();
    }
    drop(out);
    assert!(problems.is_empty(), "criterion {id}: {problems:?}");
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn all_branches_pass(rep: &topobraid::compiler::BranchReport) -> bool {
    rep.all_pass() && &rep.passed + &rep.unreachable == BigUint::from(1u8) << rep.measurements
}

#[test]
fn criterion_1_twist_schemes_generate_the_single_qubit_clifford_group() {
    let bound = Duration::from_secs(1);
    let s_gate = CliffordTableau::phase_gate(1, 0);
    let h_gate = CliffordTableau::hadamard(1, 0);
    let cases = [
        ("twist_2d_surface", twist_2d_surface().unwrap(), "exchange(tl,bl)", "exchange(bl,tr)"),
        ("selfdual_surface(4)", selfdual_surface(4).unwrap(), "exchange(ol,il)", "exchange(il,or)"),
        ("levin_wen_3d", levin_wen_3d().unwrap(), "exchange(tl,bl)", "exchange(bl,tr)"),
    ];
    let total = Instant::now();
    let mut failures = Vec::new();
    for (name, scheme, s_move, h_move) in cases {
        let start = Instant::now();
        let action = |m: &str| scheme.setup.braid_action(scheme.find_move(m).unwrap()).unwrap();
        check(&mut failures, action(s_move).equals_up_to_phase(&s_gate), format!("{name}: {s_move} is not S"));
        check(&mut failures, action(h_move).equals_up_to_phase(&h_gate), format!("{name}: {h_move} is not H"));
        let r = generate_braid_group(&scheme.setup, &scheme.moves, 10_000).unwrap();
        check(&mut failures, r.group.order == 24 && !r.group.partial, format!("{name}: order {}", r.group.order));
        let took = start.elapsed();
        check(&mut failures, took <= bound, format!("{name} took {took:.2?}, bound {bound:.0?} per scheme"));
    }
    report(1, "twist schemes: S and H moves, group order 24", bound * 3, total, &failures);
}

#[test]
fn criterion_2_eligibility() {
    let start = Instant::now();
    let mut failures = Vec::new();
    // (model, wall, witness, twist dimension)
    for (m, w, witness, dim) in
        [("surface_2d", "hadamard", "em", 0), ("selfdual_4d", "hadamard", "em", 2), ("levin_wen_3d", "cz", "e", 0)]
    {
        let b = builtin::model(m).unwrap();
        let r = clifford_eligibility(&b.model, b.wall(w).unwrap()).unwrap();
        let got = r.witness.as_ref().map(|x| (x.a.as_str(), x.twist_dim));
        check(
            &mut failures,
            r.eligible && got == Some((witness, dim)),
            format!("{m}/{w}: {got:?}, reason {:?}", r.reason),
        );
    }
    for (m, w) in [("surface_2d", "identity"), ("levin_wen_3d", "identity"), ("surface_2d_x2", "swap")] {
        let b = builtin::model(m).unwrap();
        let r = clifford_eligibility(&b.model, b.wall(w).unwrap()).unwrap();
        check(&mut failures, !r.eligible, format!("{m}/{w} should not be eligible"));
    }
    report(
        2,
        "eligibility: em/e witnesses, dims 0/2/0, negative controls rejected",
        Duration::from_secs(1),
        start,
        &failures,
    );
}

#[test]
fn criterion_3_hole_braid_on_smallest_lattice() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut size = String::from("no lattice found");
    match smallest_cnot_braid(2, 8) {
        None => failures.push("no lattice up to 8x8 keeps distance 2 through the braid".into()),
        Some((sc, out)) => {
            // run_braid errors out if k changes at any step
            check(&mut failures, out.tableau.equals_up_to_phase(&sc.expected), format!("braid gave {}", out.tableau));
            check(&mut failures, out.min_distance == Some(2), format!("min distance {:?}", out.min_distance));
            let spec = sc.code.lattice.spec();
            let (w, h) = (spec.width, spec.height);
            let centre = (sc.code.holes[1].region.row, sc.code.holes[1].region.col);
            let back = out_and_back(w, h, centre)
                .and_then(|s| s.run(&BraidOptions { distance_floor: Some(2), checkpoint_every: None }));
            match back {
                Ok(o) => check(
                    &mut failures,
                    o.tableau.equals_up_to_phase(&CliffordTableau::identity(3)),
                    "out-and-back is not identity",
                ),
                Err(e) => failures.push(format!("out-and-back: {e}")),
            }
            size = format!("{w}x{h} patch, {} qubits, {} steps", sc.code.lattice.num_qubits(), out.steps);
        }
    }
    let title = format!("rough-around-smooth hole braid is CNOT, out-and-back is identity ({size})");
    report(3, &title, Duration::from_secs(30), start, &failures);
}

#[test]
fn criterion_4_universal_scheme_n3() {
    let start = Instant::now();
    let reg = Register::new(3).unwrap();
    let opts = VerifyOptions::default();
    let mut failures = Vec::new();
    for (q, m) in [(1, 6), (2, 6), (3, 3)] {
        let p = compile_h(&reg, q).unwrap();
        check(&mut failures, p.num_measurements() == m, format!("H{q}: {} measurements", p.num_measurements()));
        let target = Target::gate(Gate::H(q));
        let rep = verify(&p, &target, &opts).unwrap();
        check(
            &mut failures,
            all_branches_pass(&rep),
            format!("H{q}: {} of {} branches fail", rep.failed, rep.total_branches),
        );
        // second route: one dense run per branch
        let naive = verify_naive(&p, &target, &opts, 12).unwrap();
        check(
            &mut failures,
            naive.all_pass() && naive.total_branches == rep.total_branches,
            format!("H{q}: per-branch walk disagrees"),
        );
    }
    let p = compile_ccz(&reg, 1, 2, 3).unwrap();
    let rep = verify(&p, &Target::gate(Gate::Ccz(1, 2, 3)), &opts).unwrap();
    check(&mut failures, all_branches_pass(&rep), "CCZ(1,2,3) fails");
    report(
        4,
        "N=3: H1, H2, H3 (6/6/3 measurements) and CCZ(1,2,3) verify in every branch",
        Duration::from_secs(60),
        start,
        &failures,
    );
}

#[test]
fn criterion_5_universal_scheme_n5() {
    let start = Instant::now();
    let reg = Register::new(5).unwrap();
    let opts = VerifyOptions::default();
    let mut failures = Vec::new();

    let p = compile_ccz(&reg, 1, 2, 5).unwrap();
    let rc = p.resource_count();
    // isolate pair 1 with two I gadgets around two global CCZ applications
    let shape = (rc.i_gadgets, rc.h_gadgets, rc.global_transversal, rc.braids, rc.measurements);
    check(&mut failures, shape == (2, 0, 2, 2, 2), format!("CCZ(1,2,5) resources {shape:?}"));
    let rep = verify(&p, &Target::gate(Gate::Ccz(1, 2, 5)), &opts).unwrap();
    check(&mut failures, all_branches_pass(&rep), "CCZ(1,2,5) fails");
    let naive = verify_naive(&p, &Target::gate(Gate::Ccz(1, 2, 5)), &opts, 12).unwrap();
    check(&mut failures, naive.all_pass(), "CCZ(1,2,5) per-branch walk fails");

    let p = compile_ccz(&reg, 1, 3, 5).unwrap();
    let rep = verify(&p, &Target::gate(Gate::Ccz(1, 3, 5)), &opts).unwrap();
    check(
        &mut failures,
        all_branches_pass(&rep),
        format!("CCZ(1,3,5): {} of {} branches fail", rep.failed, rep.total_branches),
    );

    let p = compile_swap(&reg, 1).unwrap();
    let rep = verify(&p, &Target::gate(Gate::Swap(1, 5)), &opts).unwrap();
    check(
        &mut failures,
        all_branches_pass(&rep),
        format!("SWAP(1,5): {} of {} branches fail", rep.failed, rep.total_branches),
    );
    report(
        5,
        "N=5: CCZ(1,2,5), CCZ(1,3,5) by SWAP conjugation, SWAP(1) verify in every branch",
        Duration::from_secs(600),
        start,
        &failures,
    );
}

/// Independent look at a tableau: images Hermitian, canonical commutation
/// relations preserved.
fn symplectic_violation(t: &CliffordTableau) -> Option<String> {
    let n = t.num_qubits();
    let imgs: Vec<&PauliOperator> = (0..n).flat_map(|q| [t.x_image(q), t.z_image(q)]).collect();
    if let Some(p) = imgs.iter().find(|p| !p.is_hermitian() || p.num_qubits() != n) {
        return Some(format!("image {p} is not a Hermitian {n}-qubit Pauli"));
    }
    for i in 0..2 * n {
        for j in 0..2 * n {
            let paired = i != j && i / 2 == j / 2;
            if imgs[i].commutes_with(imgs[j]) == paired {
                return Some(format!("images {i} and {j} have the wrong commutation"));
            }
        }
    }
    None
}

#[test]
fn criterion_6_random_braid_compositions() {
    let start = Instant::now();
    let names = [
        "twist_2d_surface",
        "selfdual_surface(4)",
        "selfdual_surface(6)",
        "levin_wen_3d",
        "general(levin_wen_3d, cz)",
        "hole_2d",
        "universal_register(3)",
        "universal_register(5)",
    ];
    let schemes: Vec<_> = names.iter().map(|n| builtin_scheme(n).unwrap()).collect();
    let actions: Vec<Vec<CliffordTableau>> =
        schemes.iter().map(|s| s.moves.iter().map(|m| s.setup.braid_action(m).unwrap()).collect()).collect();
    let groups: Vec<Vec<CliffordTableau>> =
        actions.iter().map(|a| group_elements(a, 100_000, GroupMode::ModGlobalPhase).unwrap().0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let trials = 1000;
    for trial in 0..trials {
        let s = trial % schemes.len();
        let n = schemes[s].setup.num_qubits();
        let len = rng.gen_range(1..=12);
        let mut t = CliffordTableau::identity(n);
        for _ in 0..len {
            let m = &actions[s][rng.gen_range(0..actions[s].len())];
            t = t.then(m).unwrap();
        }
        if let Some(v) = symplectic_violation(&t) {
            failures.push(format!("{} trial {trial}: {v}", names[s]));
            continue;
        }
        // the logical Pauli group maps to itself: random products conjugate
        // to Hermitian Paulis and the map respects products
        let terms = |rng: &mut ChaCha8Rng| -> PauliOperator {
            let t: Vec<(usize, Pauli)> =
                (0..n).map(|q| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])).collect();
            PauliOperator::from_sparse(n, &t).unwrap()
        };
        let (p, q) = (terms(&mut rng), terms(&mut rng));
        let (cp, cq, cpq) = (t.conjugate(&p).unwrap(), t.conjugate(&q).unwrap(), t.conjugate(&p.product(&q)).unwrap());
        if !cp.is_hermitian() || cpq != cp.product(&cq) {
            failures.push(format!("{} trial {trial}: conjugation is not a homomorphism", names[s]));
        }
        if !groups[s].iter().any(|g| g == &t) {
            failures.push(format!("{} trial {trial}: composition outside the generated group", names[s]));
        }
    }
    failures.truncate(10);
    report(
        6,
        &format!("{trials} random move compositions over {} schemes, zero violations", names.len()),
        Duration::from_secs(60),
        start,
        &failures,
    );
}

#[test]
fn criterion_7_mutation_sensitivity() {
    let start = Instant::now();
    let reg = Register::new(3).unwrap();
    let p = compile_h(&reg, 3).unwrap();
    let target = Target::gate(Gate::H(3));
    let opts = VerifyOptions::default();
    let mut failures = Vec::new();
    let m = p.num_measurements();
    let corrections = p.corrections();
    check(&mut failures, !corrections.is_empty(), "no conditional corrections");
    for idx in corrections {
        let cond = p.instructions()[idx].condition().unwrap();
        let rep = verify(&p.without(idx), &target, &opts).unwrap();
        let fires: Vec<String> = (0..1usize << m)
            .map(|b| format!("{b:0m$b}"))
            .filter(|s| (s.as_bytes()[cond.bit] == b'1') == cond.value)
            .collect();
        let got = rep.failing_branches().unwrap_or_default();
        check(&mut failures, got == fires, format!("deleting instruction {idx}: fails on {got:?}, expected {fires:?}"));
    }
    report(
        7,
        "deleting any correction of H3 fails exactly the branches where it fires",
        Duration::from_secs(10),
        start,
        &failures,
    );
}

#[test]
fn criterion_8_encoding_counts() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let k = |spec: LatticeSpec| build_planar_code(&spec).unwrap().code.num_logical();
    check(&mut failures, k(LatticeSpec::planar(5, 5)) == 1, "planar patch");
    // on a patch with boundaries every hole adds one qubit
    let holes = [HoleSpec::smooth(1, 1), HoleSpec::rough(2, 5), HoleSpec::smooth(3, 3)];
    let mut spec = LatticeSpec::planar(7, 7);
    for (i, h) in holes.iter().enumerate() {
        spec = spec.with_hole(*h);
        let got = k(spec.clone());
        check(&mut failures, got == 2 + i, format!("patch with {} holes: k = {got}", i + 1));
    }
    // on a closed surface the first hole of a kind only turns a handle into
    // a boundary; each further one adds a qubit
    let base = k(LatticeSpec::toric(4, 4));
    let mut spec = LatticeSpec::toric(4, 4);
    for (i, h) in [HoleSpec::smooth(0, 0), HoleSpec::smooth(2, 2)].iter().enumerate() {
        spec = spec.with_hole(*h);
        let got = k(spec.clone());
        check(&mut failures, got == base + i, format!("torus with {} smooth holes: k = {got}, base {base}", i + 1));
    }
    check(&mut failures, universal_register(3).unwrap().setup.qubit_basis().unwrap().len() == 5, "universal register");
    for s in [twist_2d_surface(), selfdual_surface(4), levin_wen_3d()] {
        let s = s.unwrap();
        check(&mut failures, s.setup.qubit_basis().unwrap().len() == 1, s.setup.name.to_string());
    }
    report(
        8,
        "encoding counts: patch 1, +1 per hole, universal register 5, twist schemes 1",
        Duration::from_secs(5),
        start,
        &failures,
    );
}
