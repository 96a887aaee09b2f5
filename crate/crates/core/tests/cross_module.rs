//! Checks that tie separate layers together: input files against built-ins,
//! the abstract hole scheme against the microscopic braid.

use std::path::PathBuf;

use topobraid::anyon::clifford_eligibility;
use topobraid::deformation::{move_hole, run_braid, BraidOptions, DeformationError};
use topobraid::format::{parse_gate, parse_lattice, parse_model, parse_scheme};
use topobraid::lattice::build_planar_code;
use topobraid::pauli::{CliffordTableau, Pauli, PauliOperator};
use topobraid::scheme::{generate_braid_group, hole_2d, twist_2d_surface};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn run_file(name: &str) -> Result<(CliffordTableau, Option<CliffordTableau>), DeformationError> {
    let doc = parse_lattice(&data(name)).unwrap();
    let lc = build_planar_code(&doc.spec).unwrap().with_geometric_logicals().unwrap();
    let req = doc.braid.unwrap();
    let script = move_hole(&lc.lattice, &lc.holes, req.hole, &req.path)?;
    let opts = BraidOptions { distance_floor: req.distance_floor, checkpoint_every: None };
    let out = run_braid(&lc, &script, &opts)?;
    let k = out.tableau.num_qubits();
    Ok((out.tableau, req.expected.map(|e| parse_gate(&e, k).unwrap())))
}

#[test]
fn lattice_files_give_their_expected_gates() {
    for f in ["hole_cnot.toml", "hole_out_and_back.toml"] {
        let (got, want) = run_file(f).unwrap();
        assert!(got.equals_up_to_phase(&want.unwrap()), "{f}: {got}");
    }
    assert!(matches!(run_file("hole_displaced.toml"), Err(DeformationError::ConfigurationNotRestored)));
}

/// The abstract two-hole scheme and the lattice braid agree on the hole
/// qubits, and the braid leaves the patch qubit alone.
#[test]
fn hole_scheme_matches_lattice_braid() {
    let (lattice, _) = run_file("hole_cnot.toml").unwrap();
    let s = hole_2d().unwrap();
    let abstract_ = s.setup.braid_action(&s.moves[0]).unwrap();
    assert_eq!(abstract_.num_qubits(), 2);
    let embedded = abstract_.embed(3, &[1, 2]);
    assert!(lattice.equals_up_to_phase(&embedded), "{lattice} vs {embedded}");
    let x0 = PauliOperator::single(3, 0, Pauli::X);
    assert!(lattice.conjugate(&x0).unwrap().same_up_to_phase(&x0));
}

#[test]
fn scheme_file_matches_builtin_twists() {
    let file = parse_scheme(&data("twists_2d.toml")).unwrap();
    let builtin = twist_2d_surface().unwrap();
    let order = |s: &topobraid::scheme::Scheme| generate_braid_group(&s.setup, &s.moves, 1000).unwrap().group.order;
    assert_eq!(order(&file), 24);
    assert_eq!(order(&file), order(&builtin));
    for (a, b) in [("s", "exchange(tl,bl)"), ("h", "exchange(bl,tr)")] {
        let ta = file.setup.braid_action(file.find_move(a).unwrap()).unwrap();
        let tb = builtin.setup.braid_action(builtin.find_move(b).unwrap()).unwrap();
        assert_eq!(ta, tb, "{a} vs {b}");
    }
}

#[test]
fn model_file_negative_control() {
    let b = parse_model(&data("bilayer_swap.toml")).unwrap();
    let r = clifford_eligibility(&b.model, b.wall("swap").unwrap()).unwrap();
    assert!(!r.eligible);
    assert!(r.reason.unwrap().contains("fermion"));
}
