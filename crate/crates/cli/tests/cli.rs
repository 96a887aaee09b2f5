use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topobraid")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn compile_h3_verifies_all_branches() {
    let out = run(&["compile", "--n", "3", "--gate", "h:3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["total_branches"], "8");
    assert_eq!(v["report"]["passed"], "8");
    assert_eq!(v["resources"]["measurements"], 3);
}

#[test]
fn compile_ccz_at_n5_passes() {
    let out = run(&["compile", "--n", "5", "--gate", "ccz:1,2,5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["failed"], "0");
}

#[test]
fn even_n_is_a_usage_error() {
    let out = run(&["compile", "--n", "4", "--gate", "h:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn no_verify_skips_the_report() {
    let out = run(&["compile", "--n", "3", "--gate", "swap:1", "--no-verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v.get("report").is_none());
    assert!(v["program"].as_str().unwrap().starts_with("register 3"));
}

#[test]
fn eligibility_exit_codes() {
    let ok = run(&["model-check", "--model", "surface_2d", "--wall", "hadamard"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["report"]["witness"]["a"], "em");
    let no = run(&["model-check", "--model", "surface_2d", "--wall", "identity"]);
    assert_eq!(no.status.code(), Some(1));
    let lw = run(&["model-check", "--model", "levin_wen_3d", "--wall", "cz"]);
    assert_eq!(json(&lw)["report"]["witness"]["twist_dim"], 0);
    let ambiguous = run(&["model-check", "--model", "surface_2d"]);
    assert_eq!(ambiguous.status.code(), Some(2));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = std::env::temp_dir().join(format!("topobraid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "schema = \"topobraid/1\"\n[model]\nname = \"x\"\ndimension = = 2\n").unwrap();
    let out = run(&["model-check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scheme_braid_orders() {
    let out = run(&["scheme-braid", "--scheme", "twist_2d_surface"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["group"]["group"]["order"], 24);
    let sd = run(&["scheme-braid", "--scheme", "selfdual_surface(4)"]);
    assert_eq!(json(&sd)["group"]["group"]["order"], 24);
    let none = run(&["scheme-braid", "--scheme", "twist_2d_surface", "--moves"]);
    assert_eq!(json(&none)["group"]["group"]["order"], 1);
    let file = run(&["scheme-braid", "--input", &data("twists_2d.toml"), "--moves", "s,h"]);
    assert_eq!(json(&file)["group"]["group"]["order"], 24);
}

#[test]
fn deform_run_outcomes() {
    let cnot = run(&["deform-run", "--input", &data("hole_cnot.toml")]);
    assert_eq!(cnot.status.code(), Some(0));
    assert_eq!(json(&cnot)["pass"], true);
    let back = run(&["deform-run", "--input", &data("hole_out_and_back.toml")]);
    assert_eq!(back.status.code(), Some(0));
    let displaced = run(&["deform-run", "--input", &data("hole_displaced.toml")]);
    assert_eq!(displaced.status.code(), Some(1));
    assert!(json(&displaced)["error"].as_str().unwrap().contains("configuration not restored"));
}

#[test]
fn lattice_build_counts() {
    let out = run(&["lattice-build", "--width", "3", "--height", "3", "--bound", "3"]);
    let v = json(&out);
    assert_eq!(v["validation"]["k"], 1);
    assert_eq!(v["distance"], 3);
    let holes = run(&["lattice-build", "--input", &data("hole_cnot.toml")]);
    assert_eq!(json(&holes)["validation"]["k"], 3);
}

#[test]
fn reports_are_byte_stable_and_can_go_to_a_file() {
    let a = run(&["compile", "--n", "3", "--gate", "ccz:1,2,3"]);
    let b = run(&["compile", "--n", "3", "--gate", "ccz:1,2,3"]);
    assert_eq!(a.stdout, b.stdout);
    let path = std::env::temp_dir().join(format!("topobraid-out-{}.json", std::process::id()));
    let c = run(&["compile", "--n", "3", "--gate", "ccz:1,2,3", "--out", path.to_str().unwrap()]);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_file(&path).ok();
}
