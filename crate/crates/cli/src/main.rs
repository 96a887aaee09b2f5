//! `topobraid` command-line front end.
//!
//! Exit codes: 0 success (eligible, verified, braid as expected), 1 negative
//! verdict, 2 usage or input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use topobraid::anyon::builtin::{self, ModelBundle};
use topobraid::anyon::clifford_eligibility;
use topobraid::compiler::{compile_gate, verify, GateSpec, Register, VerifyOptions};
use topobraid::deformation::{move_hole, run_braid, BraidOptions, BraidScript};
use topobraid::format::{parse_gate, parse_lattice, parse_model, parse_scheme};
use topobraid::lattice::{build_planar_code, distance_bruteforce, validate, Boundary, CodeError, Lattice, LatticeSpec};
use topobraid::pauli::CliffordTableau;
use topobraid::scheme::{builtin_scheme, check_exchange_squares, generate_braid_group, Scheme};

#[derive(Parser)]
#[command(name = "topobraid", version, about = "Defect braiding checks, hole-braid simulation and gadget compilation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether braiding twists of a domain wall generates the Clifford group.
    ModelCheck(ModelCheck),
    /// Logical action of a defect scheme's braid moves and the group they generate.
    SchemeBraid(SchemeBraid),
    /// Build a surface-code patch, validate it and report k and distance.
    LatticeBuild(LatticeBuild),
    /// Move a hole by code deformation and report the induced logical gate.
    DeformRun(DeformRun),
    /// Compile a gate into the measurement-based gadget scheme and verify it.
    Compile(Compile),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelCheck {
    /// Model file (`[model]` and `[[walls]]`).
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    input: Option<PathBuf>,
    /// Built-in model, e.g. `surface_2d`, `levin_wen_3d`, `selfdual_4d`.
    #[arg(long)]
    model: Option<String>,
    /// Wall to check; may be omitted when the model declares a single wall.
    #[arg(long)]
    wall: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SchemeBraid {
    /// Scheme file.
    #[arg(long, conflicts_with = "scheme", required_unless_present = "scheme")]
    input: Option<PathBuf>,
    /// Built-in scheme, e.g. `twist_2d_surface` or `selfdual_surface(4)`.
    #[arg(long)]
    scheme: Option<String>,
    /// Restrict to these moves, comma separated; with no value, to none.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    moves: Option<String>,
    /// Stop enumerating the group after this many elements.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LatticeBuild {
    /// Lattice file; otherwise a plain planar patch of the given size.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 3, conflicts_with = "input")]
    width: usize,
    #[arg(long, default_value_t = 3, conflicts_with = "input")]
    height: usize,
    /// Search for the distance up to this weight.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DeformRun {
    /// Lattice file with a `[braid]` section.
    #[arg(long)]
    input: PathBuf,
    /// Override the file's distance floor.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Compile {
    /// Number of data qubits (odd, at least 3).
    #[arg(long)]
    n: usize,
    /// `h:q`, `ccz:x,y,z` or `swap:x`.
    #[arg(long)]
    gate: String,
    /// Largest number of branches listed individually in the report.
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    branch_cap: u64,
    /// Largest number of simulated qubits (N + 2).
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    qubit_cap: u64,
    /// Emit the program and resource counts only.
    #[arg(long)]
    no_verify: bool,
    #[command(flatten)]
    output: Output,
}

/// Either a finished report with its verdict, or an input/usage error.
enum Outcome {
    Report { json: Value, text: String, ok: bool },
    Usage(String),
}

fn usage(e: impl std::fmt::Display) -> Outcome {
    Outcome::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn tableau_json(t: &CliffordTableau) -> Value {
    let rows: Vec<Value> = (0..t.num_qubits())
        .map(|q| json!({ "qubit": q, "x": t.x_image(q).to_string(), "z": t.z_image(q).to_string() }))
        .collect();
    Value::Array(rows)
}

fn model_check(args: &ModelCheck) -> Result<Outcome, Outcome> {
    let bundle: ModelBundle = match (&args.input, &args.model) {
        (Some(p), _) => {
            let text = read(p)?;
            parse_model(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        (None, Some(name)) => builtin::model(name).map_err(usage)?,
        (None, None) => return Err(usage("give --input or --model")),
    };
    let wall = match &args.wall {
        Some(w) => bundle.wall(w).map_err(usage)?,
        None if bundle.walls.len() == 1 => &bundle.walls[0],
        None => {
            let names: Vec<&str> = bundle.walls.iter().map(|w| w.name()).collect();
            return Err(usage(format!("model declares several walls, pick one with --wall: {}", names.join(", "))));
        }
    };
    let report = clifford_eligibility(&bundle.model, wall).map_err(usage)?;
    let json = json!({
        "command": "model-check",
        "dimension": bundle.model.dimension(),
        "generators": bundle.model.num_generators(),
        "report": serde_json::to_value(&report).expect("report serialises"),
    });
    Ok(Outcome::Report { json, text: format!("{report}\n"), ok: report.eligible })
}

/// Splits on commas outside parentheses, so `exchange(a,b),h` is two names.
fn split_top_level(list: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in list.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(list[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(list[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

fn scheme_braid(args: &SchemeBraid) -> Result<Outcome, Outcome> {
    let mut scheme: Scheme = match (&args.input, &args.scheme) {
        (Some(p), _) => {
            let text = read(p)?;
            parse_scheme(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        (None, Some(name)) => builtin_scheme(name).map_err(usage)?,
        (None, None) => return Err(usage("give --input or --scheme")),
    };
    if let Some(list) = &args.moves {
        let mut picked = Vec::new();
        for n in split_top_level(list) {
            picked.push(scheme.find_move(n).cloned().ok_or_else(|| usage(format!("no move named {n:?}")))?);
        }
        scheme.moves = picked;
    }
    let setup = &scheme.setup;
    let mut moves = Vec::new();
    let mut text = String::new();
    writeln!(text, "scheme {}, encoded qubits: {}", setup.name, setup.num_qubits()).unwrap();
    for mv in &scheme.moves {
        let t = setup.braid_action(mv).map_err(usage)?;
        moves.push(json!({ "name": mv.name, "tableau": tableau_json(&t) }));
        writeln!(text, "\n{}:", mv.name).unwrap();
        for line in t.to_string().lines() {
            writeln!(text, "  {line}").unwrap();
        }
    }
    let group = generate_braid_group(setup, &scheme.moves, args.bound as usize).map_err(usage)?;
    let squares = check_exchange_squares(&scheme).map_err(usage)?;
    writeln!(
        text,
        "\ngroup order {}{} (mod global phase), all Clifford: {}",
        group.group.order,
        if group.group.partial { "+ (bound reached)" } else { "" },
        group.all_clifford
    )
    .unwrap();
    for (ex, mo, ok) in &squares {
        writeln!(text, "{ex} twice {} {mo}", if *ok { "equals" } else { "DIFFERS FROM" }).unwrap();
    }
    let ok = group.all_clifford && squares.iter().all(|s| s.2);
    let json = json!({
        "command": "scheme-braid",
        "scheme": setup.name,
        "qubits": setup.num_qubits(),
        "moves": moves,
        "group": serde_json::to_value(&group).expect("report serialises"),
        "exchange_squares": squares.iter().map(|(e, m, ok)| json!({ "exchange": e, "monodromy": m, "equal": ok })).collect::<Vec<_>>(),
    });
    Ok(Outcome::Report { json, text, ok })
}

/// One character per doubled-coordinate site: `+` vertex, `-`/`|` edge
/// qubit, `R` removed vertex, `S` removed plaquette.
fn sketch(lattice: &Lattice, spec: &LatticeSpec) -> String {
    let removed: Vec<_> = spec.holes.iter().flat_map(|h| h.sites()).collect();
    let (r0, r1) = lattice.row_range();
    let (c0, c1) = lattice.col_range();
    let mut s = String::new();
    for r in r0..=r1 {
        for c in c0..=c1 {
            let ch = match (r.rem_euclid(2), c.rem_euclid(2)) {
                _ if removed.contains(&(r, c)) => {
                    if r % 2 == 0 {
                        'R'
                    } else {
                        'S'
                    }
                }
                (0, 0) => '+',
                (1, 1) => ' ',
                (0, _) => '-',
                _ => '|',
            };
            s.push(ch);
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
    }
    s
}

fn lattice_build(args: &LatticeBuild) -> Result<Outcome, Outcome> {
    let spec = match &args.input {
        Some(p) => parse_lattice(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?.spec,
        None => LatticeSpec::planar(args.width, args.height),
    };
    let lc = build_planar_code(&spec).map_err(usage)?;
    let report = validate(&lc.code);
    let distance = match args.bound {
        None => Value::Null,
        Some(b) => match distance_bruteforce(&lc.code, b as usize) {
            Ok(d) => json!(d),
            Err(CodeError::NotFound { searched }) => json!(format!(">{searched}")),
            Err(e) => return Err(usage(e)),
        },
    };
    let side = |b: Boundary| b.to_string();
    let mut text = String::new();
    writeln!(
        text,
        "{}x{} {} patch, {} holes: n = {}, k = {}, valid = {}",
        spec.width,
        spec.height,
        if spec.periodic { "periodic" } else { "planar" },
        spec.holes.len(),
        lc.code.num_qubits(),
        report.k,
        report.valid
    )
    .unwrap();
    if !distance.is_null() {
        writeln!(text, "distance {}", distance.as_str().map(str::to_string).unwrap_or(distance.to_string())).unwrap();
    }
    text.push_str(&sketch(&lc.lattice, &spec));
    let json = json!({
        "command": "lattice-build",
        "width": spec.width,
        "height": spec.height,
        "periodic": spec.periodic,
        "boundaries": { "top": side(spec.top), "bottom": side(spec.bottom), "left": side(spec.left), "right": side(spec.right) },
        "holes": serde_json::to_value(&spec.holes).expect("holes serialise"),
        "qubits": lc.code.num_qubits(),
        "generators": lc.code.generators().len(),
        "validation": serde_json::to_value(&report).expect("report serialises"),
        "distance": distance,
    });
    Ok(Outcome::Report { json, text, ok: report.valid })
}

fn deform_run(args: &DeformRun) -> Result<Outcome, Outcome> {
    let text_in = read(&args.input)?;
    let doc = parse_lattice(&text_in).map_err(|e| usage(format!("{}: {e}", args.input.display())))?;
    let req = doc.braid.ok_or_else(|| usage(format!("{}: no [braid] section", args.input.display())))?;
    let lc = build_planar_code(&doc.spec).and_then(|c| c.with_geometric_logicals()).map_err(usage)?;
    let script = match &req.script {
        Some(s) => BraidScript::from_text(s).map_err(usage)?,
        None => move_hole(&lc.lattice, &lc.holes, req.hole, &req.path).map_err(usage)?,
    };
    let floor = args.bound.map(|b| b as usize).or(req.distance_floor);
    let opts = BraidOptions { distance_floor: floor, checkpoint_every: None };
    let k = lc.code.num_logical();
    let expected = match &req.expected {
        Some(e) => Some(parse_gate(e, k).map_err(usage)?),
        None => None,
    };
    let (json, text, ok) = match run_braid(&lc, &script, &opts) {
        Err(e) => {
            let json = json!({ "command": "deform-run", "steps": script.len(), "error": e.to_string(), "pass": false });
            (json, format!("braid failed: {e}\n"), false)
        }
        Ok(out) => {
            let matches = expected.as_ref().map(|e| out.tableau.equals_up_to_phase(e));
            let mut text = format!("{} steps, k = {k}", out.steps);
            if let Some(d) = out.min_distance {
                write!(text, ", distance >= {d} throughout").unwrap();
            }
            writeln!(text, "\ninduced logical map:\n{}", out.tableau).unwrap();
            if let (Some(e), Some(m)) = (&req.expected, matches) {
                writeln!(text, "expected {e}: {}", if m { "pass" } else { "FAIL" }).unwrap();
            }
            let json = json!({
                "command": "deform-run",
                "steps": out.steps,
                "logical_qubits": k,
                "min_distance": out.min_distance,
                "tableau": tableau_json(&out.tableau),
                "expected": req.expected,
                "pass": matches.unwrap_or(true),
            });
            (json, text, matches.unwrap_or(true))
        }
    };
    Ok(Outcome::Report { json, text, ok })
}

fn compile(args: &Compile) -> Result<Outcome, Outcome> {
    let reg = Register::new(args.n).map_err(usage)?;
    let spec: GateSpec = args.gate.parse().map_err(usage)?;
    let program = compile_gate(&reg, &spec).map_err(usage)?;
    let resources = program.resource_count();
    let mut text = program.to_string();
    writeln!(
        text,
        "\n# {} gadgets ({} H, {} I), {} measurements, {} global transversal, {} braids",
        resources.gadgets(),
        resources.h_gadgets,
        resources.i_gadgets,
        resources.measurements,
        resources.global_transversal,
        resources.braids
    )
    .unwrap();
    let mut json = json!({
        "command": "compile",
        "n": args.n,
        "gate": args.gate,
        "program": program.to_string(),
        "resources": serde_json::to_value(resources).expect("counts serialise"),
    });
    if args.no_verify {
        return Ok(Outcome::Report { json, text, ok: true });
    }
    let opts = VerifyOptions { qubit_cap: args.qubit_cap as usize, list_branches_up_to: args.branch_cap as usize };
    let report = verify(&program, &spec.target(&reg), &opts).map_err(usage)?;
    writeln!(
        text,
        "# verification: {} branches, {} pass, {} fail, {} unreachable",
        report.total_branches, report.passed, report.failed, report.unreachable
    )
    .unwrap();
    for c in report.classes.iter().filter(|c| c.failing_input.is_some()) {
        writeln!(text, "#   branch {} fails on input {}", c.representative, c.failing_input.as_deref().unwrap_or("?"))
            .unwrap();
    }
    json["report"] = serde_json::to_value(&report).expect("report serialises");
    Ok(Outcome::Report { json, text, ok: report.all_pass() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::ModelCheck(a) => (model_check(a), &a.output),
        Command::SchemeBraid(a) => (scheme_braid(a), &a.output),
        Command::LatticeBuild(a) => (lattice_build(a), &a.output),
        Command::DeformRun(a) => (deform_run(a), &a.output),
        Command::Compile(a) => (compile(a), &a.output),
    };
    match result.unwrap_or_else(|e| e) {
        Outcome::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Outcome::Report { json, text, ok } => {
            let body = match output.format {
                Format::Json => serde_json::to_string_pretty(&json).expect("json") + "\n",
                Format::Text => text,
            };
            let written = match &output.out {
                Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
