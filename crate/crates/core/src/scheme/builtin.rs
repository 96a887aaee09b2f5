//! Built-in defect schemes.

use super::{
    BraidMove, Defect, DefectKind, DefectSetup, FormalProduct, MoveKind, PathDescriptor, Relation, RelationKind,
    Scheme, SchemeError, TopoClass,
};
use crate::anyon::builtin::{self, ModelBundle};
use crate::anyon::clifford_eligibility;

pub fn scheme_names() -> Vec<&'static str> {
    vec![
        "twist_2d_surface",
        "selfdual_surface(<2k>)",
        "levin_wen_3d",
        "general(<model>, <wall>)",
        "universal_register(<odd N>)",
        "hole_2d",
    ]
}

/// Resolves a scheme name such as `twist_2d_surface`, `selfdual_surface(4)`,
/// `universal_register(5)` or `general(levin_wen_3d, cz)`.
pub fn builtin_scheme(name: &str) -> Result<Scheme, SchemeError> {
    let name = name.trim();
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| SchemeError::UnknownScheme(name.into()))?;
            (h.trim(), inner.split(',').map(str::trim).collect::<Vec<_>>())
        }
        None => (name, vec![]),
    };
    let int = |s: &str| s.parse::<usize>().map_err(|_| SchemeError::UnknownScheme(name.into()));
    match (head, args.as_slice()) {
        ("twist_2d_surface", []) => twist_2d_surface(),
        ("levin_wen_3d", []) => levin_wen_3d(),
        ("hole_2d", []) => hole_2d(),
        ("selfdual_surface", [d]) => selfdual_surface(int(d)?),
        ("universal_register", []) => universal_register(3),
        ("universal_register", [n]) => universal_register(int(n)?),
        ("general", [m, w]) => general(&builtin::model(m)?, w),
        _ => Err(SchemeError::UnknownScheme(name.into())),
    }
}

/// Two walls of type `wall`, each ending in a pair of twists named
/// `labels[0..2]` and `labels[2..4]`. The first twist of each pair plays the
/// "top"/"outer" role and the second the "bottom"/"inner" one.
fn twist_pair(name: &str, bundle: &ModelBundle, wall: &str, labels: [&str; 4]) -> Result<Scheme, SchemeError> {
    let model = &bundle.model;
    let w = bundle.wall(wall)?;
    let report = clifford_eligibility(model, w)?;
    let Some(wit) = report.witness.clone().filter(|_| report.eligible) else {
        return Err(SchemeError::Ineligible(report.reason.unwrap_or_else(|| format!("{}/{wall}", model.name()))));
    };
    let cond = w.condensable_at_twist();
    let mut defects: Vec<Defect> = labels
        .iter()
        .map(|l| Defect {
            id: l.to_string(),
            kind: DefectKind::Twist,
            dim: wit.twist_dim,
            condensable: cond.clone(),
            wall: Some(wall.to_string()),
        })
        .collect();
    let mut relations = vec![
        Relation { kind: RelationKind::Concentric, a: 0, b: 1 },
        Relation { kind: RelationKind::Concentric, a: 2, b: 3 },
    ];
    if wit.threaded_puncture_required {
        defects.push(Defect {
            id: "p".into(),
            kind: DefectKind::ThreadedPuncture,
            dim: model.dimension() - 1 - wit.twist_dim,
            condensable: vec![],
            wall: None,
        });
        relations.extend((0..4).map(|t| Relation { kind: RelationKind::Threads, a: 4, b: t }));
    }
    // X̄ moves the fermion between the walls; Z̄ takes its partner around one wall
    let x = PathDescriptor::new(wit.a_exc, TopoClass::Connects(0, 2));
    let z = PathDescriptor::new(wit.b_exc, TopoClass::EnclosesPair(0, 1));
    let l = |i: usize| labels[i];
    let moves = vec![
        BraidMove {
            name: format!("exchange({},{})", l(0), l(1)),
            kind: MoveKind::Exchange(0, 1),
            transform: vec![(x.clone(), FormalProduct { phase: 1, factors: vec![x.clone(), z.clone()] })],
        },
        BraidMove {
            name: format!("monodromy({},{})", l(0), l(1)),
            kind: MoveKind::Monodromy(0, 1),
            transform: vec![(x.clone(), FormalProduct { phase: 2, factors: vec![x.clone()] })],
        },
        BraidMove {
            name: format!("exchange({},{})", l(1), l(2)),
            kind: MoveKind::Exchange(1, 2),
            transform: vec![
                (x.clone(), FormalProduct::single(z.clone())),
                (z.clone(), FormalProduct::single(x.clone())),
            ],
        },
        BraidMove { name: format!("monodromy({},{})", l(1), l(2)), kind: MoveKind::Monodromy(1, 2), transform: vec![] },
    ];
    let setup = DefectSetup { name: name.into(), bundle: bundle.clone(), defects, relations, qubits: vec![(x, z)] };
    setup.validate()?;
    Ok(Scheme { setup, moves })
}

/// Hadamard walls in the 2D surface code with twists `tl`, `bl`, `tr`, `br`.
pub fn twist_2d_surface() -> Result<Scheme, SchemeError> {
    twist_pair("twist_2d_surface", &builtin::model("surface_2d")?, "hadamard", ["tl", "bl", "tr", "br"])
}

/// Self-dual surface code in dimension `d`, with outer and inner twists
/// `ol`, `il`, `or`, `ir` and, above two dimensions, a threaded puncture `p`.
pub fn selfdual_surface(d: usize) -> Result<Scheme, SchemeError> {
    twist_pair(&format!("selfdual_surface({d})"), &builtin::selfdual(d)?, "hadamard", ["ol", "il", "or", "ir"])
}

/// Levin-Wen fermion model with two `cz` walls and point-like twists.
pub fn levin_wen_3d() -> Result<Scheme, SchemeError> {
    twist_pair("levin_wen_3d", &builtin::model("levin_wen_3d")?, "cz", ["tl", "bl", "tr", "br"])
}

/// Generic construction for any model and wall that pass the eligibility
/// test.
pub fn general(bundle: &ModelBundle, wall: &str) -> Result<Scheme, SchemeError> {
    twist_pair(&format!("general({}, {wall})", bundle.model.name()), bundle, wall, ["ol", "il", "or", "ir"])
}

/// A rough hole `r` and a smooth hole `s` in a planar patch whose rough and
/// smooth sides are the defects `rough_side` and `smooth_side`. The basis
/// matches the string-and-loop logicals of the lattice module, without the
/// patch's own qubit.
pub fn hole_2d() -> Result<Scheme, SchemeError> {
    let bundle = builtin::model("surface_2d")?;
    let m = &bundle.model;
    let (e, mm) = (m.parse("e")?, m.parse("m")?);
    let hole = |id: &str, c| Defect { id: id.into(), kind: DefectKind::Hole, dim: 0, condensable: vec![c], wall: None };
    let defects = vec![hole("r", e), hole("s", mm), hole("rough_side", e), hole("smooth_side", mm)];
    let xr = PathDescriptor::new(e, TopoClass::Connects(0, 2));
    let zr = PathDescriptor::new(mm, TopoClass::Encloses(0));
    let xs = PathDescriptor::new(e, TopoClass::Encloses(1));
    let zs = PathDescriptor::new(mm, TopoClass::Connects(1, 3));
    let mv = BraidMove {
        name: "monodromy(r,s)".into(),
        kind: MoveKind::Monodromy(0, 1),
        transform: vec![
            (xr.clone(), FormalProduct { phase: 0, factors: vec![xr.clone(), xs.clone()] }),
            (zs.clone(), FormalProduct { phase: 0, factors: vec![zs.clone(), zr.clone()] }),
        ],
    };
    let setup =
        DefectSetup { name: "hole_2d".into(), bundle, defects, relations: vec![], qubits: vec![(xr, zr), (xs, zs)] };
    setup.validate()?;
    Ok(Scheme { setup, moves: vec![mv] })
}

/// Punctures in three stacked 3D surface codes. Pairs `h(2k-1)`, `h(2k)`
/// carry qubits `2k-1` and `2k`; `hN` is threaded through every other
/// puncture and carries qubit `N`; `h_alpha`, `h_beta` carry the ancillas.
/// Qubits are ordered `1..=N`, then `a`, then `b`.
pub fn universal_register(n: usize) -> Result<Scheme, SchemeError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(SchemeError::InvalidSetup(format!("universal register needs an odd N >= 3, got {n}")));
    }
    let bundle = builtin::model("surface_3d_x3")?;
    let m = &bundle.model;
    let ex = |s: &str| m.parse(s);
    let (e1, m1, e2, m2, e3, m3) = (ex("e1")?, ex("m1")?, ex("e2")?, ex("m2")?, ex("e3")?, ex("m3")?);
    let mut defects = Vec::new();
    let pair_cond = vec![e1, m2, m3];
    for i in 1..n {
        defects.push(Defect {
            id: format!("h{i}"),
            kind: DefectKind::Hole,
            dim: 2,
            condensable: pair_cond.clone(),
            wall: None,
        });
    }
    let threaded = n - 1;
    defects.push(Defect {
        id: format!("h{n}"),
        kind: DefectKind::ThreadedPuncture,
        dim: 2,
        condensable: vec![e1, e2, m3],
        wall: None,
    });
    let (alpha, beta) = (n, n + 1);
    for id in ["h_alpha", "h_beta"] {
        defects.push(Defect {
            id: id.into(),
            kind: DefectKind::Hole,
            dim: 2,
            condensable: vec![m1, e2, m3],
            wall: None,
        });
    }
    let relations = (0..defects.len())
        .filter(|&i| i != threaded)
        .map(|i| Relation { kind: RelationKind::Threads, a: threaded, b: i })
        .collect();
    let d = PathDescriptor::new;
    let mut qubits = Vec::new();
    for k in 0..(n - 1) / 2 {
        let (p, q) = (2 * k, 2 * k + 1);
        qubits.push((d(m1, TopoClass::Encloses(p)), d(e1, TopoClass::Connects(p, q))));
        qubits.push((d(m2, TopoClass::Connects(p, q)), d(e2, TopoClass::Encloses(p))));
    }
    qubits.push((d(m3, TopoClass::Spans(threaded)), d(e3, TopoClass::Encloses(threaded))));
    qubits.push((d(m1, TopoClass::Connects(alpha, beta)), d(e1, TopoClass::Encloses(alpha))));
    qubits.push((d(m2, TopoClass::Encloses(alpha)), d(e2, TopoClass::Connects(alpha, beta))));
    let mut moves = Vec::new();
    for k in 0..(n - 1) / 2 {
        let (p, q) = (2 * k, 2 * k + 1);
        // a string ending on a braided puncture picks up a loop around the other
        let rewrite = |base: PathDescriptor, extra: PathDescriptor| {
            (base.clone(), FormalProduct { phase: 0, factors: vec![base, extra] })
        };
        moves.push(BraidMove {
            name: format!("monodromy(h{},h_alpha)", q + 1),
            kind: MoveKind::Monodromy(q, alpha),
            transform: vec![
                rewrite(d(m2, TopoClass::Connects(p, q)), d(m2, TopoClass::Encloses(alpha))),
                rewrite(d(m1, TopoClass::Connects(alpha, beta)), d(m1, TopoClass::Encloses(q))),
                rewrite(d(e1, TopoClass::Connects(p, q)), d(e1, TopoClass::Encloses(alpha))),
                rewrite(d(e2, TopoClass::Connects(alpha, beta)), d(e2, TopoClass::Encloses(q))),
            ],
        });
    }
    let setup = DefectSetup { name: format!("universal_register({n})"), bundle, defects, relations, qubits };
    setup.validate()?;
    Ok(Scheme { setup, moves })
}
