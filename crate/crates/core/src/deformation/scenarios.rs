//! Ready-made braids on planar patches with two holes.
//!
//! Hole 0 moves; hole 1 stays put. Logical qubit 0 is the patch's own qubit,
//! 1 and 2 belong to the holes, with the geometric basis of
//! [`LatticeCode::geometric_logicals`].

use super::{move_hole, run_braid, BraidOptions, BraidOutcome, BraidScript, DeformationError, Direction};
use crate::lattice::{build_planar_code, HoleSpec, LatticeCode, LatticeSpec};
use crate::pauli::CliffordTableau;

#[derive(Clone, Debug)]
pub struct BraidScenario {
    pub name: String,
    pub code: LatticeCode,
    pub script: BraidScript,
    /// Logical map the braid should induce, up to phase.
    pub expected: CliffordTableau,
}

impl BraidScenario {
    pub fn run(&self, opts: &BraidOptions) -> Result<BraidOutcome, DeformationError> {
        run_braid(&self.code, &self.script, opts)
    }
}

fn square_loop(side: usize) -> Vec<Direction> {
    [Direction::Down, Direction::Left, Direction::Up, Direction::Right]
        .iter()
        .flat_map(|&d| std::iter::repeat_n(d, side))
        .collect()
}

fn setup(width: usize, height: usize, holes: Vec<HoleSpec>) -> Result<LatticeCode, DeformationError> {
    let mut spec = LatticeSpec::planar(width, height);
    spec.holes = holes;
    Ok(build_planar_code(&spec)?.with_geometric_logicals()?)
}

/// Rough hole circling a one-plaquette smooth hole at plaquette `centre`,
/// along the ring of vertices just far enough away to keep them separated.
pub fn cnot_braid(width: usize, height: usize, centre: (i64, i64)) -> Result<BraidScenario, DeformationError> {
    let (r, c) = centre;
    let code = setup(width, height, vec![HoleSpec::rough(r - 1, c + 2), HoleSpec::smooth(r, c)])?;
    let script = move_hole(&code.lattice, &code.holes, 0, &square_loop(3))?;
    Ok(BraidScenario { name: "rough-around-smooth".into(), code, script, expected: CliffordTableau::cnot(3, 1, 2) })
}

/// Rough hole circling another rough hole at vertex `centre`.
pub fn rough_rough_braid(width: usize, height: usize, centre: (i64, i64)) -> Result<BraidScenario, DeformationError> {
    let (r, c) = centre;
    let code = setup(width, height, vec![HoleSpec::rough(r - 2, c + 2), HoleSpec::rough(r, c)])?;
    let script = move_hole(&code.lattice, &code.holes, 0, &square_loop(4))?;
    Ok(BraidScenario { name: "rough-around-rough".into(), code, script, expected: CliffordTableau::identity(3) })
}

/// The moving hole of [`cnot_braid`] goes down one side of the ring and
/// straight back.
pub fn out_and_back(width: usize, height: usize, centre: (i64, i64)) -> Result<BraidScenario, DeformationError> {
    let (r, c) = centre;
    let code = setup(width, height, vec![HoleSpec::rough(r - 1, c + 2), HoleSpec::smooth(r, c)])?;
    let mut path = vec![Direction::Down; 3];
    path.extend([Direction::Up; 3]);
    let script = move_hole(&code.lattice, &code.holes, 0, &path)?;
    Ok(BraidScenario { name: "out-and-back".into(), code, script, expected: CliffordTableau::identity(3) })
}

/// Smallest patch (by qubit count, up to `max_side` plaquettes a side) on
/// which [`cnot_braid`] runs with the distance never below `floor`.
pub fn smallest_cnot_braid(floor: usize, max_side: usize) -> Option<(BraidScenario, BraidOutcome)> {
    let mut sizes: Vec<(usize, usize)> = (1..=max_side).flat_map(|w| (1..=max_side).map(move |h| (w, h))).collect();
    // qubit count of a w x h patch with rough top/bottom and smooth sides
    sizes.sort_by_key(|&(w, h)| ((w + 1) * h + w * (h - 1), w, h));
    let opts = BraidOptions { distance_floor: Some(floor), checkpoint_every: None };
    for (w, h) in sizes {
        for r in 0..h as i64 {
            for c in 0..w as i64 {
                let Ok(sc) = cnot_braid(w, h, (r, c)) else { continue };
                if let Ok(out) = sc.run(&opts) {
                    return Some((sc, out));
                }
            }
        }
    }
    None
}
