//! Topological-defect braiding toolkit.
//!
//! The crate is organised bottom-up:
//!
//! - [`pauli`]: Pauli operators and Clifford tableaux in symplectic form.
//! - [`anyon`]: abelian `Z2^k` excitation models, domain walls, and the test
//!   for whether braiding twists of a wall yields the full Clifford group.
//! - [`lattice`]: surface-code patches with holes, as stabiliser codes.
//! - [`deformation`]: measurement-driven hole motion and the logical gate it
//!   produces.
//! - [`scheme`]: defect setups described by topological path classes, with
//!   exchange and monodromy moves.
//! - [`compiler`]: the measurement-based H and CCZ gadget compiler with
//!   exhaustive branch verification.
//! - [`format`](mod@format): the declarative TOML input format.

pub mod anyon;
pub mod compiler;
pub mod deformation;
pub mod format;
pub mod gf2;
pub mod lattice;
pub mod pauli;
pub mod scheme;
