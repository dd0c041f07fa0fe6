//! Construction and exact verification of the LU(3,q) LDPC parity-check
//! matrices.
//!
//! The crate builds the binary matrix H(3,q) two ways — from the affine
//! incidence equations y = ax + b, z = ay + c on pairs of F_q^3 triples, and
//! from the symplectic generalized quadrangle over GF(q) restricted to the
//! points not collinear with a fixed point and the lines missing a fixed
//! line — and certifies that the two constructions are equivalent via
//! explicit Pluecker-coordinate bijections. Exact GF(2) linear algebra
//! machine-checks the known rank formulas for these matrices, and an LDPC
//! layer provides alist export, reference hard-decision decoders, and a
//! seeded channel simulator.
//!
//! Modules, bottom up:
//!
//! * [`field`] — GF(q) arithmetic with a deterministic element encoding;
//! * [`gf2`] — bit-packed GF(2) matrices and exact rank;
//! * [`geometry`] — the symplectic quadrangle: points, isotropic lines,
//!   perps, traces;
//! * [`incidence`] — the geometric incidence matrices and H(3,q);
//! * [`klein`] — Pluecker coordinates and the equivalence of the two
//!   constructions;
//! * [`verify`] — executable checks of the rank formulas and the supporting
//!   lemmas;
//! * [`ldpc`] — code plumbing: alist export, decoders, channel simulation.

// Index loops over matrix coordinates read better than iterator chains in
// this codebase, where row/column indices are meaningful on their own.
#![allow(clippy::needless_range_loop)]

pub mod field;
pub mod geometry;
pub mod gf2;
pub mod incidence;
pub mod klein;
pub mod ldpc;
pub mod verify;

pub use field::{Field, FieldError, Fq};
pub use geometry::{IsoLine, ProjPoint, Quadrangle};
pub use gf2::{BitMatrix, BitVec};
pub use incidence::{AffineTriple, IncidenceSystem};
pub use ldpc::{Channel, CodeSpec, SimResult};
pub use verify::{LemmaReport, RankReport, Verifier, VerifyError};
