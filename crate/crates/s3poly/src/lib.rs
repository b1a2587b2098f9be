//! Moduli spaces of closed polygons in the 3-sphere.
//!
//! A closed n-gon with fixed side lengths in S^3 is encoded by its edge
//! holonomies: a tuple (g_1, ..., g_n) of unit quaternions, one per edge,
//! each confined to a fixed conjugacy class of SU(2), with product
//! g_1 ... g_n = 1. This crate implements
//!
//! - exact unit-quaternion arithmetic for SU(2) and its Lie algebra
//!   ([`su2`]),
//! - the polygon model: conjugacy-class sampling, closure solving,
//!   vertex reconstruction, diagonal lengths, degeneracy and regularity
//!   tests ([`moduli`]),
//! - the Poisson bracket on conjugation-invariant functions of holonomy
//!   tuples, Hamiltonian vector fields, and the group-valued moment map
//!   compatibility check ([`quasipoisson`]),
//! - the integrable system of bending flows along polygon diagonals,
//!   with closed-form flows, periods, and the torus action ([`bending`]),
//! - the pure braid group action by elementary moves and its realization
//!   as time-1 Hamiltonian flows ([`braid`]),
//! - parabolic group cohomology of the punctured-sphere group: cocycles,
//!   cup products, and two independently computed symplectic pairings
//!   that are checked for equality ([`charvar`]),
//! - a structured verification harness covering all of the above
//!   ([`verify`]) and a CLI front end ([`cli`]).
//!
//! Every operation is a pure function over immutable values; seeded
//! sampling takes caller-supplied generator state, so concurrent use is
//! safe with distinct generators.

pub mod bending;
pub mod braid;
pub mod charvar;
pub mod cli;
pub mod error;
pub mod moduli;
pub mod quasipoisson;
pub mod su2;
pub mod verify;

mod smallmat;

pub use error::Error;
pub use moduli::{HolonomyTuple, PolygonS3, SideLengths, TangentVector};
pub use su2::{AlgebraElement, GroupElement};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
