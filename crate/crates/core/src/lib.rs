//! Exact-arithmetic engine for purely non-symplectic automorphisms of order 16
//! on K3 surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`cyclo`]: the field `Q(ζ₁₆)` in the power basis modulo `x⁸ + 1`.
//! * [`lattice`]: even integer lattices, their discriminant groups and the
//!   fixed-locus invariants of non-symplectic involutions.
//! * [`lefschetz`]: eigenvalue profiles, local fixed-point types and the
//!   holomorphic/topological Lefschetz constraints.
//! * [`classify`]: exhaustive enumeration of admissible invariant vectors and
//!   the geometric predicate catalog.
//! * [`elliptic`]: Weierstrass models over `Q(t)`, discriminants and Kodaira
//!   fiber types.

pub mod classify;
pub mod cyclo;
pub mod elliptic;
pub mod lattice;
pub mod lefschetz;
mod parse;

pub use parse::ParseError;

/// Arbitrary-precision rational numbers, always kept in lowest terms.
pub type Rational = num_rational::BigRational;
