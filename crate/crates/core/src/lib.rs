//! Exact-arithmetic toolkit for bounding automorphism groups of K3 surfaces.
//!
//! The crate is organised as a stack:
//!
//! * [`exact`] — arbitrary-precision integer/rational linear algebra and
//!   polynomial arithmetic (Smith and Hermite normal forms, characteristic
//!   polynomials, Pell equations, cyclotomic polynomials).
//! * [`lattice`] — integer quadratic lattices: signatures, discriminant
//!   forms, fixed sublattices, orthogonal complements, saturation, short
//!   vectors, isometry search, and isometry groups of definite lattices.
//! * [`reflection`] — Galois orbits of rational-curve classes, folded
//!   reflections on the invariant sublattice, chamber descent, and related
//!   membership tests.
//! * [`groupcert`] — finite-index certificates: orbit/stabilizer
//!   computations on sublattice families, generator reduction, relation
//!   discovery, and coset-closure certification.
//! * [`diagquartic`] — the diagonal quartic family `x^4 - y^4 = c(z^4 - w^4)`:
//!   exact number-field arithmetic, the 48 lines, their incidence lattice,
//!   Galois action, and the invariant Picard data.
//! * [`ffield`] — finite fields `F_{p^n}` with Zech-logarithm tables.
//! * [`counting`] — projective point counting over finite fields (direct and
//!   fibered strategies) and exhaustive line searches.
//! * [`zeta`] — Frobenius characteristic polynomials from point counts via
//!   Newton identities and the functional equation, plus Picard rank bounds.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod counting;
pub mod diagquartic;
pub mod exact;
pub mod ffield;
pub mod lattice;
pub mod groupcert;
pub mod reflection;
pub mod zeta;

pub use exact::{IntMat, QMat, RatPoly};
pub use lattice::{Lattice, Sublattice};
