//! Finite-index certification machinery for isometry groups.
//!
//! The pipeline: generators of the full orthogonal group of a lattice
//! ([`u_plus_four_a1_orthogonal_generators`] for the rank-6 case used by the
//! worked examples) → stabilizer of a finite-index sublattice by
//! orbit–stabilizer on the 2-elementary quotient data
//! ([`sublattice_stabilizer`]) → generator reduction by bounded word search
//! ([`reduce_generators`]) → a replayable finiteness certificate for the
//! quotient by a reflection subgroup, with membership decided by chamber
//! descent ([`certify_finite_quotient`]).

mod certify;
mod genset;
mod reduce;
mod stabilizer;

pub use certify::{
    certify_finite_quotient, verify_certificate, CertifyOutcome, ChamberOracle,
    FiniteIndexCertificate, Membership,
};
pub use genset::{u_plus_four_a1, u_plus_four_a1_orthogonal_generators, GenSet};
pub use reduce::{discover_relations, reduce_generators, DroppedGenerator, Reduction, RelationConfig};
pub use stabilizer::{sublattice_stabilizer, two_elementary_sublattices, StabilizerResult, Subspace};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupCertError {
    #[error("orbit cap of {0} exceeded")]
    OrbitCap(usize),
    #[error("coset cap of {0} exceeded")]
    CosetCap(usize),
    #[error("target sublattice does not have a 2-elementary quotient")]
    BadQuotientType,
    #[error("search cap exceeded: {0}")]
    SearchCap(String),
    #[error("lattice error: {0}")]
    Lattice(#[from] crate::lattice::LatticeError),
    #[error("reflection error: {0}")]
    Reflection(#[from] crate::reflection::ReflectionError),
    #[error("invalid input: {0}")]
    Invalid(String),
}
