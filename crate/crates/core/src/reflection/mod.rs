//! Reflections in (−2)-classes, Galois-orbit folding, and chamber descent.
//!
//! A Galois orbit of (−2)-classes of one of the two finite types (pairwise
//! disjoint, or disjoint pairs meeting once) folds to a single reflection of
//! the Galois-fixed sublattice, in the class `C_I` = sum of the orbit. The
//! folded reflections generate a reflection group on the fixed lattice;
//! membership of a given isometry in that group is decided by descending
//! `g·y` back into the chamber of an ample vector `y`, one wall at a time.

mod descent;
mod fold;
mod orbit;
mod order;

pub use descent::{
    chamber_descent, reflection_in_class, sterk_domain_contains, AmpleVector, DescentOutcome,
};
pub use fold::{folded_reflection, rx_generators, RxGenerators};
pub use orbit::{classify_orbit, folded_class, CurveClass, GaloisOrbit, OrbitType};
pub use order::is_infinite_order;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReflectionError {
    #[error("class has self-intersection {0}, expected -2")]
    NotMinus2(String),
    #[error("orbit is of infinite type; it folds to no reflection")]
    InfiniteOrbit,
    #[error("galois action is not transitive on the orbit")]
    NotTransitive,
    #[error("incidence matrix inconsistent with ambient pairings")]
    BadIncidence,
    #[error("folded class does not lie in the fixed sublattice")]
    NotInFixedLattice,
    #[error("reflection is not integral on the given basis")]
    NotIntegral,
    #[error("ample vector invalid: {0}")]
    BadAmple(String),
    #[error("descent exceeded the step cap of {0}")]
    StepCap(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}
