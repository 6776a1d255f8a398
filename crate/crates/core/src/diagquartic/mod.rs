//! The diagonal quartic surface x⁴ − y⁴ = c·(z⁴ − w⁴): exact arithmetic in
//! Q(ζ₈, c^{1/4}), its 48 lines and their intersection behaviour, the Galois
//! action on them, the rank-20 class lattice they generate, and the conic
//! classes — everything downstream group certification consumes.

mod galois;
mod lines;
mod nf;
mod picard;

pub use galois::{galois_permutations, sigma_parameters};
pub use lines::{diagonal_lines, incidence_gram, LineP3};
pub use nf::{admissible_c, NFElem};
pub use picard::{
    build_picard, conic_classes, galois_orbits_of_classes, hyperplane_class, line_orbits,
    PicardData,
};

use crate::lattice::LatticeError;
use crate::reflection::ReflectionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagQuarticError {
    /// |c| is a square or twice a square (or c = 0); the degree-16 Galois
    /// setup breaks down.
    #[error("inadmissible parameter c = {0}: |c| is a square or twice a square")]
    InadmissibleC(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Reflection(#[from] ReflectionError),
}
