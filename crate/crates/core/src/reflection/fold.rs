//! Folding Galois orbits of (−2)-classes into reflections of the fixed
//! sublattice.

use super::{classify_orbit, folded_class, GaloisOrbit, OrbitType, ReflectionError};
use crate::exact::IntMat;
use crate::lattice::{Lattice, Sublattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// The reflection of the fixed sublattice induced by a finite-type orbit.
///
/// Each fixed-basis vector `x` maps to `x − (2(x·C)/C²)·C`, where `C` is the
/// folded class of the orbit (sum of its members). The images are
/// re-expressed in fixed-basis coordinates and returned as the columns of the
/// resulting matrix. The reflection coefficient is an integer whenever the
/// orbit is stable under a group fixing the sublattice pointwise; inputs that
/// break that assumption are rejected rather than rounded.
pub fn folded_reflection(
    orbit: &GaloisOrbit,
    fixed: &Sublattice,
    ambient: &Lattice,
) -> Result<IntMat, ReflectionError> {
    if !orbit.incidence_is_consistent(ambient) {
        return Err(ReflectionError::Invalid(
            "orbit incidence does not match the ambient Gram".into(),
        ));
    }
    let c = folded_class(orbit)?;
    let c2 = ambient.norm(&c);
    // Finite-type orbits have C² = −2r < 0.
    debug_assert!(c2.is_negative());
    if fixed.coords_of(&c).is_none() {
        return Err(ReflectionError::NotInFixedLattice);
    }
    let rank = fixed.rank();
    let mut mat = IntMat::zero(rank, rank);
    for i in 0..rank {
        let x: Vec<BigInt> = fixed.basis.row(i).to_vec();
        let xc = ambient.inner(&x, &c);
        let (k, rem) = (BigInt::from(2) * &xc).div_rem(&c2);
        if !rem.is_zero() {
            return Err(ReflectionError::NotIntegral);
        }
        let image: Vec<BigInt> = x
            .iter()
            .zip(c.iter())
            .map(|(xi, ci)| xi - &k * ci)
            .collect();
        let coords = fixed
            .coords_of(&image)
            .ok_or(ReflectionError::NotInFixedLattice)?;
        for (r, v) in coords.into_iter().enumerate() {
            mat[(r, i)] = v;
        }
    }
    // A reflection is an involutive isometry of the fixed sublattice.
    if !mat.mul_mat(&mat).is_identity() {
        return Err(ReflectionError::Invalid(
            "folded map is not an involution".into(),
        ));
    }
    if mat.transpose().mul_mat(&fixed.gram).mul_mat(&mat) != fixed.gram {
        return Err(ReflectionError::Invalid(
            "folded map does not preserve the fixed Gram".into(),
        ));
    }
    Ok(mat)
}

/// Generators of the folded reflection group, one per finite-type orbit.
#[derive(Clone, Debug)]
pub struct RxGenerators {
    /// Folded reflections, acting on fixed-basis coordinates.
    pub generators: Vec<IntMat>,
    /// The folded class of each generating orbit, in fixed-basis coordinates.
    pub walls: Vec<Vec<BigInt>>,
    /// Indices of input orbits excluded as infinite type.
    pub infinite_orbits: Vec<usize>,
}

/// Folds every finite-type orbit to a reflection of the fixed sublattice.
/// Infinite-type orbits contribute no generator; their indices are reported
/// so the caller can surface them.
pub fn rx_generators(
    orbits: &[GaloisOrbit],
    fixed: &Sublattice,
    ambient: &Lattice,
) -> Result<RxGenerators, ReflectionError> {
    let mut generators = Vec::new();
    let mut walls = Vec::new();
    let mut infinite_orbits = Vec::new();
    for (idx, orbit) in orbits.iter().enumerate() {
        if classify_orbit(orbit) == OrbitType::Infinite {
            infinite_orbits.push(idx);
            continue;
        }
        let mat = folded_reflection(orbit, fixed, ambient)?;
        let c = folded_class(orbit)?;
        let wall = fixed
            .coords_of(&c)
            .ok_or(ReflectionError::NotInFixedLattice)?;
        generators.push(mat);
        walls.push(wall);
    }
    Ok(RxGenerators {
        generators,
        walls,
        infinite_orbits,
    })
}
