//! Galois orbits of (−2)-classes and their combinatorial classification.

use super::ReflectionError;
use crate::exact::{FlexInt, IntMat};
use crate::lattice::Lattice;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A class of self-intersection −2 in an ambient lattice, in basis
/// coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveClass(pub Vec<BigInt>);

impl CurveClass {
    pub fn new(ambient: &Lattice, coords: Vec<BigInt>) -> Result<Self, ReflectionError> {
        let norm = ambient.norm(&coords);
        if norm != BigInt::from(-2) {
            return Err(ReflectionError::NotMinus2(norm.to_string()));
        }
        Ok(CurveClass(coords))
    }
}

/// A Galois orbit of (−2)-classes: the classes, their pairwise intersection
/// numbers, and the permutations of the orbit induced by Galois generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaloisOrbit {
    pub classes: Vec<Vec<BigInt>>,
    pub incidence: IntMat,
    pub perms: Vec<Vec<usize>>,
}

impl GaloisOrbit {
    /// Builds an orbit from ambient class vectors, computing the incidence
    /// from the ambient Gram and validating norms and transitivity.
    pub fn new(
        ambient: &Lattice,
        classes: Vec<Vec<BigInt>>,
        perms: Vec<Vec<usize>>,
    ) -> Result<Self, ReflectionError> {
        let n = classes.len();
        if n == 0 {
            return Err(ReflectionError::Invalid("orbit cannot be empty".into()));
        }
        let incidence = IntMat::from_fn(n, n, |i, j| ambient.inner(&classes[i], &classes[j]));
        Self::from_parts(classes, incidence, perms)
    }

    /// Builds an orbit from explicitly supplied incidence (the JSON path).
    pub fn from_parts(
        classes: Vec<Vec<BigInt>>,
        incidence: IntMat,
        perms: Vec<Vec<usize>>,
    ) -> Result<Self, ReflectionError> {
        let n = classes.len();
        if incidence.rows() != n || incidence.cols() != n || !incidence.is_symmetric() {
            return Err(ReflectionError::BadIncidence);
        }
        for i in 0..n {
            if incidence[(i, i)] != BigInt::from(-2) {
                return Err(ReflectionError::NotMinus2(incidence[(i, i)].to_string()));
            }
        }
        for p in &perms {
            if p.len() != n {
                return Err(ReflectionError::Invalid("permutation length mismatch".into()));
            }
            let mut seen = vec![false; n];
            for &img in p {
                if img >= n || seen[img] {
                    return Err(ReflectionError::Invalid("not a permutation".into()));
                }
                seen[img] = true;
            }
        }
        // A genuine Galois action preserves intersection numbers.
        for p in &perms {
            for i in 0..n {
                for j in 0..n {
                    if incidence[(p[i], p[j])] != incidence[(i, j)] {
                        return Err(ReflectionError::BadIncidence);
                    }
                }
            }
        }
        let orbit = GaloisOrbit {
            classes,
            incidence,
            perms,
        };
        if !orbit.is_transitive() {
            return Err(ReflectionError::NotTransitive);
        }
        Ok(orbit)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The permutations must connect every class to class 0.
    fn is_transitive(&self) -> bool {
        let n = self.len();
        if n == 1 {
            return true;
        }
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for p in &self.perms {
                // follow both directions of each generator
                let fwd = p[i];
                if !reached[fwd] {
                    reached[fwd] = true;
                    frontier.push(fwd);
                }
                if let Some(back) = p.iter().position(|&x| x == i) {
                    if !reached[back] {
                        reached[back] = true;
                        frontier.push(back);
                    }
                }
            }
        }
        reached.into_iter().all(|r| r)
    }

    /// Checks the stored incidence against an ambient lattice.
    pub fn incidence_is_consistent(&self, ambient: &Lattice) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.incidence[(i, j)] == ambient.inner(&self.classes[i], &self.classes[j])
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(OrbitJson::from(self)).expect("orbit serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ReflectionError> {
        let j: OrbitJson = serde_json::from_value(v.clone())
            .map_err(|e| ReflectionError::Invalid(format!("bad orbit JSON: {e}")))?;
        j.try_into()
    }
}

/// Finite orbit types fold to reflections; anything else would generate an
/// infinite subgroup and is excluded from the generator set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrbitType {
    /// `r` pairwise-disjoint classes.
    Disjoint(usize),
    /// `r` disjoint pairs, the two members of each pair meeting once.
    PairedA2(usize),
    /// Any other incidence pattern.
    Infinite,
}

/// Classifies by the stated combinatorial conditions: all off-diagonal
/// intersections zero → `Disjoint(n)`; a perfect matching of single edges
/// with intersection exactly 1 → `PairedA2(n/2)`; anything else → `Infinite`.
pub fn classify_orbit(o: &GaloisOrbit) -> OrbitType {
    let n = o.len();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut isolated = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = &o.incidence[(i, j)];
            if v.is_zero() {
                continue;
            }
            isolated = false;
            if *v != BigInt::from(1) {
                return OrbitType::Infinite;
            }
            // Edge i–j with multiplicity 1: both endpoints must be unmatched.
            if partner[i].is_some() || partner[j].is_some() {
                return OrbitType::Infinite;
            }
            partner[i] = Some(j);
            partner[j] = Some(i);
        }
    }
    if isolated {
        return OrbitType::Disjoint(n);
    }
    if partner.iter().all(|p| p.is_some()) {
        OrbitType::PairedA2(n / 2)
    } else {
        OrbitType::Infinite
    }
}

/// The folded class `C_I` = sum of the orbit classes (ambient coordinates);
/// its norm is `−2r` for both finite types. Infinite orbits are rejected.
pub fn folded_class(o: &GaloisOrbit) -> Result<Vec<BigInt>, ReflectionError> {
    if classify_orbit(o) == OrbitType::Infinite {
        return Err(ReflectionError::InfiniteOrbit);
    }
    let dim = o.classes[0].len();
    let mut c = vec![BigInt::ZERO; dim];
    for cls in &o.classes {
        for (acc, v) in c.iter_mut().zip(cls.iter()) {
            *acc += v;
        }
    }
    Ok(c)
}

#[derive(Serialize, Deserialize)]
struct OrbitJson {
    classes: Vec<Vec<FlexInt>>,
    incidence: Vec<Vec<FlexInt>>,
    perms: Vec<Vec<usize>>,
}

impl From<&GaloisOrbit> for OrbitJson {
    fn from(o: &GaloisOrbit) -> Self {
        OrbitJson {
            classes: o
                .classes
                .iter()
                .map(|c| c.iter().map(FlexInt::from).collect())
                .collect(),
            incidence: (0..o.incidence.rows())
                .map(|i| o.incidence.row(i).iter().map(FlexInt::from).collect())
                .collect(),
            perms: o.perms.clone(),
        }
    }
}

impl TryFrom<OrbitJson> for GaloisOrbit {
    type Error = ReflectionError;
    fn try_from(j: OrbitJson) -> Result<Self, ReflectionError> {
        let classes: Vec<Vec<BigInt>> = j
            .classes
            .iter()
            .map(|c| c.iter().map(BigInt::from).collect())
            .collect();
        let n = j.incidence.len();
        if j.incidence.iter().any(|r| r.len() != n) {
            return Err(ReflectionError::BadIncidence);
        }
        let incidence = IntMat::from_fn(n, n, |r, c| BigInt::from(&j.incidence[r][c]));
        GaloisOrbit::from_parts(classes, incidence, j.perms)
    }
}
