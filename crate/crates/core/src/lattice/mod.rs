//! Integer lattices with symmetric bilinear forms.
//!
//! A [`Lattice`] is `Z^n` equipped with a nondegenerate integer Gram matrix.
//! Vectors are column coordinate vectors in the fixed basis; isometries act
//! on the left and satisfy `gᵀ·G·g = G`. Sublattices are represented by
//! embedding matrices whose *rows* are basis vectors in ambient coordinates.

mod disc;
mod fixed;
mod isogroup;
mod short;

pub use disc::{aut_discriminant_form, DiscriminantData};
pub use fixed::{
    fixed_sublattice, is_divisible, orthogonal_complement, saturate_by_halving, SaturationResult,
};
pub use isogroup::{
    all_isometries, definite_isometry_group, isometry_search, DefiniteGroup, IsometryOutcome,
};
pub use short::{coset_short_vectors, short_vectors};

use crate::exact::{FlexInt, IntMat, QMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("gram matrix is degenerate (determinant zero)")]
    Degenerate,
    #[error("lattice rank must be at least 1")]
    EmptyRank,
    #[error("matrix is not an isometry of this lattice")]
    NotIsometry,
    #[error("operation requires a definite lattice")]
    NotDefinite,
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// `Z^n` with a nondegenerate symmetric integer Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    gram: IntMat,
    labels: Option<Vec<String>>,
}

impl Lattice {
    /// Builds a lattice, rejecting non-symmetric or degenerate Gram matrices.
    pub fn new(gram: IntMat) -> Result<Self, LatticeError> {
        if !gram.is_square() || !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if gram.rows() == 0 {
            return Err(LatticeError::EmptyRank);
        }
        if gram.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Lattice { gram, labels: None })
    }

    pub fn with_labels(gram: IntMat, labels: Vec<String>) -> Result<Self, LatticeError> {
        if labels.len() != gram.rows() {
            return Err(LatticeError::Invalid(
                "label count must equal the rank".into(),
            ));
        }
        let mut l = Lattice::new(gram)?;
        l.labels = Some(labels);
        Ok(l)
    }

    /// Convenience constructor from small integer rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Lattice::new(IntMat::from_rows(rows))
    }

    /// The hyperbolic plane `U = [[0,1],[1,0]]`.
    pub fn hyperbolic_plane() -> Lattice {
        Lattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    /// Diagonal lattice with the given entries.
    pub fn diagonal(entries: &[i64]) -> Result<Self, LatticeError> {
        let n = entries.len();
        Lattice::new(IntMat::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::from(entries[i])
            } else {
                BigInt::ZERO
            }
        }))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Exact determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    /// `(p, q)`: counts of positive and negative diagonal entries after exact
    /// congruence diagonalization (never eigenvalues). Nondegeneracy makes
    /// the zero count vanish.
    pub fn signature(&self) -> (usize, usize) {
        let (p, q, z) = QMat::from_int(&self.gram).signature_of_symmetric();
        debug_assert_eq!(z, 0);
        (p, q)
    }

    /// `true` iff every vector has even norm (all diagonal Gram entries even).
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| {
            use num_integer::Integer;
            self.gram[(i, i)].is_even()
        })
    }

    pub fn is_definite(&self) -> bool {
        let (p, q) = self.signature();
        p == 0 || q == 0
    }

    /// Bilinear pairing `xᵀ·G·y`.
    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.rank());
        assert_eq!(y.len(), self.rank());
        let gy = self.gram.mul_vec(y);
        x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum()
    }

    /// Self-pairing `xᵀ·G·x`.
    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.inner(x, x)
    }

    /// `true` iff `m` is square of the right size with `mᵀ·G·m = G`.
    pub fn is_isometry(&self, m: &IntMat) -> bool {
        m.is_square()
            && m.rows() == self.rank()
            && &m.transpose().mul_mat(&self.gram).mul_mat(m) == &self.gram
    }

    pub fn isometry(&self, mat: IntMat) -> Result<Isometry, LatticeError> {
        if self.is_isometry(&mat) {
            Ok(Isometry { mat })
        } else {
            Err(LatticeError::NotIsometry)
        }
    }

    /// Deterministic JSON form: `{"gram": [[int]], "labels": [...]?}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LatticeJson::from(self)).expect("lattice serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, LatticeError> {
        let j: LatticeJson = serde_json::from_value(v.clone())
            .map_err(|e| LatticeError::Invalid(format!("bad lattice JSON: {e}")))?;
        j.try_into()
    }
}

/// A verified isometry certificate: `matᵀ·G·mat = G` held at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Isometry {
    mat: IntMat,
}

impl Isometry {
    pub fn mat(&self) -> &IntMat {
        &self.mat
    }

    pub fn into_mat(self) -> IntMat {
        self.mat
    }
}

/// A finite list of isometries generating a group action on a lattice.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub generators: Vec<IntMat>,
}

impl GroupAction {
    /// Validates every generator against the lattice.
    pub fn new(lattice: &Lattice, generators: Vec<IntMat>) -> Result<Self, LatticeError> {
        for g in &generators {
            if !lattice.is_isometry(g) {
                return Err(LatticeError::NotIsometry);
            }
        }
        Ok(GroupAction { generators })
    }
}

/// A sublattice of an ambient lattice: `basis` rows are vectors in ambient
/// coordinates; `gram` is the restricted form `B·G·Bᵀ` (possibly degenerate).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sublattice {
    pub basis: IntMat,
    pub gram: IntMat,
}

impl Sublattice {
    pub fn new(ambient: &Lattice, basis: IntMat) -> Result<Self, LatticeError> {
        if basis.cols() != ambient.rank() {
            return Err(LatticeError::Invalid(
                "sublattice basis width must equal ambient rank".into(),
            ));
        }
        if basis.rank() != basis.rows() {
            return Err(LatticeError::Invalid(
                "sublattice basis rows must be independent".into(),
            ));
        }
        let gram = basis.mul_mat(ambient.gram()).mul_mat(&basis.transpose());
        Ok(Sublattice { basis, gram })
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The restricted form can be degenerate (the ambient-fixed subgroup of a
    /// group action need not be a lattice); callers check before converting.
    pub fn is_degenerate(&self) -> bool {
        self.rank() == 0 || self.gram.det().is_zero()
    }

    /// Restricted form as a standalone lattice; fails if degenerate.
    pub fn to_lattice(&self) -> Result<Lattice, LatticeError> {
        Lattice::new(self.gram.clone())
    }

    /// Coordinates of an ambient vector in this sublattice's basis, if the
    /// vector lies in the integer row span.
    pub fn coords_of(&self, ambient_vec: &[BigInt]) -> Option<Vec<BigInt>> {
        // Solve xᵀ·B = vᵀ, i.e. Bᵀ·x = v.
        crate::exact::solve_integer(&self.basis.transpose(), ambient_vec)
    }

    /// Membership test in the integer row span.
    pub fn contains(&self, ambient_vec: &[BigInt]) -> bool {
        self.coords_of(ambient_vec).is_some()
    }
}

/// Converts a rational matrix whose entries are all integers into an `IntMat`.
pub(crate) fn qmat_to_int(m: &QMat) -> Option<IntMat> {
    let mut out = IntMat::zero(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e: &BigRational = &m[(i, j)];
            if !e.is_integer() {
                return None;
            }
            out[(i, j)] = e.to_integer();
        }
    }
    Some(out)
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    gram: Vec<Vec<FlexInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl From<&Lattice> for LatticeJson {
    fn from(l: &Lattice) -> Self {
        LatticeJson {
            gram: (0..l.rank())
                .map(|i| l.gram.row(i).iter().map(FlexInt::from).collect())
                .collect(),
            labels: l.labels.clone(),
        }
    }
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = LatticeError;
    fn try_from(j: LatticeJson) -> Result<Self, LatticeError> {
        let n = j.gram.len();
        if n == 0 || j.gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Invalid("gram must be square".into()));
        }
        let gram = IntMat::from_fn(n, n, |i, k| BigInt::from(&j.gram[i][k]));
        match j.labels {
            Some(labels) => Lattice::with_labels(gram, labels),
            None => Lattice::new(gram),
        }
    }
}
