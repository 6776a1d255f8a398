//! Labelled generating sets of isometries, and the standard generators of
//! the orthogonal group of U ⊕ ⟨−2⟩⁴.

use super::GroupCertError;
use crate::exact::IntMat;
use crate::lattice::{Isometry, Lattice};
use crate::reflection::reflection_in_class;
use num_bigint::BigInt;

/// A labelled set of generators of a subgroup of O(lattice). Every matrix is
/// checked to preserve the Gram form at construction.
#[derive(Clone, Debug)]
pub struct GenSet {
    pub lattice: Lattice,
    pub gens: Vec<Isometry>,
    pub labels: Vec<String>,
}

impl GenSet {
    pub fn new(
        lattice: Lattice,
        mats: Vec<IntMat>,
        labels: Vec<String>,
    ) -> Result<Self, GroupCertError> {
        if labels.len() != mats.len() {
            return Err(GroupCertError::Invalid(
                "one label per generator is required".into(),
            ));
        }
        let gens = mats
            .into_iter()
            .map(|m| lattice.isometry(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GenSet {
            lattice,
            gens,
            labels,
        })
    }

    /// Convenience constructor with positional labels `g0`, `g1`, ….
    pub fn with_default_labels(
        lattice: Lattice,
        mats: Vec<IntMat>,
    ) -> Result<Self, GroupCertError> {
        let labels = (0..mats.len()).map(|i| format!("g{i}")).collect();
        Self::new(lattice, mats, labels)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &IntMat> {
        self.gens.iter().map(|g| g.mat())
    }
}

/// The even lattice U ⊕ ⟨−2⟩⁴ of signature (1, 5), with basis labels
/// e1..e6 (e1, e2 spanning the hyperbolic plane).
pub fn u_plus_four_a1() -> Lattice {
    let mut rows = vec![vec![0, 1, 0, 0, 0, 0], vec![1, 0, 0, 0, 0, 0]];
    for i in 0..4 {
        let mut r = vec![0i64; 6];
        r[2 + i] = -2;
        rows.push(r);
    }
    let labels = (1..=6).map(|i| format!("e{i}")).collect();
    Lattice::with_labels(IntMat::from_rows(&rows), labels).expect("U + 4A1 gram is nondegenerate")
}

fn basis_permutation(images: &[usize]) -> IntMat {
    let n = images.len();
    IntMat::from_fn(n, n, |r, c| {
        if r == images[c] {
            BigInt::from(1)
        } else {
            BigInt::ZERO
        }
    })
}

/// The six standard generators of O(U ⊕ ⟨−2⟩⁴): a transposition and a
/// 4-cycle of the four ⟨−2⟩ vectors (generating the S₄ of fibre
/// permutations), the reflections in e2 − e1, e3, and e1 − e3, and −1.
pub fn u_plus_four_a1_orthogonal_generators() -> GenSet {
    let lattice = u_plus_four_a1();
    let gram = lattice.gram();
    let bi = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() };
    let mats = vec![
        // Transposition (e3 e4).
        basis_permutation(&[0, 1, 3, 2, 4, 5]),
        // 4-cycle (e3 e4 e5 e6).
        basis_permutation(&[0, 1, 3, 4, 5, 2]),
        reflection_in_class(gram, &bi(&[-1, 1, 0, 0, 0, 0]))
            .expect("e2 - e1 has square -2"),
        reflection_in_class(gram, &bi(&[0, 0, 1, 0, 0, 0])).expect("e3 has square -2"),
        reflection_in_class(gram, &bi(&[1, 0, -1, 0, 0, 0]))
            .expect("e1 - e3 has square -2"),
        IntMat::from_fn(6, 6, |r, c| {
            if r == c {
                BigInt::from(-1)
            } else {
                BigInt::ZERO
            }
        }),
    ];
    let labels = vec![
        "perm(34)".to_string(),
        "perm(3456)".to_string(),
        "refl(e2-e1)".to_string(),
        "refl(e3)".to_string(),
        "refl(e1-e3)".to_string(),
        "-1".to_string(),
    ];
    GenSet::new(lattice, mats, labels).expect("standard generators preserve the form")
}
