//! Membership testing in a reflection group by descent into the dominant
//! chamber of an ample vector.

use super::ReflectionError;
use crate::exact::{IntMat, QMat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A vector of positive square lying strictly inside the chamber cut out by
/// a set of walls: `y² > 0` and `y · w > 0` for every wall `w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AmpleVector {
    coords: Vec<BigInt>,
}

impl AmpleVector {
    pub fn new(
        gram: &IntMat,
        coords: Vec<BigInt>,
        walls: &[Vec<BigInt>],
    ) -> Result<Self, ReflectionError> {
        let norm = inner(gram, &coords, &coords);
        if !norm.is_positive() {
            return Err(ReflectionError::BadAmple(format!(
                "square {norm} is not positive"
            )));
        }
        for (i, w) in walls.iter().enumerate() {
            let p = inner(gram, &coords, w);
            if !p.is_positive() {
                return Err(ReflectionError::BadAmple(format!(
                    "pairing {p} with wall {i} is not positive"
                )));
            }
        }
        Ok(AmpleVector { coords })
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }
}

/// The outcome of a chamber descent. `Member` carries the wall indices whose
/// reflections compose (left to right) to the tested isometry — a replayable
/// certificate. `NonMember` is a proof of exclusion. `Stuck` reports descent
/// reaching a chamber point other than the target: the isometry maps the
/// chamber to a different chamber of the same orbit, and membership cannot be
/// settled by wall reflections alone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DescentOutcome {
    Member(Vec<usize>),
    NonMember,
    Stuck(Vec<BigInt>),
}

fn inner(gram: &IntMat, a: &[BigInt], b: &[BigInt]) -> BigInt {
    let gb = gram.mul_vec(b);
    a.iter().zip(gb.iter()).map(|(x, y)| x * y).sum()
}

/// The reflection matrix in a vector of negative square, acting on basis
/// coordinates as `x ↦ x − (2(x·w)/w²)·w`, or an error if it is not integral
/// on the standard basis.
pub fn reflection_in_class(gram: &IntMat, w: &[BigInt]) -> Result<IntMat, ReflectionError> {
    let n = gram.rows();
    let w2 = inner(gram, w, w);
    if !w2.is_negative() {
        return Err(ReflectionError::Invalid(format!(
            "wall has square {w2}, expected negative"
        )));
    }
    let gw = gram.mul_vec(w);
    let mut mat = IntMat::zero(n, n);
    for c in 0..n {
        // Image of basis vector e_c: e_c − (2·(e_c·w)/w²) w.
        let num = BigInt::from(2) * &gw[c];
        for r in 0..n {
            let mut val = if r == c { BigInt::one() } else { BigInt::ZERO };
            let prod = &num * &w[r];
            let q = &prod / &w2;
            if &q * &w2 != prod {
                return Err(ReflectionError::NotIntegral);
            }
            val -= q;
            mat[(r, c)] = val;
        }
    }
    Ok(mat)
}

/// Decides membership of the isometry `g` in the group generated by the
/// reflections in `walls`, inside a lattice of signature (1, n−1).
///
/// Starting from `x = g·y`, the point is pulled back toward the chamber of
/// `y` by reflecting in the lowest-indexed wall it pairs negatively with.
/// Every reflection strictly decreases the integer `x·y` (the coefficient is
/// positive and the wall pairs positively with `y`), so the loop terminates;
/// `cap` bounds the number of reflections as a safety guard.
///
/// * If `x·y < 0` at any point, `g` maps the positive cone component of `y`
///   to the opposite component, which no wall reflection does: `NonMember`.
/// * If descent reaches `x == y`, the accumulated word is recomposed and
///   compared with `g`; equality certifies `Member`, inequality means `g`
///   differs from the word by a nontrivial stabilizer of the chamber
///   interior point `y`, which the reflection group does not contain:
///   `NonMember`.
/// * If descent halts at a chamber point `x ≠ y`, membership is undecided
///   by this procedure and the point is reported as `Stuck`.
pub fn chamber_descent(
    gram: &IntMat,
    g: &IntMat,
    y: &AmpleVector,
    walls: &[Vec<BigInt>],
    cap: usize,
) -> Result<DescentOutcome, ReflectionError> {
    let n = gram.rows();
    if !gram.is_symmetric() {
        return Err(ReflectionError::Invalid("gram must be symmetric".into()));
    }
    let (pos, _, zero) = QMat::from_int(gram).signature_of_symmetric();
    if pos != 1 || zero != 0 {
        return Err(ReflectionError::Invalid(
            "gram must be nondegenerate with exactly one positive square".into(),
        ));
    }
    if g.rows() != n || g.cols() != n {
        return Err(ReflectionError::Invalid("dimension mismatch".into()));
    }
    if &g.transpose().mul_mat(gram).mul_mat(g) != gram {
        return Err(ReflectionError::Invalid(
            "tested map does not preserve the form".into(),
        ));
    }
    // Re-validate the chamber data so outcomes carry their soundness
    // assumptions with them.
    let y = AmpleVector::new(gram, y.coords().to_vec(), walls)?.coords;
    let refls: Vec<IntMat> = walls
        .iter()
        .map(|w| reflection_in_class(gram, w))
        .collect::<Result<_, _>>()?;

    let mut x = g.mul_vec(&y);
    let mut word: Vec<usize> = Vec::new();
    for _ in 0..=cap {
        let xy = inner(gram, &x, &y);
        if xy.is_negative() {
            return Ok(DescentOutcome::NonMember);
        }
        if xy.is_zero() {
            // Impossible for two positive-square vectors in signature
            // (1, n−1); the input data must be inconsistent.
            return Err(ReflectionError::Invalid(
                "orthogonal positive-square vectors encountered".into(),
            ));
        }
        let violated = walls
            .iter()
            .position(|w| inner(gram, &x, w).is_negative());
        match violated {
            Some(i) => {
                x = refls[i].mul_vec(&x);
                word.push(i);
            }
            None => {
                if x != y {
                    return Ok(DescentOutcome::Stuck(x));
                }
                let mut prod = IntMat::identity(n);
                for &i in &word {
                    prod = prod.mul_mat(&refls[i]);
                }
                return Ok(if &prod == g {
                    DescentOutcome::Member(word)
                } else {
                    DescentOutcome::NonMember
                });
            }
        }
    }
    Err(ReflectionError::StepCap(cap))
}

/// Tests whether `x` lies in the fundamental domain determined by `y` and a
/// finite list of group elements: `x` belongs iff no translate `γ·x` pairs
/// more tightly with `y`, i.e. `(γx)·y ≥ x·y` for all supplied `γ`.
pub fn sterk_domain_contains(gram: &IntMat, x: &[BigInt], y: &[BigInt], gammas: &[IntMat]) -> bool {
    let xy = inner(gram, x, y);
    gammas.iter().all(|gamma| {
        let gx = gamma.mul_vec(x);
        inner(gram, &gx, y) >= xy
    })
}
