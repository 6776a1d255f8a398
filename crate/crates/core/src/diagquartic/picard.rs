//! The class lattice generated by the 48 lines: Z⁴⁸ modulo the radical of
//! the incidence form, carrying the transported Galois action, the
//! hyperplane class, and the conic classes of the surface.

use super::lines::LineP3;
use super::DiagQuarticError;
use crate::exact::{hermite_normal_form, smith_normal_form, FlexInt, IntMat, QMat};
use crate::lattice::{
    coset_short_vectors, fixed_sublattice, orthogonal_complement, GroupAction, Lattice,
    Sublattice,
};
use crate::reflection::GaloisOrbit;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// The rank-20 class lattice of the 48 lines with its Galois action.
///
/// `picard` is the quotient of Z⁴⁸ (one generator per line) by the radical
/// of `gram48`, with the induced pairing; `line_images[i]` is the class of
/// line `i` in the chosen rank-20 basis; `galois_on_picard[k]` acts on
/// column vectors of that basis and satisfies the transport identity
/// `galois_on_picard[k] · line_images[i] = line_images[galois_perms[k][i]]`.
#[derive(Clone, Debug)]
pub struct PicardData {
    pub gram48: IntMat,
    pub galois_perms: Vec<Vec<usize>>,
    pub picard: Lattice,
    pub line_images: Vec<Vec<BigInt>>,
    pub galois_on_picard: Vec<IntMat>,
}

fn validate_perms(gram: &IntMat, perms: &[Vec<usize>]) -> Result<(), DiagQuarticError> {
    let n = gram.rows();
    for (k, p) in perms.iter().enumerate() {
        if p.len() != n {
            return Err(DiagQuarticError::Invalid(format!(
                "permutation {k} has length {} instead of {n}",
                p.len()
            )));
        }
        let mut seen = vec![false; n];
        for &img in p {
            if img >= n || seen[img] {
                return Err(DiagQuarticError::Invalid(format!(
                    "entry list {k} is not a permutation"
                )));
            }
            seen[img] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if gram[(p[i], p[j])] != gram[(i, j)] {
                    return Err(DiagQuarticError::Invalid(format!(
                        "permutation {k} does not preserve the incidence form"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Quotients Z⁴⁸ by the radical of the incidence form and transports the
/// Galois permutations to the rank-20 quotient. Also returns the sublattice
/// fixed by the whole transported action (the classes invariant under
/// Galois), which downstream certification builds on.
pub fn build_picard(
    gram48: &IntMat,
    galois_perms: &[Vec<usize>],
) -> Result<(PicardData, Sublattice), DiagQuarticError> {
    if !gram48.is_square() || !gram48.is_symmetric() {
        return Err(DiagQuarticError::Invalid(
            "incidence form must be square and symmetric".into(),
        ));
    }
    let n = gram48.rows();
    validate_perms(gram48, galois_perms)?;

    // Smith form u·G·v = d: the columns of v with zero diagonal entry span
    // the radical (saturated, since v is unimodular), and the nonzero block
    // comes first in the divisibility chain.
    let snf = smith_normal_form(gram48);
    let rank = (0..n).filter(|&i| !snf.d[(i, i)].is_zero()).count();
    if rank != 20 {
        return Err(DiagQuarticError::Invalid(format!(
            "class lattice has rank {rank}, expected 20 — incidence data is wrong"
        )));
    }
    for i in 0..n {
        let zero = snf.d[(i, i)].is_zero();
        if (i < rank) == zero {
            return Err(DiagQuarticError::Invalid(
                "Smith form did not order its diagonal".into(),
            ));
        }
    }
    let all_rows: Vec<usize> = (0..n).collect();
    let first_cols: Vec<usize> = (0..rank).collect();
    // Section of the quotient: basis classes are the first 20 columns of v.
    let section = snf.v.submatrix(&all_rows, &first_cols);
    // Projection to quotient coordinates: the first 20 rows of v⁻¹.
    let vinv = snf.v.inverse_unimodular();
    let proj = vinv.submatrix(&first_cols, &all_rows);

    let q = section.transpose().mul_mat(gram48).mul_mat(&section);
    let picard = Lattice::new(q)?;

    let line_images: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..rank).map(|r| proj[(r, i)].clone()).collect())
        .collect();
    // Distinct lines stay distinct in the quotient (their pairings differ),
    // so duplicate images signal inconsistent input.
    for i in 0..n {
        for j in (i + 1)..n {
            if line_images[i] == line_images[j] {
                return Err(DiagQuarticError::Invalid(format!(
                    "line classes {i} and {j} coincide in the quotient"
                )));
            }
        }
    }
    // The quotient pairing of two line classes must reproduce the incidence.
    for i in 0..n {
        for j in 0..n {
            if picard.inner(&line_images[i], &line_images[j]) != gram48[(i, j)] {
                return Err(DiagQuarticError::Invalid(
                    "quotient pairing disagrees with the incidence form".into(),
                ));
            }
        }
    }

    let mut galois_on_picard = Vec::with_capacity(galois_perms.len());
    for p in galois_perms {
        // Column convention: the permutation matrix sends e_c to e_{p[c]}.
        let m = IntMat::from_fn(n, n, |r, c| {
            if r == p[c] {
                BigInt::from(1)
            } else {
                BigInt::ZERO
            }
        });
        let t = proj.mul_mat(&m).mul_mat(&section);
        for i in 0..n {
            if t.mul_vec(&line_images[i]) != line_images[p[i]] {
                return Err(DiagQuarticError::Invalid(
                    "transported action violates the transport identity".into(),
                ));
            }
        }
        galois_on_picard.push(t);
    }
    let action = GroupAction::new(&picard, galois_on_picard.clone())?;
    let fixed = fixed_sublattice(&picard, &action);

    Ok((
        PicardData {
            gram48: gram48.clone(),
            galois_perms: galois_perms.to_vec(),
            picard,
            line_images,
            galois_on_picard,
        },
        fixed,
    ))
}

/// The hyperplane class, expressed through the plane section x = y: that
/// plane cuts the quartic in the four lines of the first family with α = 1,
/// so H is the sum of their classes. Verified here by H² = 4 and H·ℓ = 1
/// for every line ℓ before being returned.
pub fn hyperplane_class(
    lines: &[LineP3],
    data: &PicardData,
) -> Result<Vec<BigInt>, DiagQuarticError> {
    if lines.len() != data.line_images.len() {
        return Err(DiagQuarticError::Invalid(
            "line list does not match the class data".into(),
        ));
    }
    let quad: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.family() == 0 && l.roots().0 == 0)
        .map(|(i, _)| i)
        .collect();
    if quad.len() != 4 {
        return Err(DiagQuarticError::Invalid(format!(
            "plane section decomposed into {} lines, expected 4",
            quad.len()
        )));
    }
    let rank = data.picard.rank();
    let mut h = vec![BigInt::ZERO; rank];
    for &i in &quad {
        for (hr, v) in h.iter_mut().zip(&data.line_images[i]) {
            *hr += v;
        }
    }
    if data.picard.inner(&h, &h) != BigInt::from(4) {
        return Err(DiagQuarticError::Invalid(
            "candidate hyperplane class has the wrong self-intersection".into(),
        ));
    }
    for img in &data.line_images {
        if data.picard.inner(&h, img) != BigInt::from(1) {
            return Err(DiagQuarticError::Invalid(
                "candidate hyperplane class has the wrong degree on a line".into(),
            ));
        }
    }
    Ok(h)
}

/// Partitions Galois-closed class vectors into orbits under the transported
/// action and packages each with its induced permutations and incidence.
/// Errors if the class set is not closed under the action.
pub fn galois_orbits_of_classes(
    data: &PicardData,
    classes: &[Vec<BigInt>],
) -> Result<Vec<GaloisOrbit>, DiagQuarticError> {
    let mut index: BTreeMap<&[BigInt], usize> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        if index.insert(c.as_slice(), i).is_some() {
            return Err(DiagQuarticError::Invalid(format!(
                "duplicate class at position {i}"
            )));
        }
    }
    // Global action of each Galois generator on the class indices.
    let mut global: Vec<Vec<usize>> = Vec::with_capacity(data.galois_on_picard.len());
    for t in &data.galois_on_picard {
        let mut p = Vec::with_capacity(classes.len());
        for c in classes {
            let img = t.mul_vec(c);
            let Some(&j) = index.get(img.as_slice()) else {
                return Err(DiagQuarticError::Invalid(
                    "class set is not closed under the Galois action".into(),
                ));
            };
            p.push(j);
        }
        global.push(p);
    }
    // Connected components under all generators.
    let n = classes.len();
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            members.push(i);
            for p in &global {
                if !seen[p[i]] {
                    seen[p[i]] = true;
                    stack.push(p[i]);
                }
            }
        }
        members.sort_unstable();
        let member_pos: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let orbit_classes: Vec<Vec<BigInt>> =
            members.iter().map(|&i| classes[i].clone()).collect();
        let restricted: Vec<Vec<usize>> = global
            .iter()
            .map(|p| members.iter().map(|&i| member_pos[&p[i]]).collect())
            .collect();
        orbits.push(GaloisOrbit::new(
            &data.picard,
            orbit_classes,
            restricted,
        )?);
    }
    Ok(orbits)
}

/// The Galois orbits of the 48 line classes themselves.
pub fn line_orbits(data: &PicardData) -> Result<Vec<GaloisOrbit>, DiagQuarticError> {
    galois_orbits_of_classes(data, &data.line_images)
}

/// Enumerates the conic classes: integral C with C² = −2 and C·H = 2.
/// Substituting v = C − H/2 turns the two conditions into v² = −3 and
/// v ⊥ H, so the solutions are exactly the norm −3 vectors of one coset of
/// the definite rank-(rank−1) complement of H — a far smaller enumeration
/// than any fixed-norm search in the full class lattice. A candidate is
/// discarded when it is the sum of two meeting line classes (such sums are
/// degenerate degree-2 divisors, not conics). Returns the kept classes
/// grouped into Galois orbits.
pub fn conic_classes(
    data: &PicardData,
    h: &[BigInt],
) -> Result<Vec<GaloisOrbit>, DiagQuarticError> {
    let rank = data.picard.rank();
    if h.len() != rank {
        return Err(DiagQuarticError::Invalid(
            "hyperplane class has the wrong length".into(),
        ));
    }
    if data.picard.inner(h, h) != BigInt::from(4) {
        return Err(DiagQuarticError::Invalid(
            "hyperplane class must have self-intersection 4".into(),
        ));
    }
    let gcd = h.iter().fold(BigInt::ZERO, |acc, x| acc.gcd(x));
    if gcd != BigInt::from(1) {
        return Err(DiagQuarticError::Invalid(
            "hyperplane class must be primitive".into(),
        ));
    }

    let h_sub = Sublattice::new(
        &data.picard,
        IntMat::from_fn(1, rank, |_, j| h[j].clone()),
    )?;
    let comp = orthogonal_complement(&data.picard, &h_sub)?;
    let comp_lat = comp.to_lattice()?;

    // A degree-1 class gives the affine solution u₀ of u·H = −2, placing the
    // coset representative s = H/2 + u₀ inside H^⊥ ⊗ Q.
    let one = BigInt::from(1);
    let deg_one = data
        .line_images
        .iter()
        .find(|img| data.picard.inner(img, h) == one)
        .ok_or_else(|| {
            DiagQuarticError::Invalid("no degree-1 class available for the coset shift".into())
        })?;
    let u0: Vec<BigInt> = deg_one.iter().map(|x| BigInt::from(-2) * x).collect();
    let two_q = BigRational::from(BigInt::from(2));
    let s: Vec<BigRational> = h
        .iter()
        .zip(&u0)
        .map(|(hi, ui)| BigRational::from(hi.clone()) / &two_q + BigRational::from(ui.clone()))
        .collect();

    // Coordinates of s in the complement basis: solve (B·Bᵀ)σ = B·s, then
    // check Bᵀσ = s exactly (s must lie in the complement's span).
    let b_q = QMat::from_int(&comp.basis);
    let bbt = b_q.mul_mat(&b_q.transpose());
    let rhs = b_q.mul_vec(&s);
    let sigma = bbt.solve(&rhs).ok_or_else(|| {
        DiagQuarticError::Invalid("complement basis Gram is singular".into())
    })?;
    let back = b_q.transpose().mul_vec(&sigma);
    if back != s {
        return Err(DiagQuarticError::Invalid(
            "coset representative does not lie in the complement span".into(),
        ));
    }

    let offsets = coset_short_vectors(
        &comp_lat,
        &sigma,
        &BigRational::from(BigInt::from(-3)),
    )?;

    // Sums of two meeting line classes have norm −2 and degree 2 as well;
    // they are exactly the candidates to discard.
    let mut pair_sums: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let n = data.line_images.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if data.gram48[(i, j)] == BigInt::from(1) {
                let sum: Vec<BigInt> = data.line_images[i]
                    .iter()
                    .zip(&data.line_images[j])
                    .map(|(a, b)| a + b)
                    .collect();
                pair_sums.insert(sum);
            }
        }
    }

    let mut kept: Vec<Vec<BigInt>> = Vec::new();
    for x in &offsets {
        // C = H + u₀ + Bᵀx, guaranteed integral.
        let mut class: Vec<BigInt> = h.iter().zip(&u0).map(|(a, b)| a + b).collect();
        for (i, xi) in x.iter().enumerate() {
            for (c, b) in class.iter_mut().zip(comp.basis.row(i)) {
                *c += xi * b;
            }
        }
        debug_assert_eq!(data.picard.inner(&class, &class), BigInt::from(-2));
        debug_assert_eq!(data.picard.inner(&class, h), BigInt::from(2));
        if pair_sums.contains(&class) {
            continue;
        }
        kept.push(class);
    }
    kept.sort();
    kept.dedup();
    galois_orbits_of_classes(data, &kept)
}

#[derive(Serialize, Deserialize)]
struct PicardJson {
    schema: String,
    gram48: Vec<Vec<FlexInt>>,
    galois_perms: Vec<Vec<usize>>,
    picard_gram: Vec<Vec<FlexInt>>,
    line_images: Vec<Vec<FlexInt>>,
    galois_on_picard: Vec<Vec<Vec<FlexInt>>>,
}

const PICARD_SCHEMA: &str = "picard-data/1";

fn mat_to_flex(m: &IntMat) -> Vec<Vec<FlexInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(FlexInt::from).collect())
        .collect()
}

fn flex_to_mat(rows: &[Vec<FlexInt>]) -> Result<IntMat, DiagQuarticError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(DiagQuarticError::Invalid("ragged or empty matrix".into()));
    }
    let mut parsed = Vec::with_capacity(nrows);
    for row in rows {
        let mut out = Vec::with_capacity(ncols);
        for v in row {
            out.push(v.parse().map_err(DiagQuarticError::Invalid)?);
        }
        parsed.push(out);
    }
    Ok(IntMat::from_fn(nrows, ncols, |i, j| parsed[i][j].clone()))
}

impl PicardData {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = PicardJson {
            schema: PICARD_SCHEMA.to_string(),
            gram48: mat_to_flex(&self.gram48),
            galois_perms: self.galois_perms.clone(),
            picard_gram: mat_to_flex(self.picard.gram()),
            line_images: self
                .line_images
                .iter()
                .map(|v| v.iter().map(FlexInt::from).collect())
                .collect(),
            galois_on_picard: self.galois_on_picard.iter().map(mat_to_flex).collect(),
        };
        serde_json::to_value(doc).expect("serialization cannot fail")
    }

    /// Reads back a cached document, revalidating everything that makes the
    /// data trustworthy: permutations preserve the incidence form, the
    /// quotient pairing reproduces it, the images span the quotient, and the
    /// transported matrices are isometries satisfying the transport identity.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, DiagQuarticError> {
        let doc: PicardJson = serde_json::from_value(v.clone())
            .map_err(|e| DiagQuarticError::Invalid(format!("malformed document: {e}")))?;
        if doc.schema != PICARD_SCHEMA {
            return Err(DiagQuarticError::Invalid(format!(
                "unsupported schema {}",
                doc.schema
            )));
        }
        let gram48 = flex_to_mat(&doc.gram48)?;
        if !gram48.is_square() || !gram48.is_symmetric() {
            return Err(DiagQuarticError::Invalid(
                "incidence form must be square and symmetric".into(),
            ));
        }
        validate_perms(&gram48, &doc.galois_perms)?;
        let picard = Lattice::new(flex_to_mat(&doc.picard_gram)?)?;
        let rank = picard.rank();
        let n = gram48.rows();
        if doc.line_images.len() != n {
            return Err(DiagQuarticError::Invalid(
                "one image per line is required".into(),
            ));
        }
        let mut line_images = Vec::with_capacity(n);
        for img in &doc.line_images {
            if img.len() != rank {
                return Err(DiagQuarticError::Invalid(
                    "image length does not match the quotient rank".into(),
                ));
            }
            let mut out = Vec::with_capacity(rank);
            for x in img {
                out.push(x.parse().map_err(DiagQuarticError::Invalid)?);
            }
            line_images.push(out);
        }
        for i in 0..n {
            for j in 0..n {
                if picard.inner(&line_images[i], &line_images[j]) != gram48[(i, j)] {
                    return Err(DiagQuarticError::Invalid(
                        "quotient pairing disagrees with the incidence form".into(),
                    ));
                }
            }
        }
        // The images must span the quotient lattice (unimodular row span).
        let stacked = IntMat::from_fn(n, rank, |i, j| line_images[i][j].clone());
        let (hnf, _) = hermite_normal_form(&stacked);
        let top = hnf.submatrix(&(0..rank).collect::<Vec<_>>(), &(0..rank).collect::<Vec<_>>());
        if !top.is_identity() {
            return Err(DiagQuarticError::Invalid(
                "line images do not span the quotient".into(),
            ));
        }
        if doc.galois_on_picard.len() != doc.galois_perms.len() {
            return Err(DiagQuarticError::Invalid(
                "matrix count does not match permutation count".into(),
            ));
        }
        let mut galois_on_picard = Vec::with_capacity(doc.galois_on_picard.len());
        for (k, rows) in doc.galois_on_picard.iter().enumerate() {
            let t = flex_to_mat(rows)?;
            if t.rows() != rank || t.cols() != rank {
                return Err(DiagQuarticError::Invalid(format!(
                    "transported matrix {k} has the wrong shape"
                )));
            }
            for i in 0..n {
                if t.mul_vec(&line_images[i]) != line_images[doc.galois_perms[k][i]] {
                    return Err(DiagQuarticError::Invalid(format!(
                        "transported matrix {k} violates the transport identity"
                    )));
                }
            }
            galois_on_picard.push(t);
        }
        GroupAction::new(&picard, galois_on_picard.clone())?;
        Ok(PicardData {
            gram48,
            galois_perms: doc.galois_perms,
            picard,
            line_images,
            galois_on_picard,
        })
    }
}
