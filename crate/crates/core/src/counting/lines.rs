//! Exhaustive line search on a surface model over a small finite field.
//!
//! Every line through two distinct rational surface points is canonicalized
//! by reduced row echelon form of its 2-row basis matrix and tested for
//! containment symbolically: the parametrization `s·P + t·Q` is substituted
//! into each defining form and the resulting binary form must vanish
//! identically — rational-point membership alone would not suffice over
//! fields smaller than the form degree.

use super::{CountError, PolyTerms, SurfaceModel};
use crate::ffield::{univariate_gcd, Fq};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Hard cap on the number of surface-point pairs a line search may visit.
pub const LINE_PAIR_BUDGET: u128 = 4_000_000;

/// A line in `P^d(F_q)`, stored as the reduced row echelon basis of its
/// 2-dimensional coordinate span.  Coordinates are packed base-`p` digit
/// vectors; over a prime field they are plain residues.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    /// Two echelon basis rows of length `ambient_dim + 1`.
    pub basis: [Vec<u32>; 2],
}

/// The canonical [`Line`] through two given points of `P^d(F_{p^n})`,
/// coordinates given as integers (reduced mod `p`).
pub fn line_through(p: u32, n: u32, a: &[i64], b: &[i64]) -> Result<Line, CountError> {
    let k = Fq::new(p, n)?;
    if a.len() != b.len() {
        return Err(CountError::Invalid("point dimension mismatch".into()));
    }
    let pa: Vec<u32> = a.iter().map(|&v| k.from_int(v)).collect();
    let pb: Vec<u32> = b.iter().map(|&v| k.from_int(v)).collect();
    let rows = line_rref(&k, &pa, &pb)
        .ok_or_else(|| CountError::Invalid("points are projectively equal".into()))?;
    Ok(Line {
        basis: [
            rows[0].iter().map(|&c| k.to_packed(c)).collect(),
            rows[1].iter().map(|&c| k.to_packed(c)).collect(),
        ],
    })
}

/// All lines over `F_{p^n}` contained in the surface, optionally filtered to
/// those disjoint from each given curve (no common point over any extension).
///
/// Each curve in `avoid` is a list of homogeneous forms in the same ambient
/// coordinates.  Lines are returned sorted by their canonical basis.
pub fn find_lines(
    m: &SurfaceModel,
    n: u32,
    avoid: &[Vec<PolyTerms>],
) -> Result<Vec<Line>, CountError> {
    m.validate()?;
    let k = Fq::new(m.p, n)?;
    let points = surface_points(m, &k);
    let pairs = (points.len() as u128) * (points.len().saturating_sub(1) as u128) / 2;
    if pairs > LINE_PAIR_BUDGET {
        return Err(CountError::LineBudget { pairs, budget: LINE_PAIR_BUDGET });
    }

    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut out: Vec<Line> = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let Some(rows) = line_rref(&k, &points[i], &points[j]) else {
                continue;
            };
            let key: Vec<u32> = rows
                .iter()
                .flat_map(|r| r.iter().map(|&c| k.to_packed(c)))
                .collect();
            if !seen.insert(key.clone()) {
                continue;
            }
            if !m
                .polys
                .iter()
                .all(|f| substitute(&k, f, &rows[0], &rows[1]).iter().all(|&c| c == 0))
            {
                continue;
            }
            if !avoid
                .iter()
                .all(|curve| line_disjoint_from(&k, curve, &rows[0], &rows[1]))
            {
                continue;
            }
            let (b0, b1) = key.split_at(rows[0].len());
            out.push(Line { basis: [b0.to_vec(), b1.to_vec()] });
        }
    }
    out.sort();
    Ok(out)
}

/// The `q + 1` rational points of a line, as coordinate vectors of element
/// codes: `P + t·Q` for each `t`, then `Q` itself.
pub fn line_points(k: &Fq, p_row: &[u32], q_row: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(k.size() as usize + 1);
    for t in k.elements() {
        out.push(
            p_row
                .iter()
                .zip(q_row)
                .map(|(&a, &b)| k.add(a, k.mul(t, b)))
                .collect(),
        );
    }
    out.push(q_row.to_vec());
    out
}

/// Canonical projective representatives of the surface's rational points.
fn surface_points(m: &SurfaceModel, k: &Fq) -> Vec<Vec<u32>> {
    let d = m.ambient_dim;
    let mut out = Vec::new();
    let mut rep = vec![0u32; d + 1];
    // Charts by leading-one position.
    for lead in 0..=d {
        rep.iter_mut().for_each(|v| *v = 0);
        rep[lead] = k.one();
        let free = d - lead;
        let mut odo = vec![0u32; free];
        loop {
            for (i, &v) in odo.iter().enumerate() {
                rep[lead + 1 + i] = v;
            }
            if m.polys.iter().all(|f| eval_at(k, f, &rep) == 0) {
                out.push(rep.clone());
            }
            let mut pos = 0;
            loop {
                if pos == free {
                    break;
                }
                odo[pos] += 1;
                if odo[pos] < k.size() {
                    break;
                }
                odo[pos] = 0;
                pos += 1;
            }
            if pos == free {
                break;
            }
        }
    }
    out
}

fn eval_at(k: &Fq, f: &PolyTerms, point: &[u32]) -> u32 {
    let mut acc = 0u32;
    'term: for (c, e) in f {
        let mut t = k.from_int(i64::from(*c));
        for (j, &ej) in e.iter().enumerate() {
            if ej == 0 {
                continue;
            }
            if point[j] == 0 {
                continue 'term;
            }
            t = k.mul(t, k.pow(point[j], u64::from(ej)));
        }
        acc = k.add(acc, t);
    }
    acc
}

/// Reduced row echelon basis of the span of two coordinate rows, or `None`
/// when the points are projectively equal.
fn line_rref(k: &Fq, a: &[u32], b: &[u32]) -> Option<[Vec<u32>; 2]> {
    let mut r1 = a.to_vec();
    let mut r2 = b.to_vec();
    let j1 = (0..r1.len()).find(|&j| r1[j] != 0 || r2[j] != 0)?;
    if r1[j1] == 0 {
        std::mem::swap(&mut r1, &mut r2);
    }
    let inv = k.inv(r1[j1]);
    for c in r1.iter_mut() {
        *c = k.mul(*c, inv);
    }
    let f = r2[j1];
    if f != 0 {
        for (c2, &c1) in r2.iter_mut().zip(&r1) {
            *c2 = k.sub(*c2, k.mul(f, c1));
        }
    }
    let j2 = (0..r2.len()).find(|&j| r2[j] != 0)?;
    let inv = k.inv(r2[j2]);
    for c in r2.iter_mut() {
        *c = k.mul(*c, inv);
    }
    let f = r1[j2];
    if f != 0 {
        for (c1, &c2) in r1.iter_mut().zip(&r2) {
            *c1 = k.sub(*c1, k.mul(f, c2));
        }
    }
    Some([r1, r2])
}

/// Coefficients (ascending in `s`) of the binary form `f(s·P + t·Q)`.
fn substitute(k: &Fq, f: &PolyTerms, p_row: &[u32], q_row: &[u32]) -> Vec<u32> {
    let degree: u32 = f.first().map(|(_, e)| e.iter().sum()).unwrap_or(0);
    let mut acc = vec![0u32; degree as usize + 1];
    for (c, e) in f {
        let mut term = vec![k.from_int(i64::from(*c))];
        for (j, &ej) in e.iter().enumerate() {
            if ej == 0 {
                continue;
            }
            term = binary_mul(k, &term, &pow_linear(k, p_row[j], q_row[j], ej));
        }
        for (i, &v) in term.iter().enumerate() {
            acc[i] = k.add(acc[i], v);
        }
    }
    acc
}

/// `(P s + Q t)^e` as an ascending-in-`s` coefficient vector:
/// entry `k` is `C(e, k) P^k Q^(e-k)`.
fn pow_linear(k: &Fq, pj: u32, qj: u32, e: u32) -> Vec<u32> {
    const BINOM: [[u64; 5]; 5] = [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [1, 2, 1, 0, 0],
        [1, 3, 3, 1, 0],
        [1, 4, 6, 4, 1],
    ];
    assert!(e <= 4, "form degree above 4 is not needed here");
    (0..=e)
        .map(|i| {
            let b = k.from_int(BINOM[e as usize][i as usize] as i64);
            k.mul(b, k.mul(k.pow(pj, u64::from(i)), k.pow(qj, u64::from(e - i))))
        })
        .collect()
}

fn binary_mul(k: &Fq, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(ca, cb));
        }
    }
    out
}

/// True when the line `s·P + t·Q` shares no point, over any field extension,
/// with the zero locus of the given forms.
fn line_disjoint_from(k: &Fq, curve: &[PolyTerms], p_row: &[u32], q_row: &[u32]) -> bool {
    let forms: Vec<Vec<u32>> = curve.iter().map(|f| substitute(k, f, p_row, q_row)).collect();
    let nonzero: Vec<&Vec<u32>> = forms.iter().filter(|f| f.iter().any(|&c| c != 0)).collect();
    if nonzero.is_empty() {
        // The line lies inside the curve (or the curve is the whole space).
        return false;
    }
    // The point (s : t) = (0 : 1) lies on the curve iff every nonzero form
    // has zero coefficient on its pure t-power term (entry 0, the s^0 slot).
    if nonzero.iter().all(|f| f[0] == 0) {
        return false;
    }
    // Remaining candidates lie in the chart s = 1: common roots of the
    // dehomogenized polynomials (ascending in t means reversing).
    let mut gcd: Option<Vec<u32>> = None;
    for f in nonzero {
        let u: Vec<u32> = f.iter().rev().copied().collect();
        gcd = Some(match gcd {
            None => u,
            Some(g) => univariate_gcd(k, &g, &u),
        });
    }
    gcd.map_or(true, |g| g.len() <= 1)
}

#[cfg(test)]
mod tests {
    use super::super::{diagonal_quartic_model, y3_model, y5_model};
    use super::*;

    #[test]
    fn y3_contains_the_expected_line() {
        let m = y3_model();
        let lines = find_lines(&m, 1, &[]).unwrap();
        let witness = line_through(3, 1, &[1, 1, 2, 0, 1], &[2, 1, 1, 1, 0]).unwrap();
        assert!(lines.contains(&witness), "witness line missing from {lines:?}");
    }

    #[test]
    fn y5_has_no_rational_lines() {
        let m = y5_model();
        assert!(find_lines(&m, 1, &[]).unwrap().is_empty());
    }

    #[test]
    fn diagonal_quartic_contains_the_obvious_line() {
        let m = diagonal_quartic_model(5, 1).unwrap();
        let lines = find_lines(&m, 1, &[]).unwrap();
        let witness = line_through(5, 1, &[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap();
        assert!(lines.contains(&witness));
    }

    #[test]
    fn every_emitted_line_lies_on_the_surface_pointwise() {
        let m = y3_model();
        let k = Fq::new(3, 1).unwrap();
        for line in find_lines(&m, 1, &[]).unwrap() {
            let b0: Vec<u32> = line.basis[0].iter().map(|&v| k.from_packed(v)).collect();
            let b1: Vec<u32> = line.basis[1].iter().map(|&v| k.from_packed(v)).collect();
            for pt in line_points(&k, &b0, &b1) {
                for f in &m.polys {
                    assert_eq!(eval_at(&k, f, &pt), 0);
                }
            }
        }
    }

    #[test]
    fn avoid_filter_drops_lines_meeting_a_curve() {
        let m = diagonal_quartic_model(5, 1).unwrap();
        // The curve x0 = x1, x2 = x3 is itself a line on the surface.
        let curve: Vec<PolyTerms> = vec![
            vec![(1, vec![1, 0, 0, 0]), (4, vec![0, 1, 0, 0])],
            vec![(1, vec![0, 0, 1, 0]), (4, vec![0, 0, 0, 1])],
        ];
        let all = find_lines(&m, 1, &[]).unwrap();
        let filtered = find_lines(&m, 1, &[curve]).unwrap();
        let witness = line_through(5, 1, &[1, 1, 0, 0], &[0, 0, 1, 1]).unwrap();
        assert!(all.contains(&witness));
        assert!(!filtered.contains(&witness), "a line is never disjoint from itself");
        assert!(filtered.len() < all.len());
        for l in &filtered {
            assert!(all.contains(l));
        }
    }

    #[test]
    fn rref_is_stable_under_basis_change() {
        let k = Fq::new(3, 1).unwrap();
        let a = [1, 1, 2, 0, 1].map(|v| k.from_int(v)).to_vec();
        let b = [2, 1, 1, 1, 0].map(|v| k.from_int(v)).to_vec();
        let base = line_rref(&k, &a, &b).unwrap();
        // Any two distinct points of the same line give the same echelon basis.
        let pts = line_points(&k, &base[0], &base[1]);
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if let Some(other) = line_rref(&k, &pts[i], &pts[j]) {
                    assert_eq!(base, other);
                }
            }
        }
    }
}
