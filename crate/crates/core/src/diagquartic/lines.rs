//! The 48 lines on the diagonal quartic surface
//! x⁴ − y⁴ = c·(z⁴ − w⁴) in P³, organized in three families of 16 according
//! to which pair of coordinate planes cuts them out, and the incidence form
//! on their classes.

use super::nf::{admissible_c, NFElem};
use super::DiagQuarticError;
use crate::exact::IntMat;
use num_bigint::BigInt;
use num_rational::BigRational;

/// A line in P³ over Q(ζ, γ), stored as a 2×4 spanning pair of points.
#[derive(Clone, Debug)]
pub struct LineP3 {
    tag: String,
    family: usize,
    root_a: usize,
    root_b: usize,
    span: Vec<Vec<NFElem>>,
    c: BigRational,
}

impl LineP3 {
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn family(&self) -> usize {
        self.family
    }

    pub fn roots(&self) -> (usize, usize) {
        (self.root_a, self.root_b)
    }

    /// The two spanning points, each a length-4 coordinate vector.
    pub fn span(&self) -> &[Vec<NFElem>] {
        &self.span
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// Substitution check: every point s·u + t·v of the line satisfies
    /// x⁴ − y⁴ − c·z⁴ + c·w⁴ = 0, which holds iff all five (s, t)-bidegree
    /// components Σᵢ λᵢ·uᵢ^m·vᵢ^{4−m} vanish.
    pub fn lies_on_surface(&self) -> bool {
        let lambda = surface_lambda(&self.c);
        let u = &self.span[0];
        let v = &self.span[1];
        for m in 0..=4u64 {
            let mut acc = NFElem::zero(&self.c);
            for i in 0..4 {
                let term = u[i].pow(m).mul(&v[i].pow(4 - m)).scale(&lambda[i]);
                acc = acc.add(&term);
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    /// Reduced row echelon form of the span — a canonical representative of
    /// the line, so two `LineP3` are geometrically equal iff these agree.
    pub fn canonical_span(&self) -> Result<Vec<Vec<NFElem>>, DiagQuarticError> {
        let (rows, rank) = rref_nf(self.span.clone(), &self.c)?;
        if rank != 2 {
            return Err(DiagQuarticError::Invalid(format!(
                "span of line {} has rank {rank}, expected 2",
                self.tag
            )));
        }
        Ok(rows)
    }

    pub fn same_line(&self, other: &LineP3) -> Result<bool, DiagQuarticError> {
        Ok(self.canonical_span()? == other.canonical_span()?)
    }
}

/// Coefficients (λ_x, λ_y, λ_z, λ_w) = (1, −1, −c, c) of the defining
/// quartic λ_x·x⁴ + λ_y·y⁴ + λ_z·z⁴ + λ_w·w⁴.
fn surface_lambda(c: &BigRational) -> [BigRational; 4] {
    [
        BigRational::from(BigInt::from(1)),
        BigRational::from(BigInt::from(-1)),
        -c.clone(),
        c.clone(),
    ]
}

const FAMILY_NAMES: [&str; 3] = ["xy-zw", "xz-yw", "xw-yz"];

/// The 48 lines of the surface, indexed 16·family + 4·a + b:
///
/// * family 0 (`xy-zw`): x = ζ^{2a}·y, z = ζ^{2b}·w (roots of t⁴ = 1);
/// * family 1 (`xz-yw`): x = ζ^{2a}γ·z, y = ζ^{2b}γ·w (roots of t⁴ = c);
/// * family 2 (`xw-yz`): x = ζ^{2a+1}γ·w, y = ζ^{2b+1}γ·z (roots of t⁴ = −c).
pub fn diagonal_lines(c: &BigRational) -> Result<Vec<LineP3>, DiagQuarticError> {
    if !admissible_c(c) {
        return Err(DiagQuarticError::InadmissibleC(c.to_string()));
    }
    let one = |zi: i64| NFElem::monomial(c, BigRational::from(BigInt::from(1)), zi, 0);
    let root = |zi: i64| NFElem::monomial(c, BigRational::from(BigInt::from(1)), zi, 1);
    let zero = NFElem::zero(c);
    let mut lines = Vec::with_capacity(48);
    for family in 0..3usize {
        for a in 0..4usize {
            for b in 0..4usize {
                let (alpha, beta) = match family {
                    0 => (one(2 * a as i64), one(2 * b as i64)),
                    1 => (root(2 * a as i64), root(2 * b as i64)),
                    _ => (root(2 * a as i64 + 1), root(2 * b as i64 + 1)),
                };
                let span = match family {
                    // x = α·y, z = β·w: points (α, 1, 0, 0) and (0, 0, β, 1).
                    0 => vec![
                        vec![alpha, one(0), zero.clone(), zero.clone()],
                        vec![zero.clone(), zero.clone(), beta, one(0)],
                    ],
                    // x = α·z, y = β·w: points (α, 0, 1, 0) and (0, β, 0, 1).
                    1 => vec![
                        vec![alpha, zero.clone(), one(0), zero.clone()],
                        vec![zero.clone(), beta, zero.clone(), one(0)],
                    ],
                    // x = α·w, y = β·z: points (α, 0, 0, 1) and (0, β, 1, 0).
                    _ => vec![
                        vec![alpha, zero.clone(), zero.clone(), one(0)],
                        vec![zero.clone(), beta, one(0), zero.clone()],
                    ],
                };
                lines.push(LineP3 {
                    tag: format!("{}:a{a}b{b}", FAMILY_NAMES[family]),
                    family,
                    root_a: a,
                    root_b: b,
                    span,
                    c: c.clone(),
                });
            }
        }
    }
    Ok(lines)
}

/// Gram matrix of the line classes: self-intersection −2 on the diagonal,
/// and for i ≠ j the entry is 1 when the lines meet — detected exactly by
/// the vanishing of the 4×4 determinant of the two stacked spans — else 0.
pub fn incidence_gram(lines: &[LineP3]) -> Result<IntMat, DiagQuarticError> {
    let n = lines.len();
    if n == 0 {
        return Err(DiagQuarticError::Invalid("no lines given".into()));
    }
    let c = lines[0].c.clone();
    if lines.iter().any(|l| l.c != c) {
        return Err(DiagQuarticError::Invalid(
            "lines mix different surface parameters".into(),
        ));
    }
    let mut g = IntMat::zero(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut stacked = Vec::with_capacity(4);
            stacked.extend(lines[i].span.iter().cloned());
            stacked.extend(lines[j].span.iter().cloned());
            let meet = det_nf(&stacked, &c).is_zero();
            if meet {
                g[(i, j)] = BigInt::from(1);
                g[(j, i)] = BigInt::from(1);
            }
        }
    }
    Ok(g)
}

/// Laplace expansion along the first row; exact, fine for the 4×4 case.
fn det_nf(m: &[Vec<NFElem>], c: &BigRational) -> NFElem {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = NFElem::zero(c);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<NFElem>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&det_nf(&minor, c));
        acc = if col % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Gauss–Jordan over the coefficient algebra; returns the reduced matrix
/// and its rank. Fails only if a needed pivot is a zero divisor, which
/// cannot happen over a field parameter.
pub(super) fn rref_nf(
    mut rows: Vec<Vec<NFElem>>,
    c: &BigRational,
) -> Result<(Vec<Vec<NFElem>>, usize), DiagQuarticError> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let _ = c;
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().ok_or_else(|| {
            DiagQuarticError::Invalid("span reduction hit a non-invertible pivot".into())
        })?;
        rows[r] = rows[r].iter().map(|e| e.mul(&inv)).collect();
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                rows[i] = rows[i]
                    .iter()
                    .zip(&rows[r])
                    .map(|(a, b)| a.sub(&b.mul(&f)))
                    .collect();
            }
        }
        r += 1;
    }
    Ok((rows, r))
}
