//! The degree-16 Galois action on the 48 lines, derived directly from the
//! field automorphisms rather than from any external table: σ_{a,k} sends
//! ζ ↦ ζ^a (a odd) and γ ↦ ζ^{2k}·γ, and permutes the lines because it
//! permutes the solutions of each root equation defining them.

use super::lines::{rref_nf, LineP3};
use super::nf::{admissible_c, NFElem};
use super::DiagQuarticError;

/// The 16 automorphism parameters (a, k) in a fixed order, identity first.
pub fn sigma_parameters() -> Vec<(u64, u64)> {
    let mut v = Vec::with_capacity(16);
    for a in [1u64, 3, 5, 7] {
        for k in 0..4u64 {
            v.push((a, k));
        }
    }
    v
}

/// One permutation of the line indices per automorphism, in the order of
/// [`sigma_parameters`]. Each is found by applying σ to the span of every
/// line and locating the canonical form of the image among the inputs; any
/// failure to land back on a line signals an arithmetic bug and is an error.
pub fn galois_permutations(lines: &[LineP3]) -> Result<Vec<Vec<usize>>, DiagQuarticError> {
    if lines.is_empty() {
        return Err(DiagQuarticError::Invalid("no lines given".into()));
    }
    let c = lines[0].c().clone();
    if !admissible_c(&c) {
        return Err(DiagQuarticError::InadmissibleC(c.to_string()));
    }
    if lines.iter().any(|l| l.c() != &c) {
        return Err(DiagQuarticError::Invalid(
            "lines mix different surface parameters".into(),
        ));
    }
    let canon: Vec<_> = lines
        .iter()
        .map(|l| l.canonical_span())
        .collect::<Result<Vec<_>, _>>()?;
    let n = lines.len();
    let mut perms = Vec::with_capacity(16);
    for (a, k) in sigma_parameters() {
        let mut perm = Vec::with_capacity(n);
        for line in lines {
            let image: Vec<Vec<NFElem>> = line
                .span()
                .iter()
                .map(|pt| {
                    pt.iter()
                        .map(|e| e.apply_sigma(a, k))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (reduced, rank) = rref_nf(image, &c)?;
            if rank != 2 {
                return Err(DiagQuarticError::Invalid(format!(
                    "automorphism ({a},{k}) degenerated the span of {}",
                    line.tag()
                )));
            }
            let Some(idx) = canon.iter().position(|cs| cs == &reduced) else {
                return Err(DiagQuarticError::Invalid(format!(
                    "automorphism ({a},{k}) maps line {} off the configuration",
                    line.tag()
                )));
            };
            perm.push(idx);
        }
        let mut seen = vec![false; n];
        for &img in &perm {
            if seen[img] {
                return Err(DiagQuarticError::Invalid(format!(
                    "automorphism ({a},{k}) is not injective on lines"
                )));
            }
            seen[img] = true;
        }
        perms.push(perm);
    }
    for i in 0..perms.len() {
        for j in (i + 1)..perms.len() {
            if perms[i] == perms[j] {
                return Err(DiagQuarticError::Invalid(format!(
                    "automorphisms {i} and {j} act identically on the lines"
                )));
            }
        }
    }
    Ok(perms)
}

#[cfg(test)]
mod tests {
    use super::super::lines::{diagonal_lines, incidence_gram};
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn c3() -> BigRational {
        BigRational::from(BigInt::from(3))
    }

    fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
        q.iter().map(|&i| p[i]).collect()
    }

    #[test]
    fn identity_automorphism_fixes_every_line() {
        let lines = diagonal_lines(&c3()).unwrap();
        let perms = galois_permutations(&lines).unwrap();
        assert_eq!(perms.len(), 16);
        let id: Vec<usize> = (0..48).collect();
        assert_eq!(perms[0], id);
    }

    #[test]
    fn sixteen_distinct_permutations_closed_under_composition() {
        let lines = diagonal_lines(&c3()).unwrap();
        let perms = galois_permutations(&lines).unwrap();
        for p in &perms {
            for q in &perms {
                let pq = compose(p, q);
                assert!(
                    perms.contains(&pq),
                    "composition leaves the 16-element set"
                );
            }
        }
    }

    #[test]
    fn permutations_preserve_the_incidence_form() {
        let lines = diagonal_lines(&c3()).unwrap();
        let g = incidence_gram(&lines).unwrap();
        let perms = galois_permutations(&lines).unwrap();
        for p in &perms {
            for i in 0..48 {
                for j in 0..48 {
                    assert_eq!(g[(p[i], p[j])], g[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn conjugation_moving_gamma_translates_the_second_family() {
        let lines = diagonal_lines(&c3()).unwrap();
        let perms = galois_permutations(&lines).unwrap();
        // σ_{1,1} (γ ↦ ζ²γ) shifts the root index a of x = ζ^{2a}γ·z by one.
        let sigma = &perms[1];
        for (i, line) in lines.iter().enumerate() {
            if line.family() == 1 {
                let (a, b) = lines[sigma[i]].roots();
                let (a0, b0) = line.roots();
                assert_eq!(a, (a0 + 1) % 4);
                assert_eq!(b, (b0 + 1) % 4);
            }
            if line.family() == 0 {
                // Fourth roots of unity are fixed by γ-twists.
                assert_eq!(sigma[i], i);
            }
        }
    }
}
