//! Isometry search between lattices and full isometry groups of definite
//! lattices, by exact backtracking.
//!
//! Three strategies, tried in order of strength:
//! 1. definite pairs — complete backtracking over exact short-vector lists;
//! 2. even indefinite pairs — split a hyperbolic plane off both sides
//!    (isotropic vector with a unimodular partner) and compare the definite
//!    complements, reassembling a verified certificate;
//! 3. bounded coefficient-box backtracking with a node budget.
//!
//! Every certificate is re-verified exactly before being returned.

use super::{short_vectors, Lattice, LatticeError};
use crate::exact::{integer_kernel, IntMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Outcome of [`isometry_search`]: a verified certificate, a cheap-invariant
/// refutation, or an honest "searched and did not find" — exhaustion of a
/// bounded search is *not* a proof of non-isometry.
#[derive(Clone, Debug)]
pub enum IsometryOutcome {
    /// `T` with `Tᵀ·G₂·T = G₁` (columns are images of the `L1` basis).
    Found(IntMat),
    /// Rank, determinant, signature, or parity differ; the lattices are not
    /// isometric. The string names the failing invariant.
    InvariantMismatch(String),
    /// The bounded search exhausted without a certificate.
    Inconclusive,
}

fn invariant_mismatch(l1: &Lattice, l2: &Lattice) -> Option<String> {
    if l1.rank() != l2.rank() {
        return Some(format!("rank {} vs {}", l1.rank(), l2.rank()));
    }
    if l1.det() != l2.det() {
        return Some(format!("determinant {} vs {}", l1.det(), l2.det()));
    }
    if l1.signature() != l2.signature() {
        return Some(format!(
            "signature {:?} vs {:?}",
            l1.signature(),
            l2.signature()
        ));
    }
    if l1.is_even() != l2.is_even() {
        return Some(format!(
            "parity {} vs {}",
            if l1.is_even() { "even" } else { "odd" },
            if l2.is_even() { "even" } else { "odd" }
        ));
    }
    None
}

/// Box-enumeration guard: searches whose candidate boxes exceed this many
/// vectors return `Inconclusive` instead of running for hours.
const BOX_CAP: u128 = 60_000_000;

/// Pairing-check budget for the box backtracking. Keeps worst-case box
/// searches to seconds; exhaustion reads as "no certificate found".
const NODE_BUDGET: u64 = 50_000_000;

/// Searches for an isometry `L1 → L2` and returns a verified certificate if
/// one is found. Cheap invariants are checked first; then, in order: a
/// complete short-vector backtracking when the pair is definite (rank ≤ 8),
/// a hyperbolic-plane split when the pair is even and indefinite, and
/// finally bounded coefficient-box backtracking with coordinates in
/// `[-coeff_bound, coeff_bound]` in both directions. Exhaustion of all
/// strategies is reported as `Inconclusive`, never as non-isometry.
pub fn isometry_search(l1: &Lattice, l2: &Lattice, coeff_bound: i64) -> IsometryOutcome {
    if let Some(reason) = invariant_mismatch(l1, l2) {
        return IsometryOutcome::InvariantMismatch(reason);
    }
    if l1.is_definite() && l1.rank() <= 8 {
        // Reduce both Grams first: the short-vector lists are enumerated by
        // the diagonal norms, so a skewed basis with huge norms would make
        // them astronomically long.
        let (g1r, u1) = greedy_reduce_definite(l1.gram());
        let (g2r, u2) = greedy_reduce_definite(l2.gram());
        let (r1, r2) = (
            Lattice::new(g1r).expect("reduced gram stays nondegenerate"),
            Lattice::new(g2r).expect("reduced gram stays nondegenerate"),
        );
        if let Ok(mut found) = definite_directed_search(&r1, &r2, 1) {
            if let Some(phi) = found.pop() {
                let t = u2.mul_mat(&phi).mul_mat(&u1.inverse_unimodular());
                assert!(verify_map(l1, l2, &t), "reduced certificate failed to verify");
                return IsometryOutcome::Found(t);
            }
            // The short-vector search is complete: no certificate exists.
            // Reported as Inconclusive, which under-claims but stays sound.
            return IsometryOutcome::Inconclusive;
        }
    }
    if !l1.is_definite() && l1.is_even() && l2.is_even() && l1.rank() >= 3 {
        if let Some(t) = hyperbolic_split_search(l1, l2, coeff_bound) {
            assert!(verify_map(l1, l2, &t), "split certificate failed to verify");
            return IsometryOutcome::Found(t);
        }
    }
    if let Some(t) = directed_search(l1, l2, coeff_bound, 1).into_iter().next() {
        return IsometryOutcome::Found(t);
    }
    if let Some(t) = directed_search(l2, l1, coeff_bound, 1).into_iter().next() {
        let inv = t.inverse_unimodular();
        debug_assert!(verify_map(l1, l2, &inv));
        return IsometryOutcome::Found(inv);
    }
    IsometryOutcome::Inconclusive
}

/// Backtracking over exact short-vector candidate lists: complete for
/// definite pairs, so an empty result means the lattices are not isometric.
/// Errors bubble up from the short-vector enumeration (e.g. size caps).
fn definite_directed_search(
    l1: &Lattice,
    l2: &Lattice,
    cap: usize,
) -> Result<Vec<IntMat>, LatticeError> {
    let n = l1.rank();
    let mut candidate_lists: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    for i in 0..n {
        let norm = l1.gram()[(i, i)].clone();
        candidate_lists.push(short_vectors(l2, &norm)?);
    }
    let mut results = Vec::new();
    let mut chosen: Vec<&Vec<BigInt>> = Vec::with_capacity(n);

    fn backtrack<'a>(
        level: usize,
        n: usize,
        l1: &Lattice,
        l2: &Lattice,
        cands: &'a [Vec<Vec<BigInt>>],
        chosen: &mut Vec<&'a Vec<BigInt>>,
        results: &mut Vec<IntMat>,
        cap: usize,
    ) {
        if results.len() >= cap {
            return;
        }
        if level == n {
            results.push(IntMat::from_fn(n, n, |i, j| chosen[j][i].clone()));
            return;
        }
        'cands: for cand in &cands[level] {
            for (prev, pv) in chosen.iter().enumerate() {
                if l2.inner(cand, pv) != l1.gram()[(level, prev)] {
                    continue 'cands;
                }
            }
            chosen.push(cand);
            backtrack(level + 1, n, l1, l2, cands, chosen, results, cap);
            chosen.pop();
            if results.len() >= cap {
                return;
            }
        }
    }

    backtrack(0, n, l1, l2, &candidate_lists, &mut chosen, &mut results, cap);
    for t in &results {
        debug_assert!(verify_map(l1, l2, t));
    }
    Ok(results)
}

/// Greatest common divisor of a vector's entries (0 for the zero vector).
fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::ZERO, |acc, x| acc.gcd(x))
}

/// Exact greedy (Lagrange-style) reduction of a definite Gram matrix:
/// returns `(reduced, u)` with `uᵀ·gram·u = reduced`, `u` unimodular.
/// Repeatedly sorts the basis by norm and size-reduces each vector against
/// the shorter ones; sweeps are capped, so the result is merely short, not
/// canonical — quality only affects search speed, never correctness.
fn greedy_reduce_definite(gram: &IntMat) -> (IntMat, IntMat) {
    let n = gram.rows();
    let negative = gram[(0, 0)].is_negative();
    // Work with a positive definite copy.
    let mut g = IntMat::from_fn(n, n, |i, j| {
        if negative {
            -gram[(i, j)].clone()
        } else {
            gram[(i, j)].clone()
        }
    });
    let mut u = IntMat::identity(n);
    let swap = |g: &mut IntMat, u: &mut IntMat, i: usize, j: usize| {
        g.swap_rows(i, j);
        g.swap_cols(i, j);
        u.swap_cols(i, j);
    };
    for _sweep in 0..100 {
        // Selection sort by diagonal norm.
        for i in 0..n {
            let mut best = i;
            for j in i + 1..n {
                if g[(j, j)] < g[(best, best)] {
                    best = j;
                }
            }
            if best != i {
                swap(&mut g, &mut u, i, best);
            }
        }
        let mut improved = false;
        for j in 1..n {
            for i in 0..j {
                // Nearest integer to g[i][j]/g[i][i] (g[i][i] > 0).
                let two = BigInt::from(2);
                let t = (&two * &g[(i, j)] + &g[(i, i)]).div_floor(&(&two * &g[(i, i)]));
                if t.is_zero() {
                    continue;
                }
                let old_norm = g[(j, j)].clone();
                // Column op then row op keep g symmetric: bⱼ ← bⱼ − t·bᵢ.
                for k in 0..n {
                    let d = &t * &g[(k, i)];
                    g[(k, j)] -= d;
                }
                for k in 0..n {
                    let d = &t * &g[(i, k)];
                    g[(j, k)] -= d;
                }
                for k in 0..n {
                    let d = &t * &u[(k, i)];
                    u[(k, j)] -= d;
                }
                if g[(j, j)] < old_norm {
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    let reduced = IntMat::from_fn(n, n, |i, j| {
        if negative {
            -g[(i, j)].clone()
        } else {
            g[(i, j)].clone()
        }
    });
    debug_assert_eq!(u.transpose().mul_mat(gram).mul_mat(&u), reduced);
    debug_assert_eq!(u.det().abs(), BigInt::one());
    (reduced, u)
}

/// An integer solution `x` of `Σ aᵢxᵢ = 1`, or None when the content of `a`
/// is not 1. Folded extended Euclid over the coefficients.
fn solve_unit_combination(a: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::ZERO;
    let mut x: Vec<BigInt> = vec![BigInt::ZERO; a.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = ai.abs();
            x[i] = if ai.is_negative() {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
            continue;
        }
        let ext = g.extended_gcd(ai);
        // ext.gcd = ext.x·g + ext.y·aᵢ
        for xj in x.iter_mut().take(i) {
            *xj *= &ext.x;
        }
        x[i] = ext.y.clone();
        g = ext.gcd;
    }
    if g.is_one() {
        debug_assert!(a
            .iter()
            .zip(&x)
            .map(|(ai, xi)| ai * xi)
            .sum::<BigInt>()
            .is_one());
        Some(x)
    } else {
        None
    }
}

/// A hyperbolic pair in `l`: primitive isotropic `e` whose pairing functional
/// is surjective, and `f` with `e·f = 1`, `f² = 0`. Requires `l` even.
/// Searches coefficient boxes of growing radius up to `coeff_bound`.
fn find_hyperbolic_pair(l: &Lattice, coeff_bound: i64) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let n = l.rank();
    let g = l.gram().to_i64_rows()?;
    let two = BigInt::from(2);
    for radius in 1..=coeff_bound {
        let width = (2 * radius + 1) as u128;
        let mut box_size: u128 = 1;
        for _ in 0..n {
            box_size = box_size.saturating_mul(width);
            if box_size > BOX_CAP {
                return None;
            }
        }
        let mut v = vec![-radius; n];
        loop {
            // Only sup-norm-exactly-radius vectors: inner shells were already
            // visited at smaller radii.
            if v.iter().any(|&c| c.abs() == radius) && quad_form(&g, &v, &v) == 0 {
                let e: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
                if !e.iter().all(|c| c.is_zero()) && content(&e).is_one() {
                    let ge = l.gram().mul_vec(&e);
                    if let Some(fp) = solve_unit_combination(&ge) {
                        // f'² is even (l is even), so f = f' − (f'²/2)·e is
                        // integral, isotropic, and pairs to 1 with e.
                        let fp_norm = l.inner(&fp, &fp);
                        let (half, rem) = fp_norm.div_rem(&two);
                        debug_assert!(rem.is_zero());
                        let f: Vec<BigInt> = fp
                            .iter()
                            .zip(&e)
                            .map(|(fi, ei)| fi - &half * ei)
                            .collect();
                        debug_assert!(l.inner(&f, &f).is_zero());
                        debug_assert!(l.inner(&e, &f).is_one());
                        return Some((e, f));
                    }
                }
            }
            let mut idx = 0;
            loop {
                if idx == n {
                    break;
                }
                if v[idx] < radius {
                    v[idx] += 1;
                    break;
                }
                v[idx] = -radius;
                idx += 1;
            }
            if idx == n {
                break;
            }
        }
    }
    None
}

/// Splits `U ⊕ (complement)` off an even lattice: returns the unimodular
/// change of basis `S` (columns: e, f, then a saturated basis of their
/// orthogonal complement) and the complement's Gram matrix.
fn split_off_hyperbolic_plane(l: &Lattice, coeff_bound: i64) -> Option<(IntMat, IntMat)> {
    let n = l.rank();
    let (e, f) = find_hyperbolic_pair(l, coeff_bound)?;
    let ge = l.gram().mul_vec(&e);
    let gf = l.gram().mul_vec(&f);
    let pairing_rows = IntMat::from_fn(2, n, |r, c| {
        if r == 0 {
            ge[c].clone()
        } else {
            gf[c].clone()
        }
    });
    let kernel = integer_kernel(&pairing_rows);
    if kernel.rows() != n - 2 {
        return None;
    }
    let s = IntMat::from_fn(n, n, |r, c| match c {
        0 => e[r].clone(),
        1 => f[r].clone(),
        _ => kernel[(c - 2, r)].clone(),
    });
    // U is a unimodular direct summand, so (e, f, kernel basis) is a basis of
    // the whole lattice.
    if s.det().abs() != BigInt::one() {
        return None;
    }
    let comp_gram = IntMat::from_fn(n - 2, n - 2, |i, j| {
        l.inner(&kernel.row(i).to_vec(), &kernel.row(j).to_vec())
    });
    Some((s, comp_gram))
}

/// Even indefinite strategy: split a hyperbolic plane off both lattices,
/// find an isometry of the complements (recursively), and conjugate the
/// block-diagonal map back to the standard bases.
fn hyperbolic_split_search(l1: &Lattice, l2: &Lattice, coeff_bound: i64) -> Option<IntMat> {
    let n = l1.rank();
    let (s1, k1_gram) = split_off_hyperbolic_plane(l1, coeff_bound)?;
    let (s2, k2_gram) = split_off_hyperbolic_plane(l2, coeff_bound)?;
    let k1 = Lattice::new(k1_gram).ok()?;
    let k2 = Lattice::new(k2_gram).ok()?;
    let phi = match isometry_search(&k1, &k2, coeff_bound) {
        IsometryOutcome::Found(t) => t,
        _ => return None,
    };
    // Split coordinates on both sides see the same Gram blockdiag(U, K), so
    // blockdiag(I₂, φ) is an isometry there; conjugate to standard bases.
    let d = IntMat::from_fn(n, n, |i, j| {
        if i < 2 || j < 2 {
            if i == j {
                BigInt::one()
            } else {
                BigInt::ZERO
            }
        } else {
            phi[(i - 2, j - 2)].clone()
        }
    });
    let t = s2.mul_mat(&d).mul_mat(&s1.inverse_unimodular());
    verify_map(l1, l2, &t).then_some(t)
}

/// All isometries `L1 → L2` with image coefficients in the box, up to `cap`
/// results. Used for brute-force group samples in small ranks.
pub fn all_isometries(l1: &Lattice, l2: &Lattice, coeff_bound: i64, cap: usize) -> Vec<IntMat> {
    if invariant_mismatch(l1, l2).is_some() {
        return vec![];
    }
    directed_search(l1, l2, coeff_bound, cap)
}

fn verify_map(l1: &Lattice, l2: &Lattice, t: &IntMat) -> bool {
    &t.transpose().mul_mat(l2.gram()).mul_mat(t) == l1.gram()
}

/// Core backtracking: enumerate the candidate box once, bucket by norm, then
/// assign images level by level with exact pairing checks.
fn directed_search(l1: &Lattice, l2: &Lattice, coeff_bound: i64, cap: usize) -> Vec<IntMat> {
    let n = l1.rank();
    let width = 2 * coeff_bound as u128 + 1;
    let mut box_size: u128 = 1;
    for _ in 0..n {
        box_size = box_size.saturating_mul(width);
        if box_size > BOX_CAP {
            return vec![];
        }
    }

    // Fast path in i64: all our Gram matrices and bounds are tiny. Pairings
    // of box vectors are bounded by n²·max|G|·bound², well inside i64 via
    // i128 accumulation.
    let g1 = l1
        .gram()
        .to_i64_rows()
        .expect("gram entries fit in i64 for search");
    let g2 = l2
        .gram()
        .to_i64_rows()
        .expect("gram entries fit in i64 for search");

    let needed_norms: Vec<i64> = (0..n).map(|i| g1[i][i]).collect();
    let norm_set: std::collections::BTreeSet<i64> = needed_norms.iter().copied().collect();

    // One pass over the box, keeping vectors whose norm occurs on the
    // diagonal of G1.
    let mut buckets: std::collections::BTreeMap<i64, Vec<Vec<i64>>> =
        norm_set.iter().map(|&v| (v, Vec::new())).collect();
    let mut v = vec![-coeff_bound; n];
    loop {
        let norm = quad_form(&g2, &v, &v);
        if let Some(b) = buckets.get_mut(&norm) {
            b.push(v.clone());
        }
        // Odometer increment.
        let mut idx = 0;
        loop {
            if idx == n {
                break;
            }
            if v[idx] < coeff_bound {
                v[idx] += 1;
                break;
            }
            v[idx] = -coeff_bound;
            idx += 1;
        }
        if idx == n {
            break;
        }
    }

    let mut results = Vec::new();
    let mut chosen: Vec<&Vec<i64>> = Vec::with_capacity(n);
    let mut budget = NODE_BUDGET;

    fn backtrack<'a>(
        level: usize,
        n: usize,
        g1: &[Vec<i64>],
        g2: &[Vec<i64>],
        buckets: &'a std::collections::BTreeMap<i64, Vec<Vec<i64>>>,
        chosen: &mut Vec<&'a Vec<i64>>,
        results: &mut Vec<IntMat>,
        cap: usize,
        budget: &mut u64,
    ) {
        if results.len() >= cap || *budget == 0 {
            return;
        }
        if level == n {
            // Columns = images; the Gram match makes T automatically
            // unimodular because both forms are nondegenerate.
            let t = IntMat::from_fn(n, n, |i, j| BigInt::from(chosen[j][i]));
            results.push(t);
            return;
        }
        let bucket = &buckets[&g1[level][level]];
        'cands: for cand in bucket {
            if *budget == 0 {
                return;
            }
            *budget -= 1;
            for (prev, pv) in chosen.iter().enumerate() {
                if quad_form(g2, cand, pv) != g1[level][prev] {
                    continue 'cands;
                }
            }
            chosen.push(cand);
            backtrack(level + 1, n, g1, g2, buckets, chosen, results, cap, budget);
            chosen.pop();
            if results.len() >= cap {
                return;
            }
        }
    }

    backtrack(
        0,
        n,
        &g1,
        &g2,
        &buckets,
        &mut chosen,
        &mut results,
        cap,
        &mut budget,
    );
    for t in &results {
        debug_assert!(verify_map(l1, l2, t));
    }
    results
}

fn quad_form(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut acc: i128 = 0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        let mut row: i128 = 0;
        for (j, yj) in y.iter().enumerate() {
            row += (g[i][j] as i128) * (*yj as i128);
        }
        acc += (*xi as i128) * row;
    }
    i64::try_from(acc).expect("pairing fits in i64")
}

/// The full isometry group of a definite lattice of rank ≤ 8: images of
/// basis vectors are drawn from the exact short-vector lists of the right
/// norms, so the enumeration is complete. Returns all elements; the order is
/// the element count.
#[derive(Clone, Debug)]
pub struct DefiniteGroup {
    pub elements: Vec<IntMat>,
    pub order: usize,
}

impl DefiniteGroup {
    /// All elements double as a (redundant) generating set.
    pub fn generators(&self) -> &[IntMat] {
        &self.elements
    }
}

pub fn definite_isometry_group(l: &Lattice) -> Result<DefiniteGroup, LatticeError> {
    if !l.is_definite() {
        return Err(LatticeError::NotDefinite);
    }
    if l.rank() > 8 {
        return Err(LatticeError::SizeCap(format!(
            "definite_isometry_group caps rank at 8, got {}",
            l.rank()
        )));
    }
    let n = l.rank();
    // Candidate images for basis vector i: all vectors of its norm.
    let mut candidate_lists: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    for i in 0..n {
        let norm = l.gram()[(i, i)].clone();
        debug_assert!(!norm.is_zero());
        candidate_lists.push(short_vectors(l, &norm)?);
    }

    let mut elements = Vec::new();
    let mut chosen: Vec<&Vec<BigInt>> = Vec::with_capacity(n);

    fn backtrack<'a>(
        level: usize,
        n: usize,
        l: &Lattice,
        cands: &'a [Vec<Vec<BigInt>>],
        chosen: &mut Vec<&'a Vec<BigInt>>,
        elements: &mut Vec<IntMat>,
    ) {
        if level == n {
            let t = IntMat::from_fn(n, n, |i, j| chosen[j][i].clone());
            elements.push(t);
            return;
        }
        'cands: for cand in &cands[level] {
            for (prev, pv) in chosen.iter().enumerate() {
                if l.inner(cand, pv) != l.gram()[(level, prev)] {
                    continue 'cands;
                }
            }
            chosen.push(cand);
            backtrack(level + 1, n, l, cands, chosen, elements);
            chosen.pop();
        }
    }

    backtrack(0, n, l, &candidate_lists, &mut chosen, &mut elements);
    for t in &elements {
        debug_assert!(l.is_isometry(t));
    }
    let order = elements.len();
    Ok(DefiniteGroup { elements, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{fixed_sublattice, orthogonal_complement, GroupAction, Sublattice};

    #[test]
    fn identity_search_on_same_lattice() {
        let l = Lattice::from_rows(&[vec![-2, 1], vec![1, -2]]).unwrap();
        match isometry_search(&l, &l, 2) {
            IsometryOutcome::Found(t) => {
                assert!(verify_map(&l, &l, &t));
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn parity_precheck_separates_even_from_odd() {
        let u = Lattice::hyperbolic_plane();
        let odd = Lattice::diagonal(&[1, -1]).unwrap();
        // Same rank, same det (−1), same signature (1,1) — parity differs.
        match isometry_search(&u, &odd, 3) {
            IsometryOutcome::InvariantMismatch(r) => assert!(r.contains("parity"), "{r}"),
            other => panic!("expected InvariantMismatch, got {other:?}"),
        }
    }

    #[test]
    fn rescaled_lattice_is_refuted_by_determinant() {
        let a = Lattice::diagonal(&[2]).unwrap();
        let b = Lattice::diagonal(&[8]).unwrap();
        assert!(matches!(
            isometry_search(&a, &b, 5),
            IsometryOutcome::InvariantMismatch(_)
        ));
    }

    #[test]
    fn genuinely_isometric_pair_is_found_and_verified() {
        // Same lattice in a skewed basis: G' = SᵀGS for unimodular S.
        let g = Lattice::from_rows(&[vec![2, 1], vec![1, 4]]).unwrap();
        let s = IntMat::from_rows(&[vec![1, 3], vec![1, 4]]);
        let skewed_gram = s.transpose().mul_mat(g.gram()).mul_mat(&s);
        let skewed = Lattice::new(skewed_gram).unwrap();
        match isometry_search(&skewed, &g, 12) {
            IsometryOutcome::Found(t) => assert!(verify_map(&skewed, &g, &t)),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn inconclusive_when_box_too_small() {
        // Odd indefinite pair (no definite or even-split strategy applies),
        // and bound 0 only allows the zero vector: no certificate can be
        // found, and that is reported as Inconclusive.
        let l = Lattice::diagonal(&[1, -1]).unwrap();
        assert!(matches!(
            isometry_search(&l, &l, 0),
            IsometryOutcome::Inconclusive
        ));
    }

    #[test]
    fn skewed_rank_six_even_indefinite_pair_is_matched() {
        // U ⊕ ⟨−2⟩⁴ against a copy conjugated by a unimodular matrix with
        // entries far outside any feasible coefficient box: only the
        // hyperbolic-plane split can witness this one.
        let target = crate::groupcert::u_plus_four_a1();
        let s = IntMat::from_rows(&[
            vec![1, 2, 1, 0, 3, 1],
            vec![0, 1, 4, 1, 0, 2],
            vec![0, 0, 1, 3, 1, 0],
            vec![0, 0, 0, 1, 2, 5],
            vec![0, 0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 0, 1],
        ]);
        assert_eq!(s.det().abs(), BigInt::from(1));
        let skewed_gram = s.transpose().mul_mat(target.gram()).mul_mat(&s);
        let skewed = Lattice::new(skewed_gram).unwrap();
        match isometry_search(&skewed, &target, 5) {
            IsometryOutcome::Found(t) => assert!(verify_map(&skewed, &target, &t)),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn rescaled_hyperbolic_summand_falls_back_to_box_search() {
        // U(2) ⊕ ⟨−2⟩: every isotropic vector pairs into 2Z, so no
        // hyperbolic plane splits off; the box search still finds the
        // identity on the self-comparison.
        let l =
            Lattice::from_rows(&[vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -2]]).unwrap();
        match isometry_search(&l, &l, 2) {
            IsometryOutcome::Found(t) => assert!(verify_map(&l, &l, &t)),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn definite_pair_in_skewed_basis_is_matched_via_short_vectors() {
        // ⟨−2⟩⁴ in a basis whose coefficients exceed the box bound: the
        // short-vector strategy is complete regardless of the bound.
        let target = Lattice::diagonal(&[-2, -2, -2, -2]).unwrap();
        let s = IntMat::from_rows(&[
            vec![1, 7, 0, 2],
            vec![0, 1, 9, 0],
            vec![0, 0, 1, 8],
            vec![0, 0, 0, 1],
        ]);
        let skewed = Lattice::new(s.transpose().mul_mat(target.gram()).mul_mat(&s)).unwrap();
        match isometry_search(&skewed, &target, 1) {
            IsometryOutcome::Found(t) => assert!(verify_map(&skewed, &target, &t)),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn minus_2_group_is_plus_minus_1() {
        let l = Lattice::diagonal(&[-2]).unwrap();
        let g = definite_isometry_group(&l).unwrap();
        assert_eq!(g.order, 2);
    }

    #[test]
    fn four_a1_group_is_signed_permutations() {
        let l = Lattice::diagonal(&[-2, -2, -2, -2]).unwrap();
        let g = definite_isometry_group(&l).unwrap();
        assert_eq!(g.order, 384); // 2^4 · 4!
        for t in g.elements.iter().take(10) {
            assert!(l.is_isometry(t));
        }
    }

    #[test]
    fn a2_group_has_order_12() {
        let l = Lattice::from_rows(&[vec![-2, 1], vec![1, -2]]).unwrap();
        let g = definite_isometry_group(&l).unwrap();
        assert_eq!(g.order, 12);
    }

    #[test]
    fn indefinite_group_rejected() {
        assert!(definite_isometry_group(&Lattice::hyperbolic_plane()).is_err());
    }

    #[test]
    fn rank_cap_enforced() {
        let l = Lattice::diagonal(&[-2; 9]).unwrap();
        assert!(matches!(
            definite_isometry_group(&l),
            Err(LatticeError::SizeCap(_))
        ));
    }

    /// Restriction of an ambient isometry to a sublattice, in the
    /// sublattice's own basis; None if the sublattice is not preserved.
    fn restrict(g: &IntMat, sub: &Sublattice) -> Option<IntMat> {
        let k = sub.rank();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(k);
        for i in 0..k {
            let v: Vec<BigInt> = sub.basis.row(i).to_vec();
            let img = g.mul_vec(&v);
            cols.push(sub.coords_of(&img)?);
        }
        Some(IntMat::from_fn(k, k, |r, c| cols[c][r].clone()))
    }

    /// O(M) lifts to O(L, M) for L = U ⊕ ⟨−2⟩ and M the fixed part of the
    /// involution negating the last coordinate: every brute-forced isometry
    /// of M extends to L (here literally, with ±1 on the complement).
    #[test]
    fn o_m_lifts_to_o_l_for_u_plus_minus2() {
        let l = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]).unwrap();
        let inv = IntMat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]]);
        let action = GroupAction::new(&l, vec![inv]).unwrap();
        let m = fixed_sublattice(&l, &action);
        assert_eq!(m.rank(), 2);
        let m_lat = m.to_lattice().unwrap(); // U
        let o_m = all_isometries(&m_lat, &m_lat, 2, 1000);
        assert_eq!(o_m.len(), 4); // {±1} × {id, swap}

        for phi in &o_m {
            // Try the two candidate extensions φ ⊕ (±1).
            let mut lifted = false;
            for sign in [1i64, -1] {
                let mut ext = IntMat::zero(3, 3);
                for i in 0..2 {
                    for j in 0..2 {
                        ext[(i, j)] = phi[(i, j)].clone();
                    }
                }
                ext[(2, 2)] = BigInt::from(sign);
                if l.is_isometry(&ext) {
                    // The lift must restrict back to φ on M.
                    let r = restrict(&ext, &m).expect("M preserved");
                    if &r == phi {
                        lifted = true;
                    }
                }
            }
            assert!(lifted, "isometry of M failed to lift: {phi:?}");
        }
    }

    /// The restriction map O(L, M) → O(M) ⊕ O(M^⊥) is injective whenever
    /// M ⊕ M^⊥ has finite index in L: brute-forced sample check.
    #[test]
    fn restriction_map_is_injective_on_sample() {
        let l = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]).unwrap();
        let inv = IntMat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]]);
        let action = GroupAction::new(&l, vec![inv]).unwrap();
        let m = fixed_sublattice(&l, &action);
        let c = orthogonal_complement(&l, &m).unwrap();

        // M ⊕ M^⊥ has finite index: ranks add up to rank L.
        assert_eq!(m.rank() + c.rank(), l.rank());

        let sample = all_isometries(&l, &l, 2, 100_000);
        assert!(!sample.is_empty());
        let preserving: Vec<_> = sample
            .iter()
            .filter_map(|g| {
                let rm = restrict(g, &m)?;
                let rc = restrict(g, &c)?;
                Some((g.clone(), rm, rc))
            })
            .collect();
        assert!(!preserving.is_empty());
        for (i, (gi, rmi, rci)) in preserving.iter().enumerate() {
            for (gj, rmj, rcj) in preserving.iter().skip(i + 1) {
                if rmi == rmj && rci == rcj {
                    assert_eq!(gi, gj, "two distinct isometries share both restrictions");
                }
            }
        }
    }
}
