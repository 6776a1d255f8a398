//! Greedy redundancy elimination for generating sets, and bounded discovery
//! of short relations among generators.

use super::{GenSet, GroupCertError};
use crate::exact::IntMat;
use std::collections::{BTreeSet, HashMap};

/// A generator dropped during reduction, with a verified witness word.
///
/// Witness letters index the ORIGINAL generating set: `+(j+1)` means
/// generator `j`, `-(j+1)` its inverse. A witness may mention generators
/// that were themselves dropped later; substituting their witnesses
/// recursively (strictly later drops only) rewrites it over the kept set,
/// so the kept set still generates the same group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DroppedGenerator {
    pub label: String,
    pub witness: Vec<i64>,
}

/// Outcome of [`reduce_generators`]: the surviving subset (original order
/// and labels) and the dropped generators with witnesses.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub kept: GenSet,
    pub dropped: Vec<DroppedGenerator>,
}

/// Letters of the search alphabet: generator matrices paired with inverses,
/// plus the signed letter code referring to the original index. Involutions
/// contribute a single letter.
struct Alphabet {
    mats: Vec<IntMat>,
    codes: Vec<i64>,
}

impl Alphabet {
    fn over(gens: &[(usize, IntMat)]) -> Self {
        let mut mats = Vec::new();
        let mut codes = Vec::new();
        for (orig, m) in gens {
            let inv = m.inverse_unimodular();
            let code = (orig + 1) as i64;
            mats.push(m.clone());
            codes.push(code);
            if inv != *m {
                mats.push(inv);
                codes.push(-code);
            }
        }
        Alphabet { mats, codes }
    }
}

/// Breadth-first table of all products of at most `depth` letters, keeping
/// the first (shortest, then lexicographically least) word per matrix.
/// `None` if the table would exceed `node_cap` entries.
fn product_table(
    alpha: &Alphabet,
    depth: usize,
    node_cap: usize,
) -> Option<HashMap<IntMat, Vec<i64>>> {
    let n = alpha.mats.first().map_or(0, IntMat::rows);
    let mut table: HashMap<IntMat, Vec<i64>> = HashMap::new();
    let mut level: Vec<(IntMat, Vec<i64>)> = vec![(IntMat::identity(n), Vec::new())];
    table.insert(IntMat::identity(n), Vec::new());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (m, w) in &level {
            for (l, lm) in alpha.mats.iter().enumerate() {
                let prod = m.mul_mat(lm);
                if !table.contains_key(&prod) {
                    if table.len() >= node_cap {
                        return None;
                    }
                    let mut word = w.clone();
                    word.push(alpha.codes[l]);
                    table.insert(prod.clone(), word.clone());
                    next.push((prod, word));
                }
            }
        }
        level = next;
    }
    Some(table)
}

/// Searches for a word of length ≤ `cap` over `alpha` whose product is
/// `target`, by meeting in the middle. Returns the shortest witness found
/// (ties broken lexicographically by letter codes). Exceeding `node_cap`
/// abandons the search, which is treated as "not found".
fn find_word(target: &IntMat, alpha: &Alphabet, cap: usize, node_cap: usize) -> Option<Vec<i64>> {
    if alpha.mats.is_empty() {
        return target.is_identity().then(Vec::new);
    }
    let left_depth = cap.div_ceil(2);
    let right_depth = cap / 2;
    let left = product_table(alpha, left_depth, node_cap)?;

    let mut best: Option<Vec<i64>> = None;
    let mut consider = |word: Vec<i64>| {
        let better = match &best {
            None => true,
            Some(b) => (word.len(), &word) < (b.len(), b),
        };
        if better {
            best = Some(word);
        }
    };

    if let Some(lw) = left.get(target) {
        consider(lw.clone());
    }
    // Right factors of length 1..=right_depth, tracked by their inverses so
    // the matching left factor is a single table lookup.
    let n = target.rows();
    let mut level: Vec<(IntMat, Vec<i64>)> = vec![(IntMat::identity(n), Vec::new())];
    for _ in 0..right_depth {
        let mut next = Vec::new();
        for (inv, w) in &level {
            for (l, lm) in alpha.mats.iter().enumerate() {
                // Appending letter l to the right word multiplies its
                // inverse by l⁻¹ on the left.
                let linv_code = -alpha.codes[l];
                let linv = match alpha.codes.iter().position(|&c| c == linv_code) {
                    Some(k) => &alpha.mats[k],
                    None => lm, // involution letter
                };
                let inv_next = linv.mul_mat(inv);
                let mut word = vec![alpha.codes[l]];
                word.extend_from_slice(w);
                if let Some(lw) = left.get(&target.mul_mat(&inv_next)) {
                    let mut full = lw.clone();
                    full.extend_from_slice(&word);
                    consider(full);
                }
                next.push((inv_next, word));
            }
        }
        level = next;
    }
    best
}

/// Greedily removes redundant generators: a generator is dropped when it
/// equals a product of at most `word_cap` of the remaining generators or
/// their inverses. The search depth escalates (1, 2, …, `word_cap`) so
/// cheap drops are found before expensive tables are built; within a pass,
/// later generators are tried first, keeping the earliest spanning subset.
/// Every witness is re-verified by multiplication. Deterministic.
pub fn reduce_generators(g: &GenSet, word_cap: usize) -> Result<Reduction, GroupCertError> {
    // (original index, matrix) of the survivors so far.
    let mut kept: Vec<(usize, IntMat)> = g.matrices().cloned().enumerate().collect();
    let mut dropped: Vec<DroppedGenerator> = Vec::new();
    const NODE_CAP: usize = 2_000_000;

    for cap in 1..=word_cap.max(1) {
        loop {
            let mut removed = false;
            let mut i = kept.len();
            while i > 0 {
                i -= 1;
                let (orig, target) = kept[i].clone();
                if target.is_identity() {
                    dropped.push(DroppedGenerator {
                        label: g.labels[orig].clone(),
                        witness: Vec::new(),
                    });
                    kept.remove(i);
                    removed = true;
                    continue;
                }
                let rest: Vec<(usize, IntMat)> = kept
                    .iter()
                    .filter(|(o, _)| *o != orig)
                    .cloned()
                    .collect();
                let alpha = Alphabet::over(&rest);
                if let Some(witness) = find_word(&target, &alpha, cap, NODE_CAP) {
                    verify_witness(&target, &witness, g)?;
                    dropped.push(DroppedGenerator {
                        label: g.labels[orig].clone(),
                        witness,
                    });
                    kept.remove(i);
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
    }

    let mats: Vec<IntMat> = kept.iter().map(|(_, m)| m.clone()).collect();
    let labels: Vec<String> = kept.iter().map(|(o, _)| g.labels[*o].clone()).collect();
    let kept = GenSet::new(g.lattice.clone(), mats, labels)?;
    Ok(Reduction { kept, dropped })
}

/// Multiplies out a witness word over the original generators and checks it
/// reproduces the target matrix.
fn verify_witness(target: &IntMat, witness: &[i64], g: &GenSet) -> Result<(), GroupCertError> {
    let originals: Vec<&IntMat> = g.matrices().collect();
    let n = target.rows();
    let mut prod = IntMat::identity(n);
    for &letter in witness {
        let idx = (letter.unsigned_abs() as usize)
            .checked_sub(1)
            .ok_or_else(|| GroupCertError::Invalid("witness letter 0".into()))?;
        let m = originals
            .get(idx)
            .ok_or_else(|| GroupCertError::Invalid("witness letter out of range".into()))?;
        let factor = if letter > 0 {
            (*m).clone()
        } else {
            m.inverse_unimodular()
        };
        prod = prod.mul_mat(&factor);
    }
    if &prod != target {
        return Err(GroupCertError::Invalid(
            "internal error: reduction witness does not reproduce the generator".into(),
        ));
    }
    Ok(())
}

/// Bounds for [`discover_relations`].
#[derive(Clone, Debug)]
pub struct RelationConfig {
    /// Maximum length of identity words over the base generators alone.
    pub maxlen: usize,
    /// Maximum length of identity words mixing base and extra letters
    /// (such words must contain at least one extra letter).
    pub mixed_len: usize,
    /// Budget on matrix products computed during the word scan.
    pub node_cap: usize,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig {
            maxlen: 5,
            mixed_len: 4,
            node_cap: 5_000_000,
        }
    }
}

/// Finds all primitive identity words over the generators (letters
/// `0..g.len()`) and the extra matrices (letters `g.len()..`). Pure words
/// are bounded by `maxlen`, words with at least one extra letter by
/// `mixed_len`. A relation is reported through its lexicographically least
/// cyclic rotation, and only if it is primitive: no proper nonempty
/// contiguous cyclic subword multiplies to the identity (composite
/// relations are implied by their parts, which are reported separately).
/// Exceeding `node_cap` is an error.
pub fn discover_relations(
    g: &GenSet,
    extra: &[IntMat],
    cfg: &RelationConfig,
) -> Result<Vec<Vec<usize>>, GroupCertError> {
    for m in extra {
        g.lattice
            .isometry(m.clone())
            .map_err(GroupCertError::Lattice)?;
    }
    let mats: Vec<&IntMat> = g.matrices().chain(extra.iter()).collect();
    let base = g.len();
    let n = g.lattice.rank();
    let maxdepth = cfg.maxlen.max(cfg.mixed_len);

    let mut budget = cfg.node_cap;
    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut word: Vec<usize> = Vec::new();
    let mut prefixes: Vec<IntMat> = vec![IntMat::identity(n)];
    dfs_words(
        &mut word,
        &mut prefixes,
        &mats,
        base,
        maxdepth,
        cfg,
        &mut budget,
        &mut candidates,
    )?;

    Ok(candidates
        .into_iter()
        .filter(|w| is_primitive(w, &mats))
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn dfs_words(
    word: &mut Vec<usize>,
    prefixes: &mut Vec<IntMat>,
    mats: &[&IntMat],
    base: usize,
    maxdepth: usize,
    cfg: &RelationConfig,
    budget: &mut usize,
    found: &mut BTreeSet<Vec<usize>>,
) -> Result<(), GroupCertError> {
    for letter in 0..mats.len() {
        if *budget == 0 {
            return Err(GroupCertError::SearchCap(
                "relation search exceeded its node budget".into(),
            ));
        }
        *budget -= 1;
        let prod = prefixes.last().unwrap().mul_mat(mats[letter]);
        word.push(letter);
        let mixed = word.iter().any(|&l| l >= base);
        let limit = if mixed { cfg.mixed_len } else { cfg.maxlen };
        if word.len() <= limit && prod.is_identity() {
            found.insert(min_rotation(word));
        }
        if word.len() < maxdepth {
            prefixes.push(prod);
            dfs_words(word, prefixes, mats, base, maxdepth, cfg, budget, found)?;
            prefixes.pop();
        }
        word.pop();
    }
    Ok(())
}

/// Lexicographically least cyclic rotation of a word.
fn min_rotation(word: &[usize]) -> Vec<usize> {
    (0..word.len())
        .map(|r| {
            let mut rot = word[r..].to_vec();
            rot.extend_from_slice(&word[..r]);
            rot
        })
        .min()
        .unwrap()
}

/// True when no proper nonempty contiguous cyclic subword multiplies to the
/// identity.
fn is_primitive(word: &[usize], mats: &[&IntMat]) -> bool {
    let n = mats[word[0]].rows();
    let len = word.len();
    for start in 0..len {
        let mut prod = IntMat::identity(n);
        for k in 0..len - 1 {
            prod = prod.mul_mat(mats[word[(start + k) % len]]);
            if k + 1 < len && prod.is_identity() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn pell_lattice() -> Lattice {
        Lattice::diagonal(&[10, -4]).unwrap()
    }

    fn a1() -> IntMat {
        IntMat::from_rows(&[vec![1, 0], vec![0, -1]])
    }

    fn a2() -> IntMat {
        IntMat::from_rows(&[vec![721, 456], vec![-1140, -721]])
    }

    fn pell() -> IntMat {
        IntMat::from_rows(&[vec![19, 12], vec![30, 19]])
    }

    #[test]
    fn duplicate_generators_are_dropped_with_unit_witness() {
        let l = pell_lattice();
        let g = GenSet::new(l, vec![a1(), a1()], vec!["r".into(), "r-again".into()]).unwrap();
        let red = reduce_generators(&g, 3).unwrap();
        assert_eq!(red.kept.len(), 1);
        assert_eq!(red.kept.labels, vec!["r".to_string()]);
        assert_eq!(red.dropped.len(), 1);
        assert_eq!(red.dropped[0].label, "r-again");
        assert_eq!(red.dropped[0].witness, vec![1]);
    }

    #[test]
    fn identity_generators_are_dropped_with_empty_witness() {
        let l = pell_lattice();
        let g = GenSet::new(
            l,
            vec![IntMat::identity(2), a1()],
            vec!["one".into(), "r".into()],
        )
        .unwrap();
        let red = reduce_generators(&g, 2).unwrap();
        assert_eq!(red.kept.len(), 1);
        assert_eq!(red.dropped.len(), 1);
        assert_eq!(red.dropped[0].label, "one");
        assert!(red.dropped[0].witness.is_empty());
    }

    #[test]
    fn power_of_a_generator_is_expressed_as_a_word() {
        let l = pell_lattice();
        let p2 = pell().mul_mat(&pell());
        let g = GenSet::new(l, vec![pell(), p2], vec!["p".into(), "p2".into()]).unwrap();
        let red = reduce_generators(&g, 3).unwrap();
        assert_eq!(red.kept.len(), 1);
        assert_eq!(red.kept.labels, vec!["p".to_string()]);
        assert_eq!(red.dropped[0].witness, vec![1, 1]);
    }

    #[test]
    fn inverse_witnesses_use_negative_letters() {
        let l = pell_lattice();
        let pinv = pell().inverse_unimodular();
        let g = GenSet::new(l, vec![pell(), pinv], vec!["p".into(), "q".into()]).unwrap();
        let red = reduce_generators(&g, 3).unwrap();
        assert_eq!(red.kept.len(), 1);
        assert_eq!(red.kept.labels, vec!["p".to_string()]);
        assert_eq!(red.dropped[0].label, "q");
        assert_eq!(red.dropped[0].witness, vec![-1]);
    }

    #[test]
    fn independent_involutions_are_both_kept() {
        let l = pell_lattice();
        let g = GenSet::new(l, vec![a1(), a2()], vec!["w0".into(), "w1".into()]).unwrap();
        let red = reduce_generators(&g, 5).unwrap();
        assert_eq!(red.kept.len(), 2);
        assert!(red.dropped.is_empty());
    }

    #[test]
    fn word_cap_limits_how_much_is_dropped() {
        let l = pell_lattice();
        let p5 = pell()
            .mul_mat(&pell())
            .mul_mat(&pell())
            .mul_mat(&pell())
            .mul_mat(&pell());
        let g = GenSet::new(l, vec![pell(), p5], vec!["p".into(), "p5".into()]).unwrap();
        let short = reduce_generators(&g, 3).unwrap();
        assert_eq!(short.kept.len(), 2);
        let long = reduce_generators(&g, 5).unwrap();
        assert_eq!(long.kept.len(), 1);
        assert_eq!(long.dropped[0].witness, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn involution_relations_are_discovered() {
        let l = pell_lattice();
        let g = GenSet::new(l, vec![a1(), a2()], vec!["w0".into(), "w1".into()]).unwrap();
        let rels = discover_relations(&g, &[], &RelationConfig::default()).unwrap();
        // The product w0·w1 has infinite order, so only the two involution
        // relations exist at these lengths; composites like w0w0w1w1 are
        // filtered as non-primitive.
        assert_eq!(rels, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn mixed_relations_require_an_extra_letter_and_are_found() {
        let l = pell_lattice();
        let g = GenSet::new(l.clone(), vec![a1()], vec!["w0".into()]).unwrap();
        let rels = discover_relations(&g, &[a2()], &RelationConfig::default()).unwrap();
        assert!(rels.contains(&vec![0, 0]));
        assert!(rels.contains(&vec![1, 1]));
        assert_eq!(rels.len(), 2);
    }

    #[test]
    fn rotated_duplicates_are_canonicalized_away() {
        // Order-4 rotation: r⁴ = 1 should appear exactly once, not in four
        // rotated copies, and r⁸ is out of range anyway.
        let l = Lattice::diagonal(&[1, 1]).unwrap();
        let rot = IntMat::from_rows(&[vec![0, -1], vec![1, 0]]);
        let g = GenSet::new(l, vec![rot], vec!["r".into()]).unwrap();
        let cfg = RelationConfig {
            maxlen: 4,
            mixed_len: 0,
            node_cap: 10_000,
        };
        let rels = discover_relations(&g, &[], &cfg).unwrap();
        assert_eq!(rels, vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn relation_search_budget_is_enforced() {
        let l = pell_lattice();
        let g = GenSet::new(l, vec![a1(), a2()], vec!["w0".into(), "w1".into()]).unwrap();
        let cfg = RelationConfig {
            maxlen: 6,
            mixed_len: 0,
            node_cap: 3,
        };
        let r = discover_relations(&g, &[], &cfg);
        assert!(matches!(r, Err(GroupCertError::SearchCap(_))));
    }

    #[test]
    fn relations_evaluate_to_the_identity() {
        let l = pell_lattice();
        let g = GenSet::new(l, vec![a1(), a2()], vec!["w0".into(), "w1".into()]).unwrap();
        let rels = discover_relations(&g, &[pell()], &RelationConfig::default()).unwrap();
        assert!(!rels.is_empty());
        let mats: Vec<IntMat> = g.matrices().cloned().chain([pell()]).collect();
        for rel in &rels {
            let mut prod = IntMat::identity(2);
            for &letter in rel {
                prod = prod.mul_mat(&mats[letter]);
            }
            assert!(prod.is_identity(), "relation {rel:?} fails");
        }
    }
}
