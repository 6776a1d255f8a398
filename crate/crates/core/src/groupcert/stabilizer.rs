//! Stabilizers of finite-index sublattices with 2-elementary quotient, via
//! the orbit–stabilizer algorithm on subspaces of L/2L.

use super::{GenSet, GroupCertError};
use crate::exact::{hermite_normal_form, smith_normal_form, IntMat};
use crate::lattice::Sublattice;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::collections::{BTreeMap, HashSet, VecDeque};

/// A subspace of F₂ⁿ in canonical form: reduced-row-echelon rows as
/// bitmasks (bit `j` = coordinate `j`), sorted by pivot position.
pub type Subspace = Vec<u64>;

/// Reduced row echelon form over F₂ with bitmask rows; fully reduced, rows
/// ordered by pivot, zero rows dropped. Canonical per subspace.
fn rref_bits(rows: impl IntoIterator<Item = u64>) -> Subspace {
    // (pivot position, row) pairs kept mutually reduced.
    let mut pivots: Vec<(u32, u64)> = Vec::new();
    for mut v in rows {
        for &(p, r) in &pivots {
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros();
        for (_, r) in pivots.iter_mut() {
            if *r >> p & 1 == 1 {
                *r ^= v;
            }
        }
        pivots.push((p, v));
    }
    pivots.sort_unstable();
    pivots.into_iter().map(|(_, r)| r).collect()
}

/// All dimension-`rank − quotient_dim` subspaces of F₂^rank, i.e. the
/// canonical encodings of the sublattices `2L ⊆ T ⊆ L` with
/// `L/T ≅ (Z/2)^quotient_dim`. Enumerated directly as RREF matrices.
pub fn two_elementary_sublattices(rank: usize, quotient_dim: usize) -> Vec<Subspace> {
    assert!(rank <= 64, "bitmask encoding supports rank <= 64");
    assert!(quotient_dim <= rank);
    let dim = rank - quotient_dim;
    let mut out = Vec::new();
    // Choose pivot columns as a bitmask with `dim` bits set, then fill every
    // admissible free entry (non-pivot columns above each pivot) with 0/1.
    let mut pivot_sets: Vec<u64> = (0u64..1 << rank)
        .filter(|m| m.count_ones() as usize == dim)
        .collect();
    pivot_sets.sort_unstable();
    for pivots in pivot_sets {
        let pivot_cols: Vec<u32> = (0..rank as u32).filter(|&c| pivots >> c & 1 == 1).collect();
        // Free positions for row i: non-pivot columns beyond its pivot.
        let free: Vec<Vec<u32>> = pivot_cols
            .iter()
            .map(|&p| {
                (p + 1..rank as u32)
                    .filter(|&c| pivots >> c & 1 == 0)
                    .collect()
            })
            .collect();
        let total_free: usize = free.iter().map(|f| f.len()).sum();
        for assignment in 0u64..1 << total_free {
            let mut rows = Vec::with_capacity(dim);
            let mut bit = 0;
            for (i, &p) in pivot_cols.iter().enumerate() {
                let mut row = 1u64 << p;
                for &c in &free[i] {
                    if assignment >> bit & 1 == 1 {
                        row |= 1 << c;
                    }
                    bit += 1;
                }
                rows.push(row);
            }
            out.push(rows);
        }
    }
    out.sort();
    out
}

/// The mod-2 column masks of an integer matrix: entry `j` has bit `i` set
/// iff `m[(i,j)]` is odd.
fn columns_mod2(m: &IntMat) -> Vec<u64> {
    let (r, c) = (m.rows(), m.cols());
    (0..c)
        .map(|j| {
            let mut mask = 0u64;
            for i in 0..r {
                if m[(i, j)].is_odd() {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect()
}

/// Image of a subspace under a matrix given by its mod-2 column masks.
fn act_on_subspace(cols: &[u64], space: &Subspace) -> Subspace {
    let images = space.iter().map(|&row| {
        let mut img = 0u64;
        for (j, &col) in cols.iter().enumerate() {
            if row >> j & 1 == 1 {
                img ^= col;
            }
        }
        img
    });
    rref_bits(images)
}

/// Canonical encoding of a full-rank sublattice with 2-elementary quotient;
/// rejects other quotient types.
fn encode_target(ambient_rank: usize, target: &Sublattice) -> Result<Subspace, GroupCertError> {
    if target.basis.cols() != ambient_rank || target.rank() != ambient_rank {
        return Err(GroupCertError::Invalid(
            "target must be a full-rank sublattice of the generator lattice".into(),
        ));
    }
    let snf = smith_normal_form(&target.basis);
    for d in snf.diagonal() {
        if !d.is_one() && d != BigInt::from(2) {
            return Err(GroupCertError::BadQuotientType);
        }
    }
    let rows = (0..target.basis.rows()).map(|i| {
        let mut mask = 0u64;
        for (j, v) in target.basis.row(i).iter().enumerate() {
            if v.is_odd() {
                mask |= 1 << j;
            }
        }
        mask
    });
    Ok(rref_bits(rows))
}

/// The result of an orbit–stabilizer run: Schreier generators of the
/// stabilizer (deduplicated, identity dropped, discovery order) and the
/// orbit size of the target under the supplied group.
#[derive(Clone, Debug)]
pub struct StabilizerResult {
    pub stabilizer: GenSet,
    pub orbit_size: usize,
}

/// Computes the set-wise stabilizer of `target` in the group generated by
/// `g`, by BFS over the orbit of the target's image in L/2L (sound because
/// every isometry fixes 2L, so the action descends to the quotient and a
/// sublattice containing 2L is determined by that image). Schreier
/// generators are re-checked to stabilize the target by Hermite-form
/// comparison. Deterministic: FIFO orbit order, generators applied in index
/// order.
pub fn sublattice_stabilizer(
    g: &GenSet,
    target: &Sublattice,
    orbit_cap: usize,
) -> Result<StabilizerResult, GroupCertError> {
    let n = g.lattice.rank();
    let start = encode_target(n, target)?;
    let gen_cols: Vec<Vec<u64>> = g.matrices().map(columns_mod2).collect();

    let mut ids: BTreeMap<Subspace, usize> = BTreeMap::new();
    ids.insert(start.clone(), 0);
    // reps[u] maps the start node to node u.
    let mut reps: Vec<IntMat> = vec![IntMat::identity(n)];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut nodes: Vec<Subspace> = vec![start];

    let mut schreier: Vec<IntMat> = Vec::new();
    let mut seen: HashSet<IntMat> = HashSet::new();

    while let Some(u) = queue.pop_front() {
        for (gi, gmat) in g.matrices().enumerate() {
            let image = act_on_subspace(&gen_cols[gi], &nodes[u]);
            match ids.get(&image) {
                None => {
                    let v = ids.len();
                    if v >= orbit_cap {
                        return Err(GroupCertError::OrbitCap(orbit_cap));
                    }
                    ids.insert(image.clone(), v);
                    nodes.push(image);
                    reps.push(gmat.mul_mat(&reps[u]));
                    queue.push_back(v);
                }
                Some(&v) => {
                    // Schreier generator: back to the start through the tree.
                    let s = reps[v]
                        .inverse_unimodular()
                        .mul_mat(gmat)
                        .mul_mat(&reps[u]);
                    if !s.is_identity() && seen.insert(s.clone()) {
                        schreier.push(s);
                    }
                }
            }
        }
    }

    // Every Schreier generator must stabilize the target set-wise.
    let target_hnf = hermite_normal_form(&target.basis).0;
    for s in &schreier {
        let image = target.basis.mul_mat(&s.transpose());
        if hermite_normal_form(&image).0 != target_hnf {
            return Err(GroupCertError::Invalid(
                "internal error: Schreier generator does not stabilize the target".into(),
            ));
        }
    }

    let labels = (0..schreier.len()).map(|i| format!("s{i}")).collect();
    let stabilizer = GenSet::new(g.lattice.clone(), schreier, labels)?;
    Ok(StabilizerResult {
        stabilizer,
        orbit_size: ids.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcert::genset::{u_plus_four_a1, u_plus_four_a1_orthogonal_generators};
    use crate::lattice::Lattice;

    #[test]
    fn rref_is_canonical() {
        // Same subspace from different generating sets.
        let a = rref_bits([0b011, 0b110]);
        let b = rref_bits([0b101, 0b011, 0b110]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn codimension_two_count_in_rank_six_is_651() {
        // Gaussian binomial (2⁶−1)(2⁵−1)/((2²−1)(2−1)) = 651.
        assert_eq!(two_elementary_sublattices(6, 2).len(), 651);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        assert_eq!(two_elementary_sublattices(4, 1).len(), 15);
        assert_eq!(two_elementary_sublattices(4, 2).len(), 35);
        assert_eq!(two_elementary_sublattices(5, 2).len(), 155);
        assert_eq!(two_elementary_sublattices(3, 0).len(), 1);
        assert_eq!(two_elementary_sublattices(3, 3).len(), 1);
    }

    #[test]
    fn enumerated_subspaces_are_distinct_and_canonical() {
        let all = two_elementary_sublattices(5, 2);
        for s in &all {
            assert_eq!(&rref_bits(s.iter().copied()), s);
        }
        let dedup: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn whole_lattice_stabilizer_is_the_group_itself() {
        let gs = u_plus_four_a1_orthogonal_generators();
        let l = u_plus_four_a1();
        let target = Sublattice::new(&l, IntMat::identity(6)).unwrap();
        let res = sublattice_stabilizer(&gs, &target, 100).unwrap();
        assert_eq!(res.orbit_size, 1);
        let got: Vec<&IntMat> = res.stabilizer.matrices().collect();
        let want: Vec<&IntMat> = gs.matrices().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn permutation_action_orbit_and_stabilizer() {
        // 4A₁ with the S₄ of coordinate permutations; target halves e₁ only:
        // T = ⟨2e₁, e₂, e₃, e₄⟩, quotient Z/2. The orbit is the four
        // coordinate hyperplanes mod 2; the stabilizer is the S₃ on the
        // last three coordinates.
        let l = Lattice::diagonal(&[-2, -2, -2, -2]).unwrap();
        let perm = |images: &[usize]| {
            IntMat::from_fn(4, 4, |r, c| {
                if r == images[c] {
                    BigInt::from(1)
                } else {
                    BigInt::ZERO
                }
            })
        };
        let gs = GenSet::new(
            l.clone(),
            vec![perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0])],
            vec!["swap".into(), "cycle".into()],
        )
        .unwrap();
        let target = Sublattice::new(
            &l,
            IntMat::from_rows(&[
                vec![2, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ]),
        )
        .unwrap();
        let res = sublattice_stabilizer(&gs, &target, 100).unwrap();
        assert_eq!(res.orbit_size, 4);
        // The Schreier generators generate the full stabilizer: close them
        // up and check the order is |S₃| = 6.
        let mut seen: HashSet<IntMat> = HashSet::new();
        let mut frontier = vec![IntMat::identity(4)];
        seen.insert(IntMat::identity(4));
        while let Some(m) = frontier.pop() {
            for s in res.stabilizer.matrices() {
                let next = m.mul_mat(s);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn orbit_cap_is_enforced() {
        let l = Lattice::diagonal(&[-2, -2, -2, -2]).unwrap();
        let perm = IntMat::from_fn(4, 4, |r, c| {
            if r == (c + 1) % 4 {
                BigInt::from(1)
            } else {
                BigInt::ZERO
            }
        });
        let gs = GenSet::new(l.clone(), vec![perm], vec!["cycle".into()]).unwrap();
        let target = Sublattice::new(
            &l,
            IntMat::from_rows(&[
                vec![2, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ]),
        )
        .unwrap();
        let r = sublattice_stabilizer(&gs, &target, 2);
        assert!(matches!(r, Err(GroupCertError::OrbitCap(2))));
    }

    #[test]
    fn non_two_elementary_targets_are_rejected() {
        let l = Lattice::diagonal(&[-2, -2, -2, -2]).unwrap();
        let gs = GenSet::new(l.clone(), vec![IntMat::identity(4)], vec!["id".into()]).unwrap();
        let target = Sublattice::new(
            &l,
            IntMat::from_rows(&[
                vec![3, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ]),
        )
        .unwrap();
        let r = sublattice_stabilizer(&gs, &target, 100);
        assert!(matches!(r, Err(GroupCertError::BadQuotientType)));
    }

    #[test]
    fn index_four_target_in_rank_six_has_orbit_within_651() {
        // Halve two of the four ⟨−2⟩ vectors: quotient (Z/2)².
        let gs = u_plus_four_a1_orthogonal_generators();
        let l = u_plus_four_a1();
        let mut basis = IntMat::identity(6);
        basis[(2, 2)] = BigInt::from(2);
        basis[(3, 3)] = BigInt::from(2);
        let target = Sublattice::new(&l, basis).unwrap();
        let res = sublattice_stabilizer(&gs, &target, 100_000).unwrap();
        assert!(res.orbit_size <= 651);
        assert!(res.orbit_size > 1);
        // All Schreier generators stabilize (internally re-checked); make
        // sure there is at least one nontrivial generator and none is the
        // identity.
        assert!(!res.stabilizer.is_empty());
        for s in res.stabilizer.matrices() {
            assert!(!s.is_identity());
        }
    }
}
