//! Fixed sublattices, orthogonal complements, divisibility, and even
//! overlattices obtained by halving.

use super::{GroupAction, Lattice, LatticeError, Sublattice};
use crate::exact::{hermite_normal_form, integer_kernel, solve_integer, IntMat, QMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Basis of the subgroup fixed by every generator, as the exact integer
/// kernel of the stacked `(g − 1)` matrices, in Hermite-reduced form. The
/// restricted form may be degenerate; that is a legal, flagged output
/// (`Sublattice::is_degenerate`), not an error. A trivial action fixes all
/// of `L`. An action with no nonzero fixed vectors yields rank 0.
pub fn fixed_sublattice(lattice: &Lattice, action: &GroupAction) -> Sublattice {
    let n = lattice.rank();
    let id = IntMat::identity(n);
    let mut stacked: Option<IntMat> = None;
    for g in &action.generators {
        let gm1 = g - &id;
        stacked = Some(match stacked {
            None => gm1,
            Some(s) => s.vstack(&gm1),
        });
    }
    let basis = match stacked {
        None => id,
        Some(s) => integer_kernel(&s),
    };
    let gram = basis.mul_mat(lattice.gram()).mul_mat(&basis.transpose());
    Sublattice { basis, gram }
}

/// `{x ∈ L : x·m = 0 for all m ∈ M}` with its restricted form. The input
/// sublattice must be nondegenerate; the complement is automatically
/// saturated (it is an integer kernel).
pub fn orthogonal_complement(
    lattice: &Lattice,
    m: &Sublattice,
) -> Result<Sublattice, LatticeError> {
    if m.is_degenerate() {
        return Err(LatticeError::Degenerate);
    }
    // x ⊥ every row b of M.basis ⟺ (B·G)·x = 0.
    let bg = m.basis.mul_mat(lattice.gram());
    let basis = integer_kernel(&bg);
    let gram = basis.mul_mat(lattice.gram()).mul_mat(&basis.transpose());
    Ok(Sublattice { basis, gram })
}

/// `true` iff `v = k·x` for some `x ∈ L` (coordinates of `v` in the basis of
/// `L`). Solved through the Smith-form integer solver. `k = 0` is rejected.
pub fn is_divisible(lattice: &Lattice, v: &[BigInt], k: &BigInt) -> Result<bool, LatticeError> {
    if k.is_zero() {
        return Err(LatticeError::Invalid("divisor k must be nonzero".into()));
    }
    if v.len() != lattice.rank() {
        return Err(LatticeError::Invalid(
            "vector length must equal the rank".into(),
        ));
    }
    let n = lattice.rank();
    let k_id = IntMat::from_fn(n, n, |i, j| if i == j { k.clone() } else { BigInt::ZERO });
    Ok(solve_integer(&k_id, v).is_some())
}

/// Result of [`saturate_by_halving`]: the overlattice, the total index, and
/// the basis of the overlattice written in the original basis coordinates
/// (rows; rational entries with denominators dividing the index).
#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub lattice: Lattice,
    pub index: BigInt,
    pub basis_in_original: QMat,
}

/// Kernel of the symmetric matrix mod 2, as 0/1 integer row vectors.
fn mod2_kernel(gram: &IntMat) -> Vec<Vec<BigInt>> {
    let n = gram.rows();
    // Row-reduce a copy of (gram mod 2) over F₂.
    let mut a: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if gram[(i, j)].is_even() { 0 } else { 1 })
                .collect()
        })
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        if let Some(pr) = (r..n).find(|&i| a[i][c] == 1) {
            a.swap(r, pr);
            for i in 0..n {
                if i != r && a[i][c] == 1 {
                    for j in 0..n {
                        a[i][j] ^= a[r][j];
                    }
                }
            }
            pivot_col_of_row.push(c);
            r += 1;
        }
    }
    let pivot_cols: std::collections::HashSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![BigInt::ZERO; n];
        v[free] = BigInt::one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            if a[row][free] == 1 {
                v[pc] = BigInt::one();
            }
        }
        kernel.push(v);
    }
    kernel
}

/// Adjoins `v/2` for every vector `v` of the input lattice with all
/// pairings even (`2 | (v,w)` for every `w`) and `8 | (v,v)`, in a single
/// pass. Returns the resulting integral overlattice and the index.
///
/// Both conditions only depend on the class of `v` in `S/2L` when `L` is
/// even (`(v+2w)² = v² + 4v·w + 4w² ≡ v² mod 8`), so scanning one
/// representative per class is a complete search there; for odd lattices the
/// scan is still sound but may miss qualifying vectors.
///
/// The pass is deliberately not iterated: the construction is the specific
/// overlattice generated by the input's own qualifying half-vectors. The
/// result can admit further halving of its own (it is not in general a
/// maximal even overlattice), and iterating would change which lattice is
/// produced.
pub fn saturate_by_halving(lattice: &Lattice) -> SaturationResult {
    let n = lattice.rank();
    let gram = lattice.gram();
    let eight = BigInt::from(8);

    let kernel = mod2_kernel(gram);
    let dim = kernel.len();
    assert!(dim < 63, "mod-2 kernel too large to scan");
    let mut qualifying: Vec<Vec<BigInt>> = Vec::new();
    for mask in 1u64..(1u64 << dim) {
        let mut v = vec![BigInt::ZERO; n];
        for (b, kv) in kernel.iter().enumerate() {
            if mask & (1 << b) != 0 {
                for (vi, ki) in v.iter_mut().zip(kv.iter()) {
                    *vi += ki;
                }
            }
        }
        let gv = gram.mul_vec(&v);
        let norm: BigInt = v.iter().zip(gv.iter()).map(|(a, b)| a * b).sum();
        if norm.is_multiple_of(&eight) {
            qualifying.push(v);
        }
    }

    if qualifying.is_empty() {
        return SaturationResult {
            lattice: lattice.clone(),
            index: BigInt::one(),
            basis_in_original: QMat::identity(n),
        };
    }

    // New lattice = L + Σ Z·(v/2). Work at scale 2: HNF of the rows of 2·I
    // stacked over the qualifying vectors, then divide by 2.
    let mut scaled = IntMat::zero(n + qualifying.len(), n);
    for i in 0..n {
        scaled[(i, i)] = BigInt::from(2);
    }
    for (k, v) in qualifying.iter().enumerate() {
        for j in 0..n {
            scaled[(n + k, j)] = v[j].clone();
        }
    }
    let (h, _) = hermite_normal_form(&scaled);
    for i in n..h.rows() {
        debug_assert!(h.row(i).iter().all(|x| x.is_zero()));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let basis = QMat::from_fn(n, n, |i, j| {
        BigRational::from(h[(i, j)].clone()) * half.clone()
    });

    // [L' : L] = 1/|det(basis)| = 2^n / det(HNF top block).
    let mut h_det = BigInt::one();
    for i in 0..n {
        h_det *= &h[(i, i)];
    }
    let two_n = BigInt::from(2).pow(n as u32);
    let (index, rem) = two_n.div_rem(&h_det);
    debug_assert!(rem.is_zero() && index.is_positive());

    let gq = QMat::from_int(gram);
    let new_gram_q = basis.mul_mat(&gq).mul_mat(&basis.transpose());
    let new_gram = super::qmat_to_int(&new_gram_q)
        .expect("halving preserves integrality of the form by construction");

    SaturationResult {
        lattice: Lattice::new(new_gram).expect("overlattice of a nondegenerate lattice"),
        index,
        basis_in_original: basis,
    }
}
