//! Exact short-vector enumeration in definite lattices (Fincke–Pohst).

use super::{Lattice, LatticeError};
use crate::exact::{rational_sqrt_floor, IntMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// All nonzero vectors `v` with `v·v = target`, in the lattice's own basis
/// coordinates, sorted lexicographically. Both `v` and `-v` are listed.
///
/// The lattice must be definite. A target whose sign disagrees with the
/// definiteness (or a zero target) returns the empty list — a definite
/// lattice has no nonzero vectors of that norm.
///
/// Enumeration is by exact rational Cholesky decomposition with integer
/// square-root bounds; no floating point and no tolerances are involved.
/// The basis is first put through a deterministic size-reduction sweep
/// (norm-decreasing single-vector replacements only, no basis reordering)
/// to keep the search box small; results are mapped back to the original
/// basis, so the output is independent of the preprocessing.
pub fn short_vectors(lattice: &Lattice, target: &BigInt) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let (p, q) = lattice.signature();
    if p != 0 && q != 0 {
        return Err(LatticeError::NotDefinite);
    }
    let negative = p == 0;
    if target.is_zero() {
        return Ok(vec![]);
    }
    if (negative && target.is_positive()) || (!negative && target.is_negative()) {
        return Ok(vec![]);
    }

    // Work with a positive-definite Gram and positive target.
    let gram_pos = if negative {
        IntMat::from_fn(lattice.rank(), lattice.rank(), |i, j| {
            -lattice.gram()[(i, j)].clone()
        })
    } else {
        lattice.gram().clone()
    };
    let target_pos = target.abs();

    let (reduced_gram, transform) = size_reduce(&gram_pos);
    let zero_shift = vec![BigRational::zero(); lattice.rank()];
    let mut found = enumerate(
        &reduced_gram,
        &zero_shift,
        &BigRational::from(target_pos),
        true,
    );

    // Map back: a solution x in the reduced basis is xᵀ·T in the original.
    let mut out: Vec<Vec<BigInt>> = found
        .drain(..)
        .map(|x| {
            let xm = IntMat::from_fn(1, x.len(), |_, j| x[j].clone());
            xm.mul_mat(&transform).row(0).to_vec()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// All integral `x` with `(shift + x)·(shift + x) = target`, where `shift`
/// has rational coordinates in the lattice basis — the vectors of a given
/// norm in the coset `shift + L`. Sorted lexicographically by `x`. The
/// lattice must be definite; a target on the wrong side of zero returns the
/// empty list. The zero vector of the coset (when `shift` is integral) is
/// *not* excluded — exclusions are the caller's business here.
pub fn coset_short_vectors(
    lattice: &Lattice,
    shift: &[BigRational],
    target: &BigRational,
) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    if shift.len() != lattice.rank() {
        return Err(LatticeError::Invalid(format!(
            "shift length {} vs rank {}",
            shift.len(),
            lattice.rank()
        )));
    }
    let (p, q) = lattice.signature();
    if p != 0 && q != 0 {
        return Err(LatticeError::NotDefinite);
    }
    let negative = p == 0;
    if (negative && target.is_positive()) || (!negative && target.is_negative()) {
        return Ok(vec![]);
    }
    let gram_pos = if negative {
        IntMat::from_fn(lattice.rank(), lattice.rank(), |i, j| {
            -lattice.gram()[(i, j)].clone()
        })
    } else {
        lattice.gram().clone()
    };
    let target_pos = target.abs();

    let (reduced_gram, transform) = size_reduce(&gram_pos);
    // Coordinates of the same coset representative in the reduced basis:
    // s' = T⁻ᵀ·s (reduced basis rows are T times the original ones).
    let t_inv = crate::exact::QMat::from_int(&transform.inverse_unimodular());
    let shift_reduced = t_inv.transpose().mul_vec(shift);
    let mut found = enumerate(&reduced_gram, &shift_reduced, &target_pos, false);
    let mut out: Vec<Vec<BigInt>> = found
        .drain(..)
        .map(|x| {
            let xm = IntMat::from_fn(1, x.len(), |_, j| x[j].clone());
            xm.mul_mat(&transform).row(0).to_vec()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Deterministic size reduction: sweeps replacing `b_i ← b_i − μ·b_j`
/// (μ = nearest integer to `G_ij/G_jj`) whenever that strictly decreases
/// `G_ii`. The diagonal is a positive-integer vector that strictly
/// decreases with every replacement, so this terminates. Returns the reduced
/// Gram and the transform `T` with rows expressing the reduced basis in the
/// original one.
fn size_reduce(gram: &IntMat) -> (IntMat, IntMat) {
    let n = gram.rows();
    let mut g = gram.clone();
    let mut t = IntMat::identity(n);
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                // μ = round(G_ij / G_jj), computed exactly.
                let two_gij = &g[(i, j)] * BigInt::from(2);
                let gjj = g[(j, j)].clone();
                let mu = div_round(&g[(i, j)], &gjj);
                if mu.is_zero() {
                    continue;
                }
                // New norm: G_ii − 2μG_ij + μ²G_jj.
                let new_norm =
                    &g[(i, i)] - &mu * &two_gij + &mu * &mu * &gjj;
                if new_norm < g[(i, i)] {
                    // b_i ← b_i − μ b_j : row update on T and congruence on G.
                    let neg_mu = -mu;
                    t.add_row_multiple(i, j, &neg_mu);
                    // G ← E G Eᵀ with E the elementary row operation.
                    let mut row_j: Vec<BigInt> = g.row(j).to_vec();
                    for (k, v) in row_j.iter_mut().enumerate() {
                        let updated = &g[(i, k)] + &neg_mu * &*v;
                        *v = updated;
                        g[(i, k)] = v.clone();
                    }
                    for k in 0..n {
                        let updated = &g[(k, i)] + &neg_mu * &g[(k, j)];
                        g[(k, i)] = updated;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert_eq!(
        t.mul_mat(gram).mul_mat(&t.transpose()),
        g,
        "size reduction must be a congruence"
    );
    (g, t)
}

/// Nearest integer to a/b, ties rounded down (deterministic).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    let fl = a.div_floor(b);
    let afrac = BigRational::new(a.clone(), b.clone());
    let err_floor = (&afrac - BigRational::from(fl.clone())).abs();
    let err_ceil = (BigRational::from(&fl + BigInt::from(1)) - &afrac).abs();
    if err_ceil < err_floor {
        fl + 1
    } else {
        fl
    }
}

/// Cholesky-style decomposition of a positive-definite rational matrix into
/// `Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²`.
fn cholesky_q(gram: &IntMat) -> Vec<Vec<BigRational>> {
    let n = gram.rows();
    let mut q: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(gram[(i, j)].clone()))
                .collect()
        })
        .collect();
    for i in 0..n {
        assert!(q[i][i].is_positive(), "matrix must be positive definite");
        for j in (i + 1)..n {
            let qji = q[i][j].clone();
            q[j][i] = qji.clone(); // stash original for the update step
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                let sub = &q[k][i] * &q[i][l];
                q[k][l] = &q[k][l] - &sub;
            }
        }
    }
    q
}

/// Largest integer `m` with `m ≤ c + sqrt(r)` (`r ≥ 0`).
fn floor_plus_sqrt(c: &BigRational, r: &BigRational) -> BigInt {
    let mut m = c.floor().to_integer() + rational_sqrt_floor(r);
    let le = |m: &BigInt| -> bool {
        let diff = BigRational::from(m.clone()) - c;
        !diff.is_positive() || &(&diff * &diff) <= r
    };
    while le(&(&m + BigInt::from(1))) {
        m += 1;
    }
    while !le(&m) {
        m -= 1;
    }
    m
}

/// Smallest integer `m` with `m ≥ c − sqrt(r)` (`r ≥ 0`).
fn ceil_minus_sqrt(c: &BigRational, r: &BigRational) -> BigInt {
    -floor_plus_sqrt(&-c, r)
}

/// All x (integral offsets) with Q(shift + x) = target exactly (target ≥ 0),
/// by backtracking from the last coordinate. With `exclude_zero`, the zero
/// *point* shift + x = 0 is dropped (only meaningful for integral shifts).
fn enumerate(
    gram: &IntMat,
    shift: &[BigRational],
    target: &BigRational,
    exclude_zero: bool,
) -> Vec<Vec<BigInt>> {
    let n = gram.rows();
    let q = cholesky_q(gram);
    let mut out = Vec::new();
    let mut x = vec![BigInt::ZERO; n];

    // Depth-first from coordinate n-1 down to 0. At level i the remaining
    // budget is t_i and the linear offset u_i = Σ_{j>i} q_ij (x_j + s_j);
    // the level variable is w_i = x_i + s_i.
    #[allow(clippy::too_many_arguments)]
    fn descend(
        i: usize,
        t_rem: BigRational,
        q: &[Vec<BigRational>],
        shift: &[BigRational],
        x: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
        exclude_zero: bool,
    ) {
        let u_i: BigRational = ((i + 1)..x.len())
            .map(|j| &q[i][j] * (BigRational::from(x[j].clone()) + &shift[j]))
            .sum();
        let r = &t_rem / &q[i][i];
        let center = -(&u_i + &shift[i]);
        let lo = ceil_minus_sqrt(&center, &r);
        let hi = floor_plus_sqrt(&center, &r);
        let mut xi = lo;
        while xi <= hi {
            let term = {
                let s = BigRational::from(xi.clone()) + &shift[i] + &u_i;
                &q[i][i] * &s * &s
            };
            let rest = &t_rem - &term;
            debug_assert!(!rest.is_negative());
            x[i] = xi.clone();
            if i == 0 {
                if rest.is_zero() {
                    let is_zero_point = x
                        .iter()
                        .zip(shift)
                        .all(|(c, s)| (BigRational::from(c.clone()) + s).is_zero());
                    if !(exclude_zero && is_zero_point) {
                        out.push(x.clone());
                    }
                }
            } else {
                descend(i - 1, rest, q, shift, x, out, exclude_zero);
            }
            xi += 1;
        }
        x[i] = BigInt::ZERO;
    }

    descend(n - 1, target.clone(), &q, shift, &mut x, &mut out, exclude_zero);
    out
}
