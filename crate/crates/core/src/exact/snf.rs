//! Smith and Hermite normal forms with transformation matrices.

use super::IntMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Result of [`smith_normal_form`]: unimodular `u`, `v` with `u * a * v = d`
/// and `d` diagonal with non-negative entries satisfying `d[0] | d[1] | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// Diagonal entries (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Position of the smallest-|value| nonzero entry of `a` in the submatrix with
/// both indices `>= t`; ties broken by lowest row index, then lowest column.
fn smallest_pivot(a: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bv, _, _)) => v < *bv,
            };
            if better {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form. Pivot selection: smallest absolute value, ties broken by
/// lowest row then column index, which makes the transform deterministic.
pub fn smith_normal_form(a: &IntMat) -> SmithForm {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows());
    let mut v = IntMat::identity(a.cols());
    let steps = a.rows().min(a.cols());

    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = smallest_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear the cross at (t, t); a nonzero remainder shrinks the pivot, so
        // this loop terminates.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..d.rows() {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_rem(&d[(t, t)]).0;
                if !q.is_zero() {
                    let nq = -q;
                    d.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                if !d[(i, t)].is_zero() {
                    // Remainder is strictly smaller; promote it to pivot.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..d.cols() {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_rem(&d[(t, t)]).0;
                if !q.is_zero() {
                    let nq = -q;
                    d.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                }
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
        }

        // Divisibility fix-up: the pivot must divide every remaining entry.
        let mut fixed = false;
        'scan: for i in t + 1..d.rows() {
            for j in t + 1..d.cols() {
                if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue; // redo step t with the enlarged cross
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    debug_assert!(u.mul_mat(a).mul_mat(&v) == d);
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u` unimodular,
/// `u * a = h`, `h` in row echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`. Zero rows sink to the bottom.
pub fn hermite_normal_form(a: &IntMat) -> (IntMat, IntMat) {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.rows());
    let mut r = 0;
    for col in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        // Reduce the column below r to a single nonzero entry by gcd steps.
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for i in r..h.rows() {
                let v = h[(i, col)].abs();
                if v.is_zero() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bv, _)) => v < *bv,
                };
                if better {
                    best = Some((v, i));
                }
            }
            let Some((_, p)) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut any_left = false;
            for i in r + 1..h.rows() {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_rem(&h[(r, col)]).0;
                if !q.is_zero() {
                    let nq = -q;
                    h.add_row_multiple(i, r, &nq);
                    u.add_row_multiple(i, r, &nq);
                }
                if !h[(i, col)].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = h[(i, col)].div_floor(&h[(r, col)]);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
            }
        }
        r += 1;
    }
    debug_assert!(u.mul_mat(a) == h);
    (h, u)
}

/// Basis of the integer kernel `{x : a * x = 0}` as rows of the returned
/// matrix, in Hermite-reduced form. The kernel of an integer matrix is always
/// saturated (primitive) as computed here.
pub fn integer_kernel(a: &IntMat) -> IntMat {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols();
    if rank == n {
        return IntMat::zero(0, n);
    }
    // Columns of V beyond the rank span the kernel: a * (V e_j) = U^-1 D e_j = 0.
    let kernel_cols: Vec<usize> = (rank..n).collect();
    let all_rows: Vec<usize> = (0..n).collect();
    let basis = snf.v.submatrix(&all_rows, &kernel_cols).transpose();
    let (h, _) = hermite_normal_form(&basis);
    let keep: Vec<usize> = (0..h.rows()).filter(|&i| !h.row(i).iter().all(|x| x.is_zero())).collect();
    let cols: Vec<usize> = (0..n).collect();
    h.submatrix(&keep, &cols)
}

/// Solves `a * x = b` over the integers; `None` if no integral solution exists.
pub fn solve_integer(a: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let n = a.cols();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..a.rows() {
        let d = if i < n.min(a.rows()) { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}
