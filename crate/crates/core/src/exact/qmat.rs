//! Dense rational matrices: exact solving, inversion, congruence diagonalization.

use super::IntMat;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Index, IndexMut, Mul};

/// A dense matrix over `Q`, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IntMat) -> Self {
        QMat::from_fn(m.rows(), m.cols(), |i, j| BigRational::from(m[(i, j)].clone()))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = QMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul_mat(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![BigRational::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    out[i] += &self[(i, j)] * &v[j];
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss–Jordan elimination. Panics on singular input.
    pub fn inverse(&self) -> QMat {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[(i, col)].is_zero()).expect("singular matrix");
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= p.clone();
                inv[(col, j)] /= p.clone();
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let t = &f * &a[(col, j)];
                    a[(i, j)] -= t;
                    let t = &f * &inv[(col, j)];
                    inv[(i, j)] -= t;
                }
            }
        }
        inv
    }

    /// Solves `self * x = b` exactly; `None` if there is no solution.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, b.len());
        let n = self.rows;
        let m = self.cols;
        // Augmented elimination.
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..m {
            let Some(p) = (row..n).find(|&i| !a[(i, col)].is_zero()) else { continue };
            if p != row {
                for j in 0..m {
                    a.data.swap(row * m + j, p * m + j);
                }
                rhs.swap(row, p);
            }
            let lead = a[(row, col)].clone();
            for j in 0..m {
                a[(row, j)] /= lead.clone();
            }
            rhs[row] /= lead;
            for i in 0..n {
                if i == row || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..m {
                    let t = &f * &a[(row, j)];
                    a[(i, j)] -= t;
                }
                let t = &f * &rhs[row];
                rhs[i] -= t;
            }
            pivots.push((row, col));
            row += 1;
            if row == n {
                break;
            }
        }
        // Inconsistent rows?
        for i in row..n {
            if !rhs[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![BigRational::zero(); m];
        for (r, c) in pivots {
            x[c] = rhs[r].clone();
        }
        Some(x)
    }

    /// Signature `(positive, negative, zero)` of a symmetric matrix by exact
    /// congruence diagonalization (symmetric Gaussian elimination).
    pub fn signature_of_symmetric(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        let mut active: Vec<usize> = (0..n).collect();
        while let Some(&_first) = active.first() {
            // Pick a nonzero diagonal entry among active indices.
            let diag = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
            let p = match diag {
                Some(p) => p,
                None => {
                    // No diagonal pivot: look for a nonzero off-diagonal pair and
                    // fold it onto the diagonal with a congruence move.
                    let mut pair = None;
                    'outer: for (ai, &i) in active.iter().enumerate() {
                        for &j in active.iter().skip(ai + 1) {
                            if !a[(i, j)].is_zero() {
                                pair = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match pair {
                        Some((i, j)) => {
                            // Congruence: add row/col j to row/col i, producing
                            // a nonzero diagonal at (i, i) since a[i][i]=a[j][j]=0.
                            for k in 0..n {
                                let t = a[(j, k)].clone();
                                a[(i, k)] += t;
                            }
                            for k in 0..n {
                                let t = a[(k, j)].clone();
                                a[(k, i)] += t;
                            }
                            i
                        }
                        None => {
                            // Entire active block is zero.
                            zero += active.len();
                            break;
                        }
                    }
                }
            };
            let pivot = a[(p, p)].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            // Clear row/column p over the remaining active indices with the
            // rank-one congruence a[i][j] -= a[i][p]·a[p][j]/pivot. Snapshot
            // the multipliers and pivot row first: the sweep overwrites both,
            // and reading them mid-sweep would desymmetrize the matrix.
            let rest: Vec<usize> = active.iter().copied().filter(|&i| i != p).collect();
            let multipliers: Vec<BigRational> =
                rest.iter().map(|&i| &a[(i, p)] / &pivot).collect();
            let pivot_row: Vec<BigRational> = rest.iter().map(|&j| a[(p, j)].clone()).collect();
            for (ii, &i) in rest.iter().enumerate() {
                if !multipliers[ii].is_zero() {
                    for (jj, &j) in rest.iter().enumerate() {
                        let t = &multipliers[ii] * &pivot_row[jj];
                        a[(i, j)] -= t;
                    }
                }
                a[(i, p)] = BigRational::zero();
                a[(p, i)] = BigRational::zero();
            }
            active = rest;
        }
        (pos, neg, zero)
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, other: &QMat) -> QMat {
        self.mul_mat(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn inverse_roundtrip() {
        let a = QMat::from_int(&IntMat::from_rows(&[vec![2, 1], vec![1, 1]]));
        let inv = a.inverse();
        let prod = a.mul_mat(&inv);
        assert_eq!(prod, QMat::identity(2));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = QMat::from_int(&IntMat::from_rows(&[vec![1, 2], vec![2, 4]]));
        let b = vec![q(1, 1), q(2, 1)];
        let x = a.solve(&b).unwrap();
        // x + 2y = 1 must hold.
        assert_eq!(&x[0] + q(2, 1) * &x[1], q(1, 1));
        let b_bad = vec![q(1, 1), q(3, 1)];
        assert!(a.solve(&b_bad).is_none());
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        // [[0,1],[1,0]] has signature (1,1).
        let u = QMat::from_int(&IntMat::from_rows(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(u.signature_of_symmetric(), (1, 1, 0));
    }

    #[test]
    fn signature_with_kernel() {
        let m = QMat::from_int(&IntMat::from_rows(&[
            vec![2, 0, 0],
            vec![0, -3, 0],
            vec![0, 0, 0],
        ]));
        assert_eq!(m.signature_of_symmetric(), (1, 1, 1));
    }

    #[test]
    fn signature_of_dense_indefinite_form() {
        // S·D·Sᵀ for D = diag(1, -1, -1, -1) and a unimodular S; the dense
        // result must keep signature (1, 3). Every elimination step here has
        // several active rows, so a sweep that desymmetrizes the working
        // matrix mid-pass returns the wrong count.
        let s = IntMat::from_rows(&[
            vec![1, 2, 0, 1],
            vec![0, 1, 3, 1],
            vec![1, 1, 1, 0],
            vec![2, 0, 1, 1],
        ]);
        let d = IntMat::from_rows(&[
            vec![1, 0, 0, 0],
            vec![0, -1, 0, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
        ]);
        let dense = s.mul_mat(&d).mul_mat(&s.transpose());
        assert_eq!(
            QMat::from_int(&dense).signature_of_symmetric(),
            (1, 3, 0)
        );
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn signature_is_a_congruence_invariant(
            signs in proptest::collection::vec(-1i64..=1, 2..=5),
            shears in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..8),
        ) {
            let n = signs.len();
            let d = IntMat::from_fn(n, n, |i, j| {
                if i == j { BigInt::from(signs[i]) } else { BigInt::ZERO }
            });
            // Build a unimodular S as a product of shear matrices.
            let mut s = IntMat::identity(n);
            for &(i, j, f) in &shears {
                let (i, j) = (i % n, j % n);
                if i != j {
                    let shear = IntMat::from_fn(n, n, |r, c| {
                        if r == c {
                            BigInt::from(1)
                        } else if (r, c) == (i, j) {
                            BigInt::from(f)
                        } else {
                            BigInt::ZERO
                        }
                    });
                    s = s.mul_mat(&shear);
                }
            }
            let conjugated = s.mul_mat(&d).mul_mat(&s.transpose());
            let expected = (
                signs.iter().filter(|&&x| x > 0).count(),
                signs.iter().filter(|&&x| x < 0).count(),
                signs.iter().filter(|&&x| x == 0).count(),
            );
            proptest::prop_assert_eq!(
                QMat::from_int(&conjugated).signature_of_symmetric(),
                expected
            );
        }
    }
}
