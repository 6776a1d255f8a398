//! Dense integer matrices with arbitrary-precision entries.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// A dense `rows x cols` matrix over `Z`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of `i64` entries. Rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        assert!(!rows.is_empty(), "from_rows needs at least one row");
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMat { rows: rows.len(), cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a column vector from big-integer entries.
    pub fn col_vector(entries: &[BigInt]) -> Self {
        IntMat::from_fn(entries.len(), 1, |i, _| entries[i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { BigInt::one() } else { BigInt::zero() };
                if self[(i, j)] != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Stacks `self` on top of `other` (column counts must agree).
    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Direct sum: block-diagonal concatenation.
    pub fn direct_sum(&self, other: &IntMat) -> IntMat {
        let mut m = IntMat::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Returns the submatrix given by the listed rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMat {
        IntMat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Swaps rows `a` and `b`.
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Swaps columns `a` and `b`.
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Adds `k` times row `src` to row `dst`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let t = &self[(src, j)] * k;
            self[(dst, j)] += t;
        }
    }

    /// Adds `k` times column `src` to column `dst`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let t = &self[(i, src)] * k;
            self[(i, dst)] += t;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    /// Matrix product.
    pub fn mul_mat(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "mul: dimension mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector of coordinates.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    out[i] += &self[(i, j)] * &v[j];
                }
            }
        }
        out
    }

    /// Determinant by the Bareiss fraction-free algorithm. Requires a square matrix.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                // Find a row below with a nonzero pivot entry.
                let mut found = None;
                for i in k + 1..n {
                    if !a[(i, k)].is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    // Bareiss: division is exact.
                    let (q, r) = num_integer::Integer::div_rem(&num, &prev);
                    debug_assert!(r.is_zero());
                    a[(i, j)] = q;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Rank over `Q`, computed by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            // Locate a pivot in this column at or below `row`.
            let mut pivot = None;
            for i in row..a.rows {
                if !a[(i, col)].is_zero() {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            a.swap_rows(row, p);
            for i in row + 1..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                // Cross-multiply to clear the entry; content growth is fine here.
                let lead = a[(row, col)].clone();
                let target = a[(i, col)].clone();
                for j in col..a.cols {
                    let v = &a[(i, j)] * &lead - &a[(row, j)] * &target;
                    a[(i, j)] = v;
                }
            }
            row += 1;
            rank += 1;
            if row == a.rows {
                break;
            }
        }
        rank
    }

    /// Inverse of a unimodular matrix (determinant `±1`), via the adjugate.
    ///
    /// Panics if the matrix is not square or not unimodular.
    pub fn inverse_unimodular(&self) -> IntMat {
        assert!(self.is_square());
        let d = self.det();
        assert!(d.abs().is_one(), "inverse_unimodular: determinant is not ±1");
        let n = self.rows;
        let mut adj = IntMat::zero(n, n);
        let idx: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let rows: Vec<usize> = idx.iter().copied().filter(|&r| r != i).collect();
            for j in 0..n {
                let cols: Vec<usize> = idx.iter().copied().filter(|&c| c != j).collect();
                let minor = self.submatrix(&rows, &cols).det();
                let s = if (i + j) % 2 == 0 { minor } else { -minor };
                adj[(j, i)] = s; // adjugate transposes the cofactor grid
            }
        }
        if d.is_one() {
            adj
        } else {
            -adj
        }
    }

    /// Largest absolute value among the entries.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Entries as `i64`, when they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self[(i, j)].to_i64()?);
            }
            out.push(row);
        }
        Some(out)
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }
}

impl Neg for IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, other: &IntMat) -> IntMat {
        self.mul_mat(other)
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let a = IntMat::from_rows(&[vec![1, 2], vec![3, 4]]);
        let id = IntMat::identity(2);
        assert_eq!(a.mul_mat(&id), a);
        let b = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let ab = a.mul_mat(&b);
        assert_eq!(ab, IntMat::from_rows(&[vec![2, 1], vec![4, 3]]));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a = IntMat::from_rows(&[vec![2, 0, 1], vec![1, -3, 2], vec![4, 1, -1]]);
        // Expansion along the first row: 2*(3-2) - 0 + 1*(1+12) = 15.
        assert_eq!(a.det(), BigInt::from(15));
        let singular = IntMat::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.det(), BigInt::zero());
    }

    #[test]
    fn det_with_zero_leading_pivot() {
        let a = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.det(), BigInt::from(-1));
    }

    #[test]
    fn rank_of_rectangular() {
        let a = IntMat::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(IntMat::zero(3, 4).rank(), 0);
        assert_eq!(IntMat::identity(5).rank(), 5);
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = IntMat::from_rows(&[vec![1, 1, 0], vec![0, 1, 2], vec![0, 0, 1]]);
        let inv = u.inverse_unimodular();
        assert!(u.mul_mat(&inv).is_identity());
        assert!(inv.mul_mat(&u).is_identity());
    }

    #[test]
    fn direct_sum_blocks() {
        let u = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let a = IntMat::from_rows(&[vec![-2]]);
        let s = u.direct_sum(&a);
        assert_eq!(s.rows(), 3);
        assert_eq!(s[(2, 2)], BigInt::from(-2));
        assert_eq!(s[(0, 2)], BigInt::zero());
    }
}
