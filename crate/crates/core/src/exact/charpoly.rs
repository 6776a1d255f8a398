//! Characteristic polynomials of integer matrices, exactly.

use super::{IntMat, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Characteristic polynomial `det(t*I - A)` of a square integer matrix, by
/// the Faddeev–LeVerrier recurrence over exact rationals. The result is
/// monic with integer coefficients (asserted).
pub fn char_poly(a: &IntMat) -> RatPoly {
    assert!(a.is_square(), "char_poly requires a square matrix");
    let n = a.rows();
    if n == 0 {
        return RatPoly::one();
    }
    let aq: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from(a[(i, j)].clone())).collect())
        .collect();

    // coeffs[k] is the coefficient of t^k; start from t^n.
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();

    // M_1 = A, c_{n-1} = -tr(M_1); M_{k+1} = A (M_k + c_{n-k} I).
    let mut m: Vec<Vec<BigRational>> = aq.clone();
    for k in 1..=n {
        let trace: BigRational = (0..n).map(|i| m[i][i].clone()).sum();
        let c = -trace / BigRational::from(BigInt::from(k as i64));
        coeffs[n - k] = c.clone();
        if k == n {
            break;
        }
        // m <- aq * (m + c*I)
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[i][i] += &c;
        }
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if aq[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = &aq[i][l] * &shifted[l][j];
                    next[i][j] += t;
                }
            }
        }
        m = next;
    }

    let p = RatPoly::from_coeffs(coeffs);
    debug_assert!(p.has_integer_coeffs(), "characteristic polynomial must be integral");
    p
}
