//! Deciding whether an integer matrix has infinite multiplicative order.

use crate::exact::{char_poly, cyclotomic_factor_orders, IntMat};
use num_integer::Integer;

/// Returns the matrix power `g^k` by square-and-multiply.
fn mat_pow(g: &IntMat, mut k: u64) -> IntMat {
    let mut base = g.clone();
    let mut acc = IntMat::identity(g.rows());
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul_mat(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul_mat(&base);
        }
    }
    acc
}

/// Decides whether a square integer matrix has infinite order.
///
/// A matrix of finite order is diagonalizable with roots of unity as
/// eigenvalues, so its characteristic polynomial is a product of cyclotomic
/// polynomials. Conversely, if the characteristic polynomial is such a
/// product with factor orders `m₁, …, m_s`, any finite order must divide
/// `k = lcm(mᵢ)` — and `k` is small, because the factor degrees `φ(mᵢ)` sum
/// to the dimension. Checking `g^k = 1` therefore decides the question
/// completely, including non-semisimple cases such as unipotents, whose
/// characteristic polynomial passes the cyclotomic test but whose power
/// fails the identity test.
pub fn is_infinite_order(g: &IntMat) -> bool {
    assert!(g.is_square(), "order is defined for square matrices");
    let f = char_poly(g);
    let orders = match cyclotomic_factor_orders(&f) {
        None => return true,
        Some(orders) => orders,
    };
    let k = orders.iter().fold(1u64, |acc, &m| acc.lcm(&m));
    !mat_pow(g, k).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_involutions_are_finite() {
        assert!(!is_infinite_order(&IntMat::identity(3)));
        assert!(!is_infinite_order(&IntMat::from_rows(&[
            vec![1, 0],
            vec![0, -1]
        ])));
    }

    #[test]
    fn quarter_turn_is_finite() {
        let g = IntMat::from_rows(&[vec![0, -1], vec![1, 0]]);
        assert!(!is_infinite_order(&g));
    }

    #[test]
    fn order_six_companion_is_finite() {
        // Companion matrix of t² − t + 1.
        let g = IntMat::from_rows(&[vec![0, -1], vec![1, 1]]);
        assert!(!is_infinite_order(&g));
        assert!(mat_pow(&g, 6).is_identity());
        assert!(!mat_pow(&g, 3).is_identity());
    }

    #[test]
    fn unipotent_is_infinite() {
        // Characteristic polynomial (t − 1)² is cyclotomic-only, yet the
        // matrix has infinite order.
        let g = IntMat::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert!(is_infinite_order(&g));
    }

    #[test]
    fn mixed_unipotent_block_is_infinite() {
        let g = IntMat::from_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, -1]]);
        assert!(is_infinite_order(&g));
    }

    #[test]
    fn hyperbolic_rotation_is_infinite() {
        // Product of the two folded reflections of the degree-2 example;
        // its characteristic polynomial t² − 1442t + 1 has a root off the
        // unit circle.
        let g = IntMat::from_rows(&[vec![721, 456], vec![1140, 721]]);
        assert!(is_infinite_order(&g));
    }

    #[test]
    fn permutation_matrices_are_finite() {
        // 5-cycle.
        let g = IntMat::from_fn(5, 5, |r, c| {
            if r == (c + 1) % 5 {
                num_bigint::BigInt::from(1)
            } else {
                num_bigint::BigInt::ZERO
            }
        });
        assert!(!is_infinite_order(&g));
        assert!(mat_pow(&g, 5).is_identity());
    }
}
