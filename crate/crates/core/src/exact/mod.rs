//! Arbitrary-precision integer and rational building blocks.
//!
//! Everything downstream (lattices, reflection groups, zeta pipelines) is
//! built on the types here: dense integer matrices [`IntMat`], dense rational
//! matrices [`QMat`], and rational polynomials [`RatPoly`]. The module also
//! carries the scalar utilities that have no better home: Pell equations,
//! Euler's totient, exact integer square roots of rationals.

mod charpoly;
mod intmat;
mod jsonnum;
mod pell;
mod poly;
mod qmat;
mod snf;

pub use charpoly::char_poly;
pub use intmat::IntMat;
pub use jsonnum::FlexInt;
pub use pell::pell_fundamental;
pub use poly::{
    cyclotomic, cyclotomic_factor_orders, poly_is_finite_order_root_spectrum,
    unit_root_factor_count, RatPoly,
};
pub use qmat::QMat;
pub use snf::{hermite_normal_form, integer_kernel, smith_normal_form, solve_integer, SmithForm};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Euler's totient of `m ≥ 1`.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1);
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Largest integer `s` with `s^2 <= r`. Requires `r >= 0`.
pub fn rational_sqrt_floor(r: &BigRational) -> BigInt {
    assert!(!r.is_negative(), "rational_sqrt_floor needs a non-negative input");
    // floor(sqrt(a/b)) = floor(sqrt(a*b) / b) for b > 0.
    let ab = r.numer() * r.denom();
    let s = ab.sqrt();
    s / r.denom()
}

/// Smallest integer `s` with `s^2 >= r`. Requires `r >= 0`.
pub fn rational_sqrt_ceil(r: &BigRational) -> BigInt {
    let f = rational_sqrt_floor(r);
    let fr = BigRational::from(f.clone());
    if &fr * &fr == *r {
        f
    } else {
        f + 1
    }
}

/// `true` iff `n` is a perfect square (negative numbers are never squares).
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if n.is_zero() {
        return true;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn phi_small_values() {
        let expected = [1u64, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(euler_phi(i as u64 + 1), *e);
        }
        assert_eq!(euler_phi(60), 16);
    }

    #[test]
    fn sqrt_floor_and_ceil() {
        let r = BigRational::new(BigInt::from(10), BigInt::from(3));
        assert_eq!(rational_sqrt_floor(&r), BigInt::from(1));
        assert_eq!(rational_sqrt_ceil(&r), BigInt::from(2));
        let four = BigRational::from(BigInt::from(4));
        assert_eq!(rational_sqrt_floor(&four), BigInt::from(2));
        assert_eq!(rational_sqrt_ceil(&four), BigInt::from(2));
    }

    #[test]
    fn square_detection() {
        assert!(is_square(&BigInt::from(49)));
        assert!(is_square(&BigInt::zero()));
        assert!(is_square(&BigInt::one()));
        assert!(!is_square(&BigInt::from(50)));
        assert!(!is_square(&BigInt::from(-4)));
    }
}
