//! Fundamental solutions of the Pell equation `x^2 - d*y^2 = 1`.

use num_bigint::BigInt;
use num_traits::One;

/// Returns the fundamental (minimal positive) solution `(x, y)` with
/// `x^2 - d*y^2 = 1`, `y >= 1`, computed from the continued-fraction
/// convergents of `sqrt(d)`. Requires `d > 0` and not a perfect square;
/// gives up after `cap` convergents (the expansion is periodic, so any
/// realistic `d` terminates long before the default cap of 10^6).
pub fn pell_fundamental(d: u64, cap: usize) -> Option<(BigInt, BigInt)> {
    if d == 0 {
        return None;
    }
    let a0 = d.isqrt();
    if a0 * a0 == d {
        return None; // perfect square: no solution with y >= 1
    }
    let d_big = BigInt::from(d);

    // Continued fraction of sqrt(d): m_{k+1} = d_k a_k - m_k,
    // d_{k+1} = (d - m_{k+1}^2)/d_k, a_{k+1} = floor((a0 + m_{k+1})/d_{k+1}).
    let mut m: u64 = 0;
    let mut den: u64 = 1;
    let mut a: u64 = a0;

    // Convergents h_k / k_k.
    let mut h_prev = BigInt::one();
    let mut h = BigInt::from(a0);
    let mut k_prev = BigInt::ZERO;
    let mut k = BigInt::one();

    for _ in 0..cap {
        if &h * &h - &d_big * &k * &k == BigInt::one() {
            return Some((h, k));
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        let h_next = BigInt::from(a) * &h + &h_prev;
        let k_next = BigInt::from(a) * &k + &k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    None
}
