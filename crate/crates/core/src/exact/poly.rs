//! Univariate polynomials over `Q` and cyclotomic machinery.

use super::euler_phi;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial over `Q`, coefficients stored in ascending degree order with
/// no trailing zeros (the zero polynomial has an empty coefficient list).
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        RatPoly::monomial(BigRational::one(), 1)
    }

    /// Builds from ascending integer coefficients.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        let mut p = RatPoly {
            coeffs: coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect(),
        };
        p.trim();
        p
    }

    /// Builds from ascending rational coefficients.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Scales so the leading coefficient is 1. Panics on the zero polynomial.
    pub fn monic(&self) -> RatPoly {
        assert!(!self.is_zero());
        let lead = self.leading();
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.leading() / lead.clone();
            let shift = rd - dd;
            quot[shift] = f.clone();
            // rem -= f * t^shift * divisor
            for (k, c) in divisor.coeffs.iter().enumerate() {
                let t = &f * c;
                rem.coeffs[shift + k] -= t;
            }
            rem.trim();
        }
        (RatPoly::from_coeffs(quot), rem)
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &RatPoly) -> RatPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "exact_div: nonzero remainder");
        q
    }

    /// `true` iff `divisor` divides `self` exactly.
    pub fn divides(&self, divisor: &RatPoly) -> bool {
        let (_, r) = self.div_rem(divisor);
        r.is_zero()
    }

    /// Monic gcd by the Euclidean algorithm (zero if both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Reciprocal polynomial `t^d * p(1/t)` where `d = deg p`.
    pub fn reversed(&self) -> RatPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        RatPoly::from_coeffs(coeffs)
    }

    /// `true` iff all coefficients are integers.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
                .collect(),
        )
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatPoly {
    /// Renders in descending degree order, e.g. `t^3 - 2*t + 1/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if k == 0 || !unit_mag {
                write!(f, "{}", mag)?;
            }
            if k > 0 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

/// The `m`-th cyclotomic polynomial, by iterated exact division of `t^m - 1`.
pub fn cyclotomic(m: u64) -> RatPoly {
    assert!(m >= 1);
    // t^m - 1
    let mut num = RatPoly::monomial(BigRational::one(), m as usize);
    num = &num - &RatPoly::one();
    for d in 1..m {
        if m % d == 0 {
            num = num.exact_div(&cyclotomic(d));
        }
    }
    num
}

/// Total multiplicity of roots of unity among the roots of `f`, counted by
/// stripping cyclotomic factors. Only `m` with `phi(m) <= deg f` can divide.
pub fn unit_root_factor_count(f: &RatPoly) -> u64 {
    let Some(deg) = f.degree() else { return 0 };
    if deg == 0 {
        return 0;
    }
    let mut g = f.clone();
    let mut count = 0u64;
    // phi(m) >= sqrt(m/2), so phi(m) <= deg forces m <= 2*deg^2 + 1.
    let bound = 2 * (deg as u64) * (deg as u64) + 1;
    for m in 1..=bound {
        if euler_phi(m) > deg as u64 {
            continue;
        }
        let phi_m = cyclotomic(m);
        loop {
            let (q, r) = g.div_rem(&phi_m);
            if r.is_zero() && !q.is_zero() {
                g = q;
                count += euler_phi(m);
            } else {
                break;
            }
        }
        if g.degree() == Some(0) {
            break;
        }
    }
    count
}

/// `true` iff every root of `f` is a root of unity, i.e. `f` is a nonzero
/// constant times a product of cyclotomic polynomials.
pub fn poly_is_finite_order_root_spectrum(f: &RatPoly) -> bool {
    match f.degree() {
        None => false,
        Some(0) => true,
        Some(d) => unit_root_factor_count(f) == d as u64,
    }
}

/// If `f` is a constant times a product of cyclotomic polynomials, returns
/// the multiset of their orders `m` (with multiplicity); otherwise `None`.
pub fn cyclotomic_factor_orders(f: &RatPoly) -> Option<Vec<u64>> {
    let deg = f.degree()?;
    if deg == 0 {
        return Some(vec![]);
    }
    let mut g = f.clone();
    let mut orders = Vec::new();
    let bound = 2 * (deg as u64) * (deg as u64) + 1;
    for m in 1..=bound {
        if euler_phi(m) > deg as u64 {
            continue;
        }
        let phi_m = cyclotomic(m);
        loop {
            let (q, r) = g.div_rem(&phi_m);
            if r.is_zero() && !q.is_zero() {
                g = q;
                orders.push(m);
            } else {
                break;
            }
        }
        if g.degree() == Some(0) {
            return Some(orders);
        }
    }
    None
}
