//! Exact arithmetic in the 16-dimensional commutative algebra
//! Q[ζ, γ] / (ζ⁴ + 1, γ⁴ − c): structure constants on the basis ζ^i·γ^j
//! (0 ≤ i, j ≤ 3). For admissible `c` the algebra is a field; inverses are
//! computed by an exact 16×16 linear solve.

use super::DiagQuarticError;
use crate::exact::QMat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const DIM: usize = 16;

fn idx(i: usize, j: usize) -> usize {
    4 * i + j
}

/// An element of Q[ζ, γ]/(ζ⁴ + 1, γ⁴ − c), carrying its parameter `c` so
/// that mixed-parameter arithmetic is a detected error rather than nonsense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NFElem {
    c: BigRational,
    coeffs: Vec<BigRational>,
}

impl NFElem {
    pub fn zero(c: &BigRational) -> Self {
        NFElem {
            c: c.clone(),
            coeffs: vec![BigRational::zero(); DIM],
        }
    }

    pub fn one(c: &BigRational) -> Self {
        Self::monomial(c, BigRational::one(), 0, 0)
    }

    pub fn from_rational(c: &BigRational, q: BigRational) -> Self {
        Self::monomial(c, q, 0, 0)
    }

    /// `coeff · ζ^{zi} · γ^{gj}` with arbitrary exponents: ζ is reduced via
    /// ζ⁴ = −1 (period 8 with sign), γ via γ⁴ = c.
    pub fn monomial(c: &BigRational, coeff: BigRational, zi: i64, gj: u64) -> Self {
        let mut coeff = coeff;
        let mut g = gj;
        while g >= 4 {
            coeff *= c;
            g -= 4;
        }
        let mut z = zi.rem_euclid(8) as usize;
        if z >= 4 {
            coeff = -coeff;
            z -= 4;
        }
        let mut coeffs = vec![BigRational::zero(); DIM];
        coeffs[idx(z, g as usize)] = coeff;
        NFElem { c: c.clone(), coeffs }
    }

    pub fn zeta(c: &BigRational) -> Self {
        Self::monomial(c, BigRational::one(), 1, 0)
    }

    pub fn gamma(c: &BigRational) -> Self {
        Self::monomial(c, BigRational::one(), 0, 1)
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational part if the element is rational, else `None`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn assert_same_c(&self, other: &NFElem) {
        assert_eq!(
            self.c, other.c,
            "mixed field parameters: {} vs {}",
            self.c, other.c
        );
    }

    pub fn add(&self, other: &NFElem) -> NFElem {
        self.assert_same_c(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        NFElem { c: self.c.clone(), coeffs }
    }

    pub fn sub(&self, other: &NFElem) -> NFElem {
        self.assert_same_c(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        NFElem { c: self.c.clone(), coeffs }
    }

    pub fn neg(&self) -> NFElem {
        NFElem {
            c: self.c.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> NFElem {
        NFElem {
            c: self.c.clone(),
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    pub fn mul(&self, other: &NFElem) -> NFElem {
        self.assert_same_c(other);
        let mut coeffs = vec![BigRational::zero(); DIM];
        for i1 in 0..4 {
            for j1 in 0..4 {
                let a = &self.coeffs[idx(i1, j1)];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..4 {
                    for j2 in 0..4 {
                        let b = &other.coeffs[idx(i2, j2)];
                        if b.is_zero() {
                            continue;
                        }
                        let mut term = a * b;
                        let mut j = j1 + j2;
                        if j >= 4 {
                            term *= &self.c;
                            j -= 4;
                        }
                        let mut i = i1 + i2;
                        if i >= 4 {
                            term = -term;
                            i -= 4;
                        }
                        coeffs[idx(i, j)] += term;
                    }
                }
            }
        }
        NFElem { c: self.c.clone(), coeffs }
    }

    pub fn pow(&self, mut e: u64) -> NFElem {
        let mut base = self.clone();
        let mut acc = NFElem::one(&self.c);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the 16×16 multiplication matrix; `None`
    /// when the element is zero or a zero divisor (which cannot happen for
    /// admissible `c`, where the algebra is a field).
    pub fn inv(&self) -> Option<NFElem> {
        if self.is_zero() {
            return None;
        }
        let mut mult = QMat::zero(DIM, DIM);
        for k in 0..DIM {
            let mut basis = NFElem::zero(&self.c);
            basis.coeffs[k] = BigRational::one();
            let col = self.mul(&basis);
            for (r, v) in col.coeffs.iter().enumerate() {
                mult[(r, k)] = v.clone();
            }
        }
        let mut e0 = vec![BigRational::zero(); DIM];
        e0[0] = BigRational::one();
        let x = mult.solve(&e0)?;
        Some(NFElem {
            c: self.c.clone(),
            coeffs: x,
        })
    }

    /// The image under the field automorphism ζ ↦ ζ^a, γ ↦ ζ^{2k}·γ
    /// (`a` odd). These 16 maps form the Galois group for admissible `c`.
    pub fn apply_sigma(&self, a: u64, k: u64) -> Result<NFElem, DiagQuarticError> {
        if a % 2 == 0 || a >= 8 {
            return Err(DiagQuarticError::Invalid(format!(
                "sigma exponent a = {a} must be odd and reduced mod 8"
            )));
        }
        let mut out = NFElem::zero(&self.c);
        for i in 0..4u64 {
            for j in 0..4u64 {
                let v = &self.coeffs[idx(i as usize, j as usize)];
                if v.is_zero() {
                    continue;
                }
                // ζ^i γ^j ↦ ζ^{a·i} (ζ^{2k} γ)^j = ζ^{a·i + 2·k·j} γ^j.
                let term =
                    NFElem::monomial(&self.c, v.clone(), (a * i + 2 * k * j) as i64, j);
                out = out.add(&term);
            }
        }
        Ok(out)
    }
}

/// True iff `|c|` is neither a rational square nor twice one — the condition
/// under which Q(ζ, γ)/Q has the full degree 16 and the Galois action on the
/// lines is as large as possible. Zero is a square, hence inadmissible.
pub fn admissible_c(c: &BigRational) -> bool {
    if c.is_zero() {
        return false;
    }
    let a = c.abs();
    !rational_is_square(&a) && !rational_is_square(&(a / BigRational::from(BigInt::from(2))))
}

fn rational_is_square(r: &BigRational) -> bool {
    // Reduced form: p/q is a square iff p and q both are.
    let int_square = |n: &BigInt| {
        let s = crate::exact::rational_sqrt_floor(&BigRational::from(n.clone()));
        &(&s * &s) == n
    };
    int_square(r.numer()) && int_square(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c3() -> BigRational {
        BigRational::from(BigInt::from(3))
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zeta_has_order_eight() {
        let c = c3();
        let z = NFElem::zeta(&c);
        assert_eq!(z.pow(4), NFElem::from_rational(&c, rat(-1, 1)));
        assert_eq!(z.pow(8), NFElem::one(&c));
        assert_ne!(z.pow(2), NFElem::one(&c));
    }

    #[test]
    fn gamma_fourth_power_is_c() {
        let c = c3();
        let g = NFElem::gamma(&c);
        assert_eq!(g.pow(4), NFElem::from_rational(&c, c3()));
    }

    #[test]
    fn monomial_reduction_handles_large_exponents() {
        let c = c3();
        // ζ¹⁰ = ζ²·ζ⁸ = ζ²; γ⁶ = c·γ².
        assert_eq!(
            NFElem::monomial(&c, rat(1, 1), 10, 0),
            NFElem::zeta(&c).pow(10)
        );
        assert_eq!(
            NFElem::monomial(&c, rat(1, 1), 0, 6),
            NFElem::gamma(&c).pow(6)
        );
        // Negative ζ exponents wrap: ζ⁻¹ = −ζ³.
        assert_eq!(
            NFElem::monomial(&c, rat(1, 1), -1, 0),
            NFElem::monomial(&c, rat(-1, 1), 3, 0)
        );
    }

    #[test]
    fn inverse_of_units() {
        let c = c3();
        let samples = [
            NFElem::zeta(&c),
            NFElem::gamma(&c),
            NFElem::one(&c).add(&NFElem::zeta(&c)),
            NFElem::gamma(&c).add(&NFElem::from_rational(&c, rat(2, 5))),
            NFElem::monomial(&c, rat(-7, 3), 3, 2),
        ];
        for x in &samples {
            let xi = x.inv().expect("nonzero element of a field");
            assert_eq!(x.mul(&xi), NFElem::one(&c));
        }
        assert!(NFElem::zero(&c).inv().is_none());
    }

    #[test]
    fn zeta_inverse_matches_power() {
        let c = c3();
        let z = NFElem::zeta(&c);
        assert_eq!(z.inv().unwrap(), z.pow(7));
    }

    #[test]
    fn sigma_is_a_ring_map_and_fixes_rationals() {
        let c = c3();
        let x = NFElem::monomial(&c, rat(2, 3), 1, 1).add(&NFElem::one(&c));
        let y = NFElem::monomial(&c, rat(-1, 2), 3, 2);
        for a in [1u64, 3, 5, 7] {
            for k in 0..4u64 {
                let sx = x.apply_sigma(a, k).unwrap();
                let sy = y.apply_sigma(a, k).unwrap();
                assert_eq!(
                    x.mul(&y).apply_sigma(a, k).unwrap(),
                    sx.mul(&sy),
                    "multiplicativity at a={a}, k={k}"
                );
                assert_eq!(
                    x.add(&y).apply_sigma(a, k).unwrap(),
                    sx.add(&sy),
                    "additivity at a={a}, k={k}"
                );
                assert_eq!(
                    NFElem::from_rational(&c, rat(5, 7)).apply_sigma(a, k).unwrap(),
                    NFElem::from_rational(&c, rat(5, 7))
                );
            }
        }
        // Nontrivial automorphisms move ζ or γ.
        assert_ne!(NFElem::zeta(&c).apply_sigma(3, 0).unwrap(), NFElem::zeta(&c));
        assert_ne!(NFElem::gamma(&c).apply_sigma(1, 1).unwrap(), NFElem::gamma(&c));
    }

    #[test]
    fn even_sigma_exponent_is_rejected() {
        let c = c3();
        assert!(NFElem::one(&c).apply_sigma(2, 0).is_err());
        assert!(NFElem::one(&c).apply_sigma(9, 0).is_err());
    }

    #[test]
    fn admissibility_matches_the_square_criterion() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert!(admissible_c(&r(3, 1)));
        assert!(!admissible_c(&r(2, 1))); // twice a square
        assert!(!admissible_c(&r(4, 1))); // square
        assert!(!admissible_c(&r(0, 1)));
        assert!(!admissible_c(&r(-9, 1))); // |c| square
        assert!(!admissible_c(&r(1, 2))); // 1/2 = 2·(1/2)², twice a square
        assert!(admissible_c(&r(-3, 1)));
        assert!(admissible_c(&r(5, 1)));
        assert!(admissible_c(&r(2, 3))); // 2/3 and 1/3 both nonsquare
        assert!(!admissible_c(&r(9, 4)));
        assert!(!admissible_c(&r(9, 2))); // 9/2 = 2·(3/2)²
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplication_is_commutative_and_associative(
            xs in prop::collection::vec(-5i64..6, 6),
        ) {
            let c = c3();
            let mk = |n: i64, zi: i64, gj: u64| NFElem::monomial(&c, rat(n, 1), zi, gj);
            let a = mk(xs[0], 1, 0).add(&mk(xs[1], 2, 3));
            let b = mk(xs[2], 3, 1).add(&mk(xs[3], 0, 2));
            let d = mk(xs[4], 2, 2).add(&mk(xs[5], 1, 3));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&d), a.mul(&b.mul(&d)));
        }

        #[test]
        fn multiplication_distributes_over_addition(
            xs in prop::collection::vec(-4i64..5, 6),
        ) {
            let c = c3();
            let mk = |n: i64, zi: i64, gj: u64| NFElem::monomial(&c, rat(n, 1), zi, gj);
            let a = mk(xs[0], 1, 1).add(&mk(xs[1], 3, 0));
            let b = mk(xs[2], 0, 3).add(&mk(xs[3], 2, 1));
            let d = mk(xs[4], 3, 3).add(&mk(xs[5], 0, 1));
            prop_assert_eq!(a.mul(&b.add(&d)), a.mul(&b).add(&a.mul(&d)));
        }
    }
}
