//! Discriminant groups `L*/L` and their finite quadratic forms.

use super::{Lattice, LatticeError};
use crate::exact::{smith_normal_form, QMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The discriminant group `L*/L` of a nondegenerate lattice, as a product of
/// cyclic groups with lifted generators and the induced finite quadratic form.
///
/// `form_values` is a symmetric matrix of exact rationals reduced into
/// `[0, 2)`, i.e. values in `Q/2Z`:
/// * diagonal entry `(i,i)` is `q(g_i) = g_i·g_i mod 2Z`;
/// * off-diagonal entry `(i,j)` is `2·b(g_i,g_j) mod 2Z`, twice the bilinear
///   pairing, so that `q(Σ a_i g_i) = Σ a_i² q(g_i) + Σ_{i<j} a_i a_j F_ij`
///   holds mod 2Z.
#[derive(Clone, Debug)]
pub struct DiscriminantData {
    /// Cyclic orders `d_1 | d_2 | ... | d_k`, each > 1.
    pub invariant_factors: Vec<BigInt>,
    /// Rational coordinate vectors in `L ⊗ Q` (basis coordinates of `L`)
    /// whose classes generate the corresponding cyclic factors.
    pub generator_lifts: Vec<Vec<BigRational>>,
    /// Quadratic/bilinear form data on the generators, reduced into `[0, 2)`.
    pub form_values: QMat,
    /// Exact bilinear pairings `b(g_i, g_j)` of the lifts (not reduced);
    /// used by the automorphism search.
    pairings: QMat,
}

/// Reduces a rational into `[0, m)`.
fn reduce_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from(BigInt::from(m));
    let mut r = x - (x / &m).floor() * &m;
    if r.is_negative() {
        r += &m;
    }
    // Guard the boundary: floor arithmetic already lands in [0, m).
    debug_assert!(!r.is_negative() && r < m);
    r
}

impl Lattice {
    /// The discriminant group `L*/L` via the Smith normal form of the Gram
    /// matrix: with `U·G·V = D`, the quotient `Z^n/G·Z^n ≅ ⊕ Z/d_i` has the
    /// classes of `G⁻¹·U⁻¹·e_i` as generators in `L*/L`.
    pub fn discriminant_group(&self) -> DiscriminantData {
        let n = self.rank();
        let sf = smith_normal_form(self.gram());
        let diag = sf.diagonal();
        let u_inv = sf.u.inverse_unimodular();
        let g_inv = QMat::from_int(self.gram()).inverse();

        let mut invariant_factors = Vec::new();
        let mut generator_lifts: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..n {
            let d = &diag[i];
            if d.abs() <= BigInt::one() {
                continue;
            }
            invariant_factors.push(d.abs());
            // lift = G^{-1} · (column i of U^{-1})
            let col: Vec<BigRational> = (0..n)
                .map(|r| BigRational::from(u_inv[(r, i)].clone()))
                .collect();
            let mut lift = g_inv.mul_vec(&col);
            // Reduce coordinates into [0,1): translation by L doesn't change
            // the class and keeps lifts small and deterministic.
            for c in lift.iter_mut() {
                *c = reduce_mod(c, 1);
            }
            generator_lifts.push(lift);
        }

        let k = invariant_factors.len();
        let gq = QMat::from_int(self.gram());
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let gy = gq.mul_vec(y);
            x.iter().zip(gy.iter()).map(|(a, b)| a * b).sum()
        };
        let mut pairings = QMat::zero(k.max(1), k.max(1));
        let mut form_values = QMat::zero(k.max(1), k.max(1));
        if k == 0 {
            return DiscriminantData {
                invariant_factors,
                generator_lifts,
                form_values: QMat::zero(0, 0),
                pairings: QMat::zero(0, 0),
            };
        }
        for i in 0..k {
            for j in 0..k {
                let b = pair(&generator_lifts[i], &generator_lifts[j]);
                pairings[(i, j)] = b.clone();
                form_values[(i, j)] = if i == j {
                    reduce_mod(&b, 2)
                } else {
                    reduce_mod(&(&b + &b), 2)
                };
            }
        }
        DiscriminantData {
            invariant_factors,
            generator_lifts,
            form_values,
            pairings,
        }
    }
}

impl DiscriminantData {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Group order (product of invariant factors).
    pub fn order(&self) -> BigInt {
        self.invariant_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    fn orders_u64(&self) -> Option<Vec<u64>> {
        self.invariant_factors
            .iter()
            .map(|d| u64::try_from(d.clone()).ok())
            .collect()
    }

    /// Quadratic form value `q(x) ∈ [0,2)` of the element with generator
    /// coefficients `a` (each `a_i` taken mod `d_i`).
    pub fn q_value(&self, a: &[u64]) -> BigRational {
        let k = self.invariant_factors.len();
        assert_eq!(a.len(), k);
        let mut total = BigRational::zero();
        for i in 0..k {
            let ai = BigRational::from(BigInt::from(a[i]));
            total += &ai * &ai * &self.pairings[(i, i)];
            for j in (i + 1)..k {
                let aj = BigRational::from(BigInt::from(a[j]));
                let two = BigRational::from(BigInt::from(2));
                total += two * &ai * aj * &self.pairings[(i, j)];
            }
        }
        reduce_mod(&total, 2)
    }

    /// Bilinear form value `b(x,y) ∈ [0,1)` between elements given by
    /// generator coefficients.
    pub fn b_value(&self, a: &[u64], b: &[u64]) -> BigRational {
        let k = self.invariant_factors.len();
        let mut total = BigRational::zero();
        for i in 0..k {
            for j in 0..k {
                let c = BigRational::from(BigInt::from(a[i] * b[j]));
                total += c * &self.pairings[(i, j)];
            }
        }
        reduce_mod(&total, 1)
    }

    /// Enumerates all group elements as coefficient tuples, lexicographically.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let orders = self.orders_u64().expect("orders fit in u64");
        let mut out = vec![vec![]];
        for d in orders {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for v in 0..d {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

/// All automorphisms of the discriminant group preserving the quadratic form,
/// by exhaustive search over generator images. Returns the full element list
/// (as matrices whose column `i` is the coefficient tuple of the image of
/// generator `i`) together with the group order.
///
/// Rejects groups of order above 2^16.
pub fn aut_discriminant_form(
    d: &DiscriminantData,
) -> Result<(u64, Vec<Vec<Vec<u64>>>), LatticeError> {
    let order = d.order();
    if order > BigInt::from(1u64 << 16) {
        return Err(LatticeError::SizeCap(format!(
            "discriminant group order {} exceeds 2^16",
            order
        )));
    }
    if d.is_trivial() {
        return Ok((1, vec![vec![]]));
    }
    let orders = d.orders_u64().expect("orders fit in u64");
    let k = orders.len();
    let elements = d.elements();
    let group_order = elements.len();

    // Element order within the group: smallest m >= 1 with m*a == 0.
    let elt_order = |a: &[u64]| -> u64 {
        let mut m = 1u64;
        loop {
            if a.iter()
                .zip(orders.iter())
                .all(|(ai, di)| (ai * m) % di == 0)
            {
                return m;
            }
            m += 1;
        }
    };

    // Candidate images for generator i: elements whose order divides d_i and
    // whose q-value matches q(g_i). (Matching orders exactly is implied for
    // genuine automorphisms but divisibility is what well-definedness needs.)
    let gen_coeffs: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    let mut candidates: Vec<Vec<&Vec<u64>>> = Vec::with_capacity(k);
    for i in 0..k {
        let qi = d.q_value(&gen_coeffs[i]);
        let di = orders[i];
        candidates.push(
            elements
                .iter()
                .filter(|e| di % elt_order(e) == 0 && d.q_value(e) == qi)
                .collect(),
        );
    }

    let target_b: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| d.b_value(&gen_coeffs[i], &gen_coeffs[j]))
                .collect()
        })
        .collect();

    let mut found: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut images: Vec<&Vec<u64>> = Vec::with_capacity(k);

    fn backtrack<'a>(
        level: usize,
        k: usize,
        candidates: &[Vec<&'a Vec<u64>>],
        target_b: &[Vec<BigRational>],
        d: &DiscriminantData,
        images: &mut Vec<&'a Vec<u64>>,
        orders: &[u64],
        elements: &[Vec<u64>],
        found: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if level == k {
            // Bijectivity: images of all group elements must be distinct.
            let mut seen = std::collections::HashSet::with_capacity(elements.len());
            for e in elements {
                let img: Vec<u64> = (0..k)
                    .map(|j| {
                        let mut s = 0u64;
                        for (i, ei) in e.iter().enumerate() {
                            s = (s + ei * images[i][j]) % orders[j];
                        }
                        s
                    })
                    .collect();
                if !seen.insert(img) {
                    return;
                }
            }
            found.push(images.iter().map(|im| (*im).clone()).collect());
            return;
        }
        'next: for cand in &candidates[level] {
            for prev in 0..level {
                if d.b_value(cand, images[prev]) != target_b[level][prev] {
                    continue 'next;
                }
            }
            images.push(cand);
            backtrack(
                level + 1,
                k,
                candidates,
                target_b,
                d,
                images,
                orders,
                elements,
                found,
            );
            images.pop();
        }
    }

    backtrack(
        0,
        k,
        &candidates,
        &target_b,
        d,
        &mut images,
        &orders,
        &elements,
        &mut found,
    );
    let _ = group_order;
    Ok((found.len() as u64, found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMat;

    fn l_n() -> Lattice {
        // U ⊕ ⟨−2⟩^4
        Lattice::from_rows(&[
            vec![0, 1, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 0, -2, 0, 0, 0],
            vec![0, 0, 0, -2, 0, 0],
            vec![0, 0, 0, 0, -2, 0],
            vec![0, 0, 0, 0, 0, -2],
        ])
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unimodular_lattice_has_trivial_group() {
        let u = Lattice::hyperbolic_plane();
        let d = u.discriminant_group();
        assert!(d.is_trivial());
        assert_eq!(d.order(), BigInt::one());
        let (order, _) = aut_discriminant_form(&d).unwrap();
        assert_eq!(order, 1);
    }

    #[test]
    fn u_plus_minus8_has_z8() {
        // Smith-form check: invariant factor (8).
        let l = Lattice::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -8]]).unwrap();
        let d = l.discriminant_group();
        assert_eq!(d.invariant_factors, vec![BigInt::from(8)]);
        // The generator is ±e₃/8 + L, with q = -1/8 or equivalent (depends on
        // sign of the lift); the orbit of values under generator scaling u·g,
        // gcd(u,8)=1, is {-1/8·u²} = {-1/8, -9/8, -25/8, -49/8} mod 2Z.
        let q = d.q_value(&[1]);
        let orbit = [rat(15, 8), rat(7, 8)];
        assert!(orbit.contains(&q), "unexpected q value {q}");
    }

    #[test]
    fn l_n_discriminant_form_and_automorphisms() {
        let d = l_n().discriminant_group();
        assert_eq!(d.invariant_factors, vec![BigInt::from(2); 4]);
        // Four generators, each with q = -1/2 mod 2Z (stored as 3/2), pairwise
        // orthogonal: exactly the classes e_i/2 of the four norm −2 vectors.
        for i in 0..4 {
            assert_eq!(d.form_values[(i, i)], rat(3, 2), "diagonal {i}");
            for j in 0..4 {
                if i != j {
                    assert_eq!(d.form_values[(i, j)], rat(0, 1));
                }
            }
        }
        // Exactly 4 of the 16 elements have q = -1/2: the natural generators.
        let weight1: Vec<_> = d
            .elements()
            .into_iter()
            .filter(|e| d.q_value(e) == rat(3, 2))
            .collect();
        assert_eq!(weight1.len(), 4);

        // Automorphism group: permutations of those four classes, order 24.
        let (order, elems) = aut_discriminant_form(&d).unwrap();
        assert_eq!(order, 24);
        assert_eq!(elems.len(), 24);
    }

    #[test]
    fn z8_form_automorphisms_by_unit_scaling() {
        // ⟨−8⟩ alone: A = Z/8, q(g) = -1/8. Units u with u² ≡ 1 mod 16 fix q:
        // u ∈ {1, 7, 9, 15} mod 16 → u ∈ {1, 7} mod 8 give -u²/8 ≡ -1/8 mod 2.
        let l = Lattice::diagonal(&[-8]).unwrap();
        let d = l.discriminant_group();
        assert_eq!(d.invariant_factors, vec![BigInt::from(8)]);
        let (order, _) = aut_discriminant_form(&d).unwrap();
        assert_eq!(order, 2);
    }

    #[test]
    fn size_cap_is_enforced() {
        let big = 1 << 17;
        let l = Lattice::new(IntMat::from_rows(&[vec![big]])).unwrap();
        let d = l.discriminant_group();
        assert!(matches!(
            aut_discriminant_form(&d),
            Err(LatticeError::SizeCap(_))
        ));
    }
}
