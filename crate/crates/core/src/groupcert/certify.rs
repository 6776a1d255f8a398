//! Finite-index certification: coset enumeration of a reflection subgroup
//! inside an isometry group, driven by a chamber-descent membership oracle,
//! with replayable certificates.

use super::{GenSet, GroupCertError};
use crate::exact::{FlexInt, IntMat};
use crate::reflection::{chamber_descent, AmpleVector, DescentOutcome};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Verdict of a membership oracle. `Member` carries a word in the wall
/// reflections composing to the tested isometry; `Undecided` means the
/// procedure could not settle the question (never a wrong answer).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(Vec<usize>),
    NonMember,
    Undecided,
}

/// Membership oracle for the group `R` generated by the reflections in a
/// fixed set of walls, backed by [`chamber_descent`].
///
/// In strict mode (from [`ChamberOracle::new`]) a descent that halts at a
/// chamber point different from the base point is reported as
/// [`Membership::Undecided`]: the walls are not known to cut out a
/// fundamental chamber of `R`, so the halt is not evidence either way.
///
/// [`ChamberOracle::with_verified_chamber`] first proves that the walls do
/// cut out a fundamental chamber, by checking every pair of walls `wᵢ, wⱼ`
/// satisfies `s = wᵢ·wⱼ ≥ 0` together with one of
///
/// * `s² ≥ (wᵢ²)(wⱼ²)` — the mirrors do not meet inside the cone, or
/// * `4s² ∈ {0, 1, 2, 3}·(wᵢ²)(wⱼ²)` — the mirrors meet at an angle
///   `π/2, π/3, π/4, π/6`, the only angles an integral lattice admits.
///
/// Under this condition the chamber `D = {x : x·wᵢ ≥ 0}` is a fundamental
/// domain for `R` (the classical polyhedron criterion for hyperbolic
/// reflection groups: the dihedral angles are integer submultiples of π, so
/// the reflected copies of `D` tile the cone without overlap, and no mirror
/// of `R` crosses the interior of `D`). Every `R`-translate of an interior
/// point then stays clear of all mirrors, so a descent halting at any
/// chamber point other than the base point — interior or boundary — proves
/// the tested isometry is not in `R`, and `Stuck` is soundly reported as
/// [`Membership::NonMember`].
#[derive(Clone, Debug)]
pub struct ChamberOracle {
    gram: IntMat,
    walls: Vec<Vec<BigInt>>,
    ample: AmpleVector,
    step_cap: usize,
    decide_stuck: bool,
}

impl ChamberOracle {
    /// Strict oracle: descent halts that decide nothing are `Undecided`.
    pub fn new(gram: IntMat, walls: Vec<Vec<BigInt>>, ample: AmpleVector, step_cap: usize) -> Self {
        ChamberOracle {
            gram,
            walls,
            ample,
            step_cap,
            decide_stuck: false,
        }
    }

    /// Oracle with a verified fundamental chamber, entitled to decide
    /// `Stuck` as `NonMember`; fails if the walls do not satisfy the
    /// pairwise chamber condition.
    pub fn with_verified_chamber(
        gram: IntMat,
        walls: Vec<Vec<BigInt>>,
        ample: AmpleVector,
        step_cap: usize,
    ) -> Result<Self, GroupCertError> {
        if !Self::chamber_condition_holds(&gram, &walls) {
            return Err(GroupCertError::Invalid(
                "walls do not satisfy the pairwise fundamental-chamber condition".into(),
            ));
        }
        Ok(ChamberOracle {
            gram,
            walls,
            ample,
            step_cap,
            decide_stuck: true,
        })
    }

    /// The pairwise condition making the wall chamber a fundamental domain
    /// of its reflection group: every pair of walls either does not meet
    /// inside the cone or meets at a crystallographic angle π/2, π/3, π/4
    /// or π/6.
    pub fn chamber_condition_holds(gram: &IntMat, walls: &[Vec<BigInt>]) -> bool {
        let inner = |a: &[BigInt], b: &[BigInt]| -> BigInt {
            let gb = gram.mul_vec(b);
            a.iter().zip(gb.iter()).map(|(x, y)| x * y).sum()
        };
        for i in 0..walls.len() {
            for j in i + 1..walls.len() {
                let s = inner(&walls[i], &walls[j]);
                if s < BigInt::ZERO {
                    return false;
                }
                let b = inner(&walls[i], &walls[i]) * inner(&walls[j], &walls[j]);
                let s2 = &s * &s;
                let four_s2 = BigInt::from(4) * &s2;
                let crystallographic = (0..=3).any(|k| four_s2 == BigInt::from(k) * &b);
                if s2 < b && !crystallographic {
                    return false;
                }
            }
        }
        true
    }

    pub fn walls(&self) -> &[Vec<BigInt>] {
        &self.walls
    }

    /// Tests membership of `g` in the reflection group of the walls.
    pub fn test(&self, g: &IntMat) -> Result<Membership, GroupCertError> {
        match chamber_descent(&self.gram, g, &self.ample, &self.walls, self.step_cap)? {
            DescentOutcome::Member(word) => Ok(Membership::Member(word)),
            DescentOutcome::NonMember => Ok(Membership::NonMember),
            DescentOutcome::Stuck(_) => Ok(if self.decide_stuck {
                Membership::NonMember
            } else {
                Membership::Undecided
            }),
        }
    }
}

/// A verified enumeration of the cosets `R·x` of a reflection subgroup `R`
/// inside the group generated by a finite set of isometries: coset
/// representatives (the first is the identity), the right-multiplication
/// action of each generator on the cosets, and a hash of the oracle
/// transcript that produced it. Closure of the table under every generator
/// is what certifies the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteIndexCertificate {
    pub index: usize,
    pub representatives: Vec<IntMat>,
    pub action: Vec<Vec<usize>>,
    pub transcript_hash: String,
}

/// Result of a certification run: a certificate, or an honest account of
/// why none was produced. `Inconclusive` is never a disproof.
#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(FiniteIndexCertificate),
    Inconclusive(String),
}

fn fnv1a64(lines: &[String]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for line in lines {
        for &b in line.as_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= u64::from(b'\n');
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Enumerates the cosets of the oracle's reflection group `R` within the
/// group generated by `g`, breadth-first from the identity: each product
/// `rep·gen` is located among the known cosets by testing
/// `rep·gen·(repₕ)⁻¹ ∈ R` in discovery order, and opens a new coset when
/// every test returns `NonMember`. An `Undecided` verdict or more than
/// `coset_cap` cosets ends the run with `Inconclusive`; a closed table is
/// returned as a certificate with the transcript hash of every oracle call.
pub fn certify_finite_quotient(
    g: &GenSet,
    oracle: &ChamberOracle,
    coset_cap: usize,
) -> Result<CertifyOutcome, GroupCertError> {
    let n = g.lattice.rank();
    let mut reps: Vec<IntMat> = vec![IntMat::identity(n)];
    let mut inverses: Vec<IntMat> = vec![IntMat::identity(n)];
    let mut action: Vec<Vec<usize>> = Vec::new();
    let mut transcript: Vec<String> = Vec::new();

    let mut r = 0;
    while r < reps.len() {
        let mut row = Vec::with_capacity(g.len());
        for (gi, gen) in g.matrices().enumerate() {
            let t = reps[r].mul_mat(gen);
            let mut landed = None;
            for h in 0..reps.len() {
                let candidate = t.mul_mat(&inverses[h]);
                match oracle.test(&candidate)? {
                    Membership::Member(word) => {
                        transcript.push(format!("{r}.{gi}>{h}=member[{}]", word.len()));
                        landed = Some(h);
                        break;
                    }
                    Membership::NonMember => {
                        transcript.push(format!("{r}.{gi}>{h}=nonmember"));
                    }
                    Membership::Undecided => {
                        return Ok(CertifyOutcome::Inconclusive(format!(
                            "membership undecided at representative {r}, generator {gi}, \
                             against coset {h}"
                        )));
                    }
                }
            }
            let h = match landed {
                Some(h) => h,
                None => {
                    if reps.len() >= coset_cap {
                        return Ok(CertifyOutcome::Inconclusive(format!(
                            "coset cap {coset_cap} exceeded"
                        )));
                    }
                    let v = reps.len();
                    transcript.push(format!("{r}.{gi}>new={v}"));
                    inverses.push(t.inverse_unimodular());
                    reps.push(t);
                    v
                }
            };
            row.push(h);
        }
        action.push(row);
        r += 1;
    }

    Ok(CertifyOutcome::Certified(FiniteIndexCertificate {
        index: reps.len(),
        representatives: reps,
        action,
        transcript_hash: fnv1a64(&transcript),
    }))
}

/// Re-verifies a certificate from scratch against the generators and the
/// oracle: representatives must be isometries starting at the identity and
/// lie in pairwise distinct cosets, and every product `rep·gen` must land
/// in the coset the action table claims. The transcript hash identifies the
/// producing run but plays no role here — correctness is re-derived.
pub fn verify_certificate(
    cert: &FiniteIndexCertificate,
    g: &GenSet,
    oracle: &ChamberOracle,
) -> Result<(), GroupCertError> {
    let n = g.lattice.rank();
    let k = cert.representatives.len();
    if k == 0 || cert.index != k || cert.action.len() != k {
        return Err(GroupCertError::Invalid(
            "certificate shape is inconsistent".into(),
        ));
    }
    if !cert.representatives[0].is_identity() {
        return Err(GroupCertError::Invalid(
            "first representative must be the identity".into(),
        ));
    }
    for m in &cert.representatives {
        if m.rows() != n || m.cols() != n {
            return Err(GroupCertError::Invalid(
                "representative has the wrong dimensions".into(),
            ));
        }
        g.lattice.isometry(m.clone())?;
    }
    let inverses: Vec<IntMat> = cert
        .representatives
        .iter()
        .map(IntMat::inverse_unimodular)
        .collect();

    for i in 0..k {
        for j in i + 1..k {
            let q = cert.representatives[i].mul_mat(&inverses[j]);
            match oracle.test(&q)? {
                Membership::NonMember => {}
                Membership::Member(_) => {
                    return Err(GroupCertError::Invalid(format!(
                        "representatives {i} and {j} lie in the same coset"
                    )));
                }
                Membership::Undecided => {
                    return Err(GroupCertError::Invalid(format!(
                        "cannot verify distinctness of representatives {i} and {j}"
                    )));
                }
            }
        }
    }

    for (r, row) in cert.action.iter().enumerate() {
        if row.len() != g.len() {
            return Err(GroupCertError::Invalid(format!(
                "action row {r} has the wrong length"
            )));
        }
        for (gi, gen) in g.matrices().enumerate() {
            let h = row[gi];
            if h >= k {
                return Err(GroupCertError::Invalid(format!(
                    "action entry ({r}, {gi}) out of range"
                )));
            }
            let q = cert.representatives[r].mul_mat(gen).mul_mat(&inverses[h]);
            match oracle.test(&q)? {
                Membership::Member(_) => {}
                Membership::NonMember => {
                    return Err(GroupCertError::Invalid(format!(
                        "coset table violated at representative {r}, generator {gi}"
                    )));
                }
                Membership::Undecided => {
                    return Err(GroupCertError::Invalid(format!(
                        "cannot verify the coset table at representative {r}, generator {gi}"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    schema: String,
    index: usize,
    representatives: Vec<Vec<Vec<FlexInt>>>,
    action: Vec<Vec<usize>>,
    transcript_hash: String,
}

const CERT_SCHEMA: &str = "finite-index-certificate/1";

impl FiniteIndexCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let reps = self
            .representatives
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| m.row(i).iter().map(FlexInt::from).collect())
                    .collect()
            })
            .collect();
        serde_json::to_value(CertificateJson {
            schema: CERT_SCHEMA.into(),
            index: self.index,
            representatives: reps,
            action: self.action.clone(),
            transcript_hash: self.transcript_hash.clone(),
        })
        .expect("certificate serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, GroupCertError> {
        let c: CertificateJson = serde_json::from_value(v.clone())
            .map_err(|e| GroupCertError::Invalid(format!("bad certificate JSON: {e}")))?;
        if c.schema != CERT_SCHEMA {
            return Err(GroupCertError::Invalid(format!(
                "unsupported certificate schema '{}'",
                c.schema
            )));
        }
        let mut reps = Vec::with_capacity(c.representatives.len());
        for rows in &c.representatives {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(GroupCertError::Invalid(
                    "representative matrix is not square".into(),
                ));
            }
            let mut m = IntMat::zero(n, n);
            for (i, row) in rows.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    m[(i, j)] = x
                        .parse()
                        .map_err(GroupCertError::Invalid)?;
                }
            }
            reps.push(m);
        }
        Ok(FiniteIndexCertificate {
            index: c.index,
            representatives: reps,
            action: c.action,
            transcript_hash: c.transcript_hash,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn gram() -> IntMat {
        IntMat::from_rows(&[vec![10, 0], vec![0, -4]])
    }

    fn walls() -> Vec<Vec<BigInt>> {
        vec![
            vec![BigInt::ZERO, BigInt::from(1)],
            vec![BigInt::from(12), BigInt::from(-19)],
        ]
    }

    fn ample() -> AmpleVector {
        AmpleVector::new(&gram(), vec![BigInt::from(1), BigInt::from(-1)], &walls()).unwrap()
    }

    fn pell() -> IntMat {
        IntMat::from_rows(&[vec![19, 12], vec![30, 19]])
    }

    fn symmetry_gens() -> GenSet {
        let l = Lattice::new(gram()).unwrap();
        GenSet::new(
            l,
            vec![
                IntMat::from_rows(&[vec![1, 0], vec![0, -1]]),
                IntMat::from_rows(&[vec![-1, 0], vec![0, 1]]),
                pell(),
            ],
            vec!["sign(e2)".into(), "sign(e1)".into(), "pell".into()],
        )
        .unwrap()
    }

    fn strict_oracle() -> ChamberOracle {
        ChamberOracle::new(gram(), walls(), ample(), 64)
    }

    fn verified_oracle() -> ChamberOracle {
        ChamberOracle::with_verified_chamber(gram(), walls(), ample(), 64).unwrap()
    }

    #[test]
    fn pinned_wall_pair_satisfies_the_chamber_condition() {
        assert!(ChamberOracle::chamber_condition_holds(&gram(), &walls()));
    }

    #[test]
    fn negative_pairings_fail_the_chamber_condition() {
        let w = vec![
            vec![BigInt::ZERO, BigInt::from(1)],
            vec![BigInt::from(-12), BigInt::from(19)],
        ];
        assert!(!ChamberOracle::chamber_condition_holds(&gram(), &w));
    }

    #[test]
    fn non_crystallographic_angles_fail_the_chamber_condition() {
        // Mirrors meeting with 4cos²θ = 16/5: not an integer submultiple
        // of π, so reflected chambers would overlap.
        let g = IntMat::from_rows(&[vec![2, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
        let w = vec![
            vec![BigInt::ZERO, BigInt::from(1), BigInt::ZERO],
            vec![BigInt::ZERO, BigInt::from(-2), BigInt::from(1)],
        ];
        assert!(!ChamberOracle::chamber_condition_holds(&g, &w));
        let y = AmpleVector::new(
            &g,
            vec![BigInt::from(3), BigInt::from(-1), BigInt::from(-3)],
            &w,
        )
        .unwrap();
        assert!(matches!(
            ChamberOracle::with_verified_chamber(g, w, y, 16),
            Err(GroupCertError::Invalid(_))
        ));
    }

    #[test]
    fn strict_oracle_reports_stuck_as_undecided() {
        assert_eq!(strict_oracle().test(&pell()).unwrap(), Membership::Undecided);
    }

    #[test]
    fn verified_oracle_decides_stuck_as_nonmember() {
        assert_eq!(
            verified_oracle().test(&pell()).unwrap(),
            Membership::NonMember
        );
    }

    #[test]
    fn reflections_are_members_under_both_oracles() {
        let refl = IntMat::from_rows(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(
            strict_oracle().test(&refl).unwrap(),
            Membership::Member(vec![0])
        );
        assert_eq!(
            verified_oracle().test(&refl).unwrap(),
            Membership::Member(vec![0])
        );
    }

    #[test]
    fn pell_symmetry_group_is_certified_with_index_four() {
        let out = certify_finite_quotient(&symmetry_gens(), &verified_oracle(), 100).unwrap();
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            CertifyOutcome::Inconclusive(why) => panic!("expected certificate, got: {why}"),
        };
        assert_eq!(cert.index, 4);
        let expected_reps = vec![
            IntMat::identity(2),
            IntMat::from_rows(&[vec![-1, 0], vec![0, 1]]),
            pell(),
            IntMat::from_rows(&[vec![-19, -12], vec![30, 19]]),
        ];
        assert_eq!(cert.representatives, expected_reps);
        assert_eq!(
            cert.action,
            vec![vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0], vec![3, 2, 1]]
        );
        verify_certificate(&cert, &symmetry_gens(), &verified_oracle()).unwrap();
    }

    #[test]
    fn strict_oracle_cannot_certify_the_symmetry_group() {
        let out = certify_finite_quotient(&symmetry_gens(), &strict_oracle(), 100).unwrap();
        assert!(matches!(out, CertifyOutcome::Inconclusive(_)));
    }

    #[test]
    fn reflection_generators_certify_with_index_one() {
        let l = Lattice::new(gram()).unwrap();
        let a2 = IntMat::from_rows(&[vec![721, 456], vec![-1140, -721]]);
        let g = GenSet::new(
            l,
            vec![IntMat::from_rows(&[vec![1, 0], vec![0, -1]]), a2],
            vec!["w0".into(), "w1".into()],
        )
        .unwrap();
        let out = certify_finite_quotient(&g, &strict_oracle(), 10).unwrap();
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            CertifyOutcome::Inconclusive(why) => panic!("expected certificate, got: {why}"),
        };
        assert_eq!(cert.index, 1);
        assert_eq!(cert.representatives, vec![IntMat::identity(2)]);
        assert_eq!(cert.action, vec![vec![0, 0]]);
        verify_certificate(&cert, &g, &strict_oracle()).unwrap();
    }

    #[test]
    fn coset_cap_yields_inconclusive() {
        let out = certify_finite_quotient(&symmetry_gens(), &verified_oracle(), 2).unwrap();
        match out {
            CertifyOutcome::Inconclusive(why) => assert!(why.contains("cap")),
            CertifyOutcome::Certified(_) => panic!("cap should have stopped the run"),
        }
    }

    #[test]
    fn certification_is_deterministic() {
        let a = certify_finite_quotient(&symmetry_gens(), &verified_oracle(), 100).unwrap();
        let b = certify_finite_quotient(&symmetry_gens(), &verified_oracle(), 100).unwrap();
        match (a, b) {
            (CertifyOutcome::Certified(x), CertifyOutcome::Certified(y)) => assert_eq!(x, y),
            _ => panic!("both runs should certify"),
        }
    }

    #[test]
    fn certificates_roundtrip_through_json() {
        let out = certify_finite_quotient(&symmetry_gens(), &verified_oracle(), 100).unwrap();
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            _ => panic!("expected certificate"),
        };
        let v = cert.to_json();
        assert_eq!(v["schema"], "finite-index-certificate/1");
        let back = FiniteIndexCertificate::from_json(&v).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let out = certify_finite_quotient(&symmetry_gens(), &verified_oracle(), 100).unwrap();
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            _ => panic!("expected certificate"),
        };

        let mut wrong_action = cert.clone();
        wrong_action.action[0][0] = 1;
        assert!(verify_certificate(&wrong_action, &symmetry_gens(), &verified_oracle()).is_err());

        let mut duplicate_coset = cert.clone();
        duplicate_coset.representatives[1] = IntMat::from_rows(&[vec![1, 0], vec![0, -1]]);
        assert!(
            verify_certificate(&duplicate_coset, &symmetry_gens(), &verified_oracle()).is_err()
        );

        let mut bad_shape = cert;
        bad_shape.index = 5;
        assert!(verify_certificate(&bad_shape, &symmetry_gens(), &verified_oracle()).is_err());
    }
}
