//! Whether `π / q^{m/2}` generates the Frobenius torus.
//!
//! A character `n` of the torus evaluates to 1 on `π / q^{m/2}` exactly when
//! `n` lies in the `zeta = 1` sublattice `K` of the relation lattice. The
//! pairing relations `P` are always in `K`, and regularity is `K = P`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::criteria::{
    criterion_half_slope, criterion_height_one, criterion_ordinary_galois, Certificate, Criterion, CriterionStatus,
};
use super::relation::{relation_lattice, Relation, RelationConfig, RelationLattice};
use crate::arith::matrix::{hnf, int_matrix};
use crate::primes::frobenius_evidence;
use crate::weil::WeilPolynomial;
use crate::weil::{prime_profile, PadicPrimeProfile, ProfileError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RegularityReason {
    LatticeTrivial,
    HeightOne,
    HalfSlope,
    OrdinaryGalois,
    /// A character of finite order that is trivial on `π / q^{m/2}`.
    TorsionObstruction {
        character: Vec<i64>,
    },
    /// A relation among the angles of the eigenvalues, with its root of unity.
    ExtraRelation {
        relation: Relation,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictFlag {
    /// The half-slope pattern holds although the lattice has an extra relation.
    HalfSlopeWithTorsion,
    /// The height-one pattern holds on a reducible polynomial.
    HeightOneReducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub reason: RegularityReason,
    pub angle_rank: usize,
    /// Agreement of the lattice with a criterion that decided the verdict,
    /// when the lattice search is complete.
    pub lattice_agrees: Option<bool>,
    pub flags: Vec<VerdictFlag>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RegularityError {
    #[error("relation search incomplete at height {height} and {bits} bits, and no criterion applies")]
    Inconclusive { height: u32, bits: u64, angle_rank_upper_bound: usize },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Everything the verdict is computed from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityEvidence {
    pub lattice: RelationLattice,
    pub profile: PadicPrimeProfile,
    pub criteria: Vec<Certificate>,
}

/// Number of primes sampled for Frobenius shapes.
pub const GALOIS_SAMPLE: usize = 500;

pub fn gather_evidence(w: &WeilPolynomial, cfg: &RelationConfig) -> Result<RegularityEvidence, ProfileError> {
    let profile = prime_profile(w)?;
    let lattice = relation_lattice(w, cfg);
    let h1 = criterion_height_one(w, &profile);
    let hs = criterion_half_slope(w, &profile);
    let samples = if w.factors().len() == 1 && w.squarefree_degree() > 2 {
        frobenius_evidence(w, GALOIS_SAMPLE)
    } else {
        Vec::new()
    };
    let og = criterion_ordinary_galois(w, &samples);
    Ok(RegularityEvidence { lattice, profile, criteria: vec![h1, hs, og] })
}

/// The lattice's own verdict: `Some(witness)` for a certified obstruction,
/// `None` when `K = P`.
pub fn lattice_obstruction(l: &RelationLattice) -> Option<RegularityReason> {
    if l.angle_rank < l.cm_pairs.len() {
        return Some(RegularityReason::ExtraRelation { relation: l.basis[0].clone() });
    }
    let p = hnf(&int_matrix(&l.pairing_basis));
    let k = hnf(&int_matrix(&l.trivial_basis));
    if k == p {
        return None;
    }
    let pairing_only = RelationLattice {
        basis: l
            .pairing_basis
            .iter()
            .map(|e| Relation { exponents: e.clone(), zeta: super::relation::RootOfUnity::one() })
            .collect(),
        ..l.clone()
    };
    let chi = l.trivial_basis.iter().find(|n| !pairing_only.contains(n)).expect("K strictly contains P");
    Some(RegularityReason::TorsionObstruction { character: chi.clone() })
}

pub fn decide(ev: &RegularityEvidence) -> Result<RegularityVerdict, RegularityError> {
    let l = &ev.lattice;
    let find = |c: Criterion| ev.criteria.iter().find(|x| x.criterion == c);
    let obstruction = lattice_obstruction(l);
    let mut flags = Vec::new();
    let half = find(Criterion::HalfSlope).filter(|c| c.holds());
    if half.is_some() && matches!(obstruction, Some(RegularityReason::ExtraRelation { .. })) {
        flags.push(VerdictFlag::HalfSlopeWithTorsion);
    }
    if find(Criterion::HeightOne).is_some_and(|c| c.holds() && !c.implies_regular) {
        flags.push(VerdictFlag::HeightOneReducible);
    }
    let agrees = l.complete.then_some(obstruction.is_none());
    let by_criterion = |reason| RegularityVerdict {
        regular: true,
        reason,
        angle_rank: l.angle_rank,
        lattice_agrees: agrees,
        flags: flags.clone(),
    };

    if find(Criterion::HeightOne).is_some_and(|c| c.implies_regular) {
        return Ok(by_criterion(RegularityReason::HeightOne));
    }
    if find(Criterion::OrdinaryGalois).is_some_and(|c| c.status == CriterionStatus::Verified) {
        return Ok(by_criterion(RegularityReason::OrdinaryGalois));
    }
    if let Some(reason) = obstruction {
        return Ok(RegularityVerdict { regular: false, reason, angle_rank: l.angle_rank, lattice_agrees: None, flags });
    }
    if l.complete {
        return Ok(RegularityVerdict {
            regular: true,
            reason: RegularityReason::LatticeTrivial,
            angle_rank: l.angle_rank,
            lattice_agrees: None,
            flags,
        });
    }
    if half.is_some_and(|c| c.implies_regular) {
        return Ok(by_criterion(RegularityReason::HalfSlope));
    }
    Err(RegularityError::Inconclusive {
        height: l.height_bound,
        bits: l.precision_bits,
        angle_rank_upper_bound: l.angle_rank,
    })
}

pub fn regularity(w: &WeilPolynomial) -> Result<RegularityVerdict, RegularityError> {
    decide(&gather_evidence(w, &RelationConfig::default())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::weil::validate;

    fn verdict(c: &[i64], q: u64) -> RegularityVerdict {
        regularity(&validate(&IntPoly::from_i64(c), q, 1).unwrap()).unwrap()
    }

    #[test]
    fn elliptic_examples() {
        let v = verdict(&[2, -1, 1], 2);
        assert!(v.regular);
        assert_eq!(v.angle_rank, 1);
        assert_eq!(v.lattice_agrees, Some(true));
        for p in [2i64, 3, 5, 7] {
            let v = verdict(&[p, 0, 1], p as u64);
            assert!(!v.regular);
            assert_eq!(v.angle_rank, 0);
            let RegularityReason::ExtraRelation { relation } = &v.reason else { panic!("{v:?}") };
            assert_eq!(relation.zeta.order, 4);
            assert_eq!(v.flags, vec![VerdictFlag::HalfSlopeWithTorsion]);
        }
    }

    #[test]
    fn totally_real() {
        // roots ±√3: the character e_1 takes the value 1
        let v = verdict(&[-3, 0, 1], 3);
        assert!(!v.regular);
        let RegularityReason::TorsionObstruction { character } = &v.reason else { panic!("{v:?}") };
        assert_eq!(character.iter().map(|x| x.abs()).sum::<i64>(), 1);
        // t - 2 over q = 4: π/2 = 1, so e_1 is trivial on it
        let v = regularity(&validate(&IntPoly::from_i64(&[-2, 1]), 4, 1).unwrap()).unwrap();
        assert!(!v.regular);
        // t + 2 over q = 4: π/2 = -1 and e_1 is nontrivial; P = 2Z
        let v = regularity(&validate(&IntPoly::from_i64(&[2, 1]), 4, 1).unwrap()).unwrap();
        assert!(v.regular);
    }

    #[test]
    fn reducible_height_one_pattern() {
        // (t^2 - t + 2)(t^2 + 2): the supersingular factor is torsion
        let v = verdict(&[4, -2, 4, -1, 1], 2);
        assert!(!v.regular);
        assert!(v.flags.contains(&VerdictFlag::HeightOneReducible));
    }
}
