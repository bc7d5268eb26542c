//! Sufficient conditions for regularity read off from the `p`-adic prime
//! profile and from sampled Frobenius elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::primes::FrobeniusSample;
use crate::weil::is_ordinary;
use crate::weil::PadicPrimeProfile;
use crate::weil::WeilPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    HeightOne,
    HalfSlope,
    OrdinaryGalois,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionStatus {
    Holds,
    Fails,
    /// The required Frobenius element was observed.
    Verified,
    /// Sampling is consistent with the criterion but did not exhibit the element.
    HeuristicHolds,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub criterion: Criterion,
    pub status: CriterionStatus,
    /// Whether the outcome alone proves regularity.
    pub implies_regular: bool,
    /// Profile indices of the distinguished primes.
    pub primes: Vec<usize>,
    /// The prime `l` whose Frobenius exhibits the required element.
    pub witness_l: Option<u64>,
    pub detail: String,
}

impl Certificate {
    fn new(criterion: Criterion, status: CriterionStatus, detail: impl Into<String>) -> Self {
        Certificate {
            criterion,
            status,
            implies_regular: false,
            primes: Vec::new(),
            witness_l: None,
            detail: detail.into(),
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self.status, CriterionStatus::Holds | CriterionStatus::Verified)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// One slope-0 prime of degree 1, its conjugate of slope `m` and degree 1,
/// every other prime of slope `m/2`.
pub fn criterion_height_one(w: &WeilPolynomial, profile: &PadicPrimeProfile) -> Certificate {
    let m = w.weight() as i64;
    let half = rat(m, 2);
    let ps = &profile.primes;
    let low: Vec<usize> = (0..ps.len()).filter(|&i| ps[i].slope.is_zero()).collect();
    let fail = |d: String| Certificate::new(Criterion::HeightOne, CriterionStatus::Fails, d);
    let [v1] = low[..] else {
        return fail(format!("{} primes of slope 0", low.len()));
    };
    let v2 = ps[v1].iota_image;
    if ps[v1].degree != 1 || ps[v2].degree != 1 {
        return fail("slope-0 prime is not of degree 1".into());
    }
    if ps[v2].slope != rat(m, 1) {
        return fail("conjugate prime does not have slope m".into());
    }
    if let Some(i) = (0..ps.len()).find(|&i| i != v1 && i != v2 && ps[i].slope != half) {
        return fail(format!("prime {i} has slope {}", ps[i].slope));
    }
    let irreducible = w.factors().len() == 1;
    let mut c = Certificate::new(
        Criterion::HeightOne,
        CriterionStatus::Holds,
        if irreducible { "pattern holds" } else { "pattern holds on a reducible polynomial" },
    );
    c.implies_regular = irreducible;
    c.primes = vec![v1, v2];
    c
}

fn factor_is_real(f: &crate::arith::IntPoly, qm: &BigInt) -> bool {
    f.deg() == 1 || (f.deg() == 2 && f.coeff(1).is_zero() && f.coeff(0) == -qm)
}

/// Exactly one prime of slope `m/2`, of degree 2, fixed by the involution
/// on a factor without real roots; every other prime of slope 0 or `m`.
pub fn criterion_half_slope(w: &WeilPolynomial, profile: &PadicPrimeProfile) -> Certificate {
    let m = w.weight() as i64;
    let half = rat(m, 2);
    let ps = &profile.primes;
    let fail = |d: String| Certificate::new(Criterion::HalfSlope, CriterionStatus::Fails, d);
    let mid: Vec<usize> = (0..ps.len()).filter(|&i| ps[i].slope == half).collect();
    let [v1] = mid[..] else {
        return fail(format!("{} primes of slope m/2", mid.len()));
    };
    let lp = &ps[v1];
    if lp.degree != 2 {
        return fail(format!("slope m/2 prime has degree {}", lp.degree));
    }
    if lp.iota_image != v1 {
        return fail("slope m/2 prime is not stable under the involution".into());
    }
    if factor_is_real(&w.factors()[lp.factor].0, &w.qm()) {
        return fail("slope m/2 prime lies on a real factor".into());
    }
    let top = rat(m, 1);
    if let Some(i) = (0..ps.len()).find(|&i| i != v1 && !ps[i].slope.is_zero() && ps[i].slope != top) {
        return fail(format!("prime {i} has slope {}", ps[i].slope));
    }
    let mut c = Certificate::new(Criterion::HalfSlope, CriterionStatus::Holds, "pattern holds");
    c.implies_regular = w.factors().len() == 1;
    c.primes = vec![v1];
    c
}

/// Ordinary and irreducible, and for one (hence, by transitivity, every)
/// conjugate pair some Galois element fixes the pair and acts as the
/// involution on the remaining roots.
pub fn criterion_ordinary_galois(w: &WeilPolynomial, evidence: &[FrobeniusSample]) -> Certificate {
    let na = |d: &str| Certificate::new(Criterion::OrdinaryGalois, CriterionStatus::NotApplicable, d);
    if !is_ordinary(w).is_ordinary() {
        return na("not ordinary");
    }
    if w.factors().len() != 1 {
        return na("squarefree part is reducible");
    }
    let g = w.squarefree_degree() / 2;
    if g == 1 {
        let mut c = Certificate::new(Criterion::OrdinaryGalois, CriterionStatus::Verified, "g = 1");
        c.implies_regular = true;
        return c;
    }
    let tested: Vec<&FrobeniusSample> = evidence.iter().filter(|s| s.skipped.is_none()).collect();
    if let Some(s) = tested.iter().find(|s| s.fixes_one_pair) {
        let mut c = Certificate::new(
            Criterion::OrdinaryGalois,
            CriterionStatus::Verified,
            format!("Frobenius at {} has the required shape", s.l),
        );
        c.implies_regular = true;
        c.witness_l = Some(s.l);
        return c;
    }
    if tested.iter().all(|s| s.is_semiregular()) {
        return Certificate::new(
            Criterion::OrdinaryGalois,
            CriterionStatus::Fails,
            format!("all {} sampled Frobenius elements act semiregularly", tested.len()),
        );
    }
    Certificate::new(
        Criterion::OrdinaryGalois,
        CriterionStatus::HeuristicHolds,
        format!("required element not among {} samples", tested.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::primes::frobenius_evidence;
    use crate::weil::prime_profile;
    use crate::weil::validate;

    fn w(c: &[i64], q: u64, m: u32) -> WeilPolynomial {
        validate(&IntPoly::from_i64(c), q, m).unwrap()
    }

    #[test]
    fn height_one() {
        let e = w(&[2, -1, 1], 2, 1);
        let c = criterion_height_one(&e, &prime_profile(&e).unwrap());
        assert!(c.holds() && c.implies_regular);
        let s = w(&[3, 0, 1], 3, 1);
        assert_eq!(criterion_height_one(&s, &prime_profile(&s).unwrap()).status, CriterionStatus::Fails);
        // ordinary elliptic times a supersingular one: pattern holds, no implication
        let r = w(&[4, -2, 4, -1, 1], 2, 1);
        let c = criterion_height_one(&r, &prime_profile(&r).unwrap());
        assert!(c.holds() && !c.implies_regular);
    }

    #[test]
    fn half_slope() {
        for p in [2i64, 3, 5, 7] {
            let s = w(&[p, 0, 1], p as u64, 1);
            assert!(criterion_half_slope(&s, &prime_profile(&s).unwrap()).holds());
        }
        let e = w(&[2, -1, 1], 2, 1);
        assert!(!criterion_half_slope(&e, &prime_profile(&e).unwrap()).holds());
        let r = w(&[-3, 0, 1], 3, 1);
        assert!(!criterion_half_slope(&r, &prime_profile(&r).unwrap()).holds());
    }

    #[test]
    fn ordinary_galois() {
        let e = w(&[2, -1, 1], 2, 1);
        assert_eq!(criterion_ordinary_galois(&e, &[]).status, CriterionStatus::Verified);
        // dihedral quartic: the shape shows up among small primes
        let d = w(&[9, 3, 1, 1, 1], 3, 1);
        let c = criterion_ordinary_galois(&d, &frobenius_evidence(&d, 500));
        assert_eq!(c.status, CriterionStatus::Verified);
        // biquadratic and cyclic quartics: every Frobenius acts semiregularly
        for (c, q) in [(vec![4, 0, 1, 0, 1], 2), (vec![9, -9, 5, -3, 1], 3)] {
            let a = w(&c, q, 1);
            assert_eq!(criterion_ordinary_galois(&a, &frobenius_evidence(&a, 500)).status, CriterionStatus::Fails);
        }
        // (t^2 - t + 2)(t^2 + t + 2) is reducible
        let r = w(&[4, 0, 3, 0, 1], 2, 1);
        assert_eq!(criterion_ordinary_galois(&r, &[]).status, CriterionStatus::NotApplicable);
    }
}
