//! Primes `l` for which the root-pairing involution lies in the cyclic group
//! generated by the Frobenius permutation of the roots modulo `l`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::factor::reduce_mod_p;
use crate::arith::field::{is_prime_u64, mulmod, ExtField, FieldCtx, PrimeField};
use crate::arith::fpoly;
use crate::weil::WeilPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkipReason {
    /// `l` divides the discriminant of the squarefree part.
    Ramified,
    /// `l` is the characteristic of the base field.
    EqualsP,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSample {
    pub l: u64,
    /// Degrees of the irreducible factors of the squarefree part modulo `l`, sorted.
    pub factor_degrees: Vec<usize>,
    pub in_px: bool,
    /// Smallest `j` with `r^(l^j) = q^m / r` for every root `r`.
    pub power: Option<u64>,
    /// Frobenius fixes exactly one pair `{r, q^m/r}` with `r != q^m/r` and
    /// acts as `r -> q^m/r` on every other root.
    pub fixes_one_pair: bool,
    pub skipped: Option<SkipReason>,
}

impl FrobeniusSample {
    fn skipped(l: u64, reason: SkipReason) -> Self {
        FrobeniusSample {
            l,
            factor_degrees: Vec::new(),
            in_px: false,
            power: None,
            fixes_one_pair: false,
            skipped: Some(reason),
        }
    }

    /// Every cycle of Frobenius on the roots has the same length.
    pub fn is_semiregular(&self) -> bool {
        self.factor_degrees.windows(2).all(|w| w[0] == w[1])
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// Smallest `j` with `target = phi^j`, if any.
pub fn power_index(phi: &[usize], target: &[usize]) -> Option<usize> {
    let id: Vec<usize> = (0..phi.len()).collect();
    let mut cur = id.clone();
    let mut j = 0;
    loop {
        if cur == target {
            return Some(j);
        }
        cur = compose(phi, &cur);
        j += 1;
        if cur == id {
            return None;
        }
    }
}

fn seeded_rng(l: u64, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ l.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Factors of the squarefree part modulo `l`, or the reason `l` is skipped.
fn factors_mod(w: &WeilPolynomial, l: u64, seed: u64) -> Result<(PrimeField, Vec<Vec<u64>>, u64), SkipReason> {
    if l == w.p() {
        return Err(SkipReason::EqualsP);
    }
    let f = w.squarefree_part();
    let base = PrimeField::new(l);
    let fl = reduce_mod_p(&f, l);
    if fl.len() != f.deg() + 1 || !fpoly::is_squarefree(&base, &fl) {
        return Err(SkipReason::Ramified);
    }
    let factors = fpoly::factor_squarefree(&base, &fl, &mut seeded_rng(l, seed));
    let qm = w.qm().mod_floor(&BigInt::from(l)).to_u64().unwrap();
    Ok((base, factors, qm))
}

/// Solve `j = r_i mod m_i`; `None` if the congruences conflict.
fn crt(congruences: &[(u64, u64)]) -> Option<(u64, u64)> {
    let (mut r, mut m) = (0u128, 1u128);
    for &(ri, mi) in congruences {
        let (ri, mi) = (ri as u128, mi as u128);
        let g = m.gcd(&mi);
        if (ri as i128 - r as i128).rem_euclid(g as i128) != 0 {
            return None;
        }
        // step r by multiples of m until it matches mod mi
        let l = m / g * mi;
        let mut t = r;
        while t % mi != ri % mi {
            t += m;
        }
        r = t % l;
        m = l;
    }
    Some((r as u64, m as u64))
}

pub fn is_in_px(w: &WeilPolynomial, l: u64) -> FrobeniusSample {
    assert!(is_prime_u64(l), "l must be prime");
    let (base, factors, qm) = match factors_mod(w, l, 0) {
        Ok(x) => x,
        Err(r) => return FrobeniusSample::skipped(l, r),
    };
    let lb = BigUint::from(l);
    let mut degrees: Vec<usize> = factors.iter().map(|h| h.len() - 1).collect();
    degrees.sort();

    // for each factor h with root x: the j mod deg(h) with x^(l^j) = qm / x, if any
    let mut congruences = Vec::new();
    let mut stable = true;
    for h in &factors {
        let k = h.len() - 1;
        let x = vec![0, 1];
        let (_, s, _) = fpoly::ext_gcd(&base, &x, h);
        let target = fpoly::rem(&base, &fpoly::scale(&base, &s, &qm), h);
        let mut y = fpoly::rem(&base, &x, h);
        let mut hit = None;
        for j in 0..k {
            if y == target {
                hit = Some(j as u64);
                break;
            }
            y = fpoly::powmod(&base, &y, &lb, h);
        }
        match hit {
            Some(j) => congruences.push((j, k as u64)),
            None => {
                stable = false;
                break;
            }
        }
    }
    let power = if stable { crt(&congruences).map(|(r, _)| r) } else { None };

    let linear_roots: Vec<u64> = factors.iter().filter(|h| h.len() == 2).map(|h| (l - h[0]) % l).collect();
    let fixes_one_pair = linear_roots.len() == 2
        && mulmod(linear_roots[0], linear_roots[1], l) == qm
        && linear_roots[0] != linear_roots[1]
        && factors.iter().filter(|h| h.len() != 2).all(|h| h.len() == 3 && h[0] == qm);

    FrobeniusSample { l, factor_degrees: degrees, in_px: power.is_some(), power, fixes_one_pair, skipped: None }
}

/// The same membership test computed on explicit roots in a splitting field
/// `F_{l^d}` whose modulus is drawn from `seed`. Returns `None` when `l` is
/// skipped or `d` exceeds `max_degree`.
pub fn is_in_px_splitting_field(w: &WeilPolynomial, l: u64, seed: u64, max_degree: usize) -> Option<bool> {
    let (_, factors, qm) = factors_mod(w, l, seed).ok()?;
    let d = factors.iter().fold(1usize, |acc, h| acc.lcm(&(h.len() - 1)));
    if d > max_degree {
        return None;
    }
    let mut rng = seeded_rng(l, seed.wrapping_add(1));
    let ext = ExtField::random(l, d, &mut rng);
    let lb = BigUint::from(l);
    let mut roots: Vec<Vec<u64>> = Vec::new();
    let mut frob: Vec<usize> = Vec::new();
    for h in &factors {
        let k = h.len() - 1;
        let lifted: Vec<Vec<u64>> = h.iter().map(|&c| ext.from_u64(c)).collect();
        let mut r = fpoly::roots(&ext, &lifted, &mut rng).into_iter().next()?;
        let start = roots.len();
        for i in 0..k {
            roots.push(r.clone());
            frob.push(if i + 1 == k { start } else { start + i + 1 });
            r = ext.pow(&r, &lb);
        }
    }
    let qe = ext.from_u64(qm);
    let tau: Vec<usize> = roots
        .iter()
        .map(|r| {
            let t = ext.mul(&qe, &ext.inv(r));
            roots.iter().position(|s| *s == t).expect("roots are closed under r -> q^m/r")
        })
        .collect();
    debug_assert_eq!(compose(&tau, &frob), compose(&frob, &tau));
    Some(power_index(&frob, &tau).is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSelectionReport {
    pub bound: u64,
    pub members: Vec<u64>,
    pub tested: usize,
    pub density_estimate: BigRational,
    pub skipped: Vec<(u64, SkipReason)>,
}

impl PrimeSelectionReport {
    pub fn density_f64(&self) -> f64 {
        self.density_estimate.to_f64().unwrap_or(0.0)
    }
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime_u64(n)).collect()
}

pub fn enumerate_px(w: &WeilPolynomial, bound: u64) -> PrimeSelectionReport {
    let samples = sample_primes(w, &primes_up_to(bound));
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    let mut tested = 0;
    for s in samples {
        match s.skipped {
            Some(r) => skipped.push((s.l, r)),
            None => {
                tested += 1;
                if s.in_px {
                    members.push(s.l);
                }
            }
        }
    }
    let density_estimate = if tested == 0 {
        BigRational::from_integer(BigInt::from(0))
    } else {
        BigRational::new(BigInt::from(members.len()), BigInt::from(tested))
    };
    PrimeSelectionReport { bound, members, tested, density_estimate, skipped }
}

/// Frobenius samples at the first `count` primes, skipped ones included.
pub fn frobenius_evidence(w: &WeilPolynomial, count: usize) -> Vec<FrobeniusSample> {
    let mut ls = Vec::with_capacity(count);
    let mut n = 2;
    while ls.len() < count {
        if is_prime_u64(n) {
            ls.push(n);
        }
        n += 1;
    }
    sample_primes(w, &ls)
}

#[cfg(feature = "parallel")]
pub fn sample_primes(w: &WeilPolynomial, ls: &[u64]) -> Vec<FrobeniusSample> {
    use rayon::prelude::*;
    ls.par_iter().map(|&l| is_in_px(w, l)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn sample_primes(w: &WeilPolynomial, ls: &[u64]) -> Vec<FrobeniusSample> {
    ls.iter().map(|&l| is_in_px(w, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::weil::validate;

    #[test]
    fn quadratic_examples() {
        let w = validate(&IntPoly::from_i64(&[2, -1, 1]), 2, 1).unwrap();
        assert!(is_in_px(&w, 3).in_px);
        assert!(!is_in_px(&w, 11).in_px);
        assert_eq!(is_in_px(&w, 7).skipped, Some(SkipReason::Ramified));
        assert_eq!(is_in_px(&w, 2).skipped, Some(SkipReason::EqualsP));
        for l in [3, 5, 11, 13, 101] {
            assert_eq!(is_in_px_splitting_field(&w, l, 1, 8), Some(is_in_px(&w, l).in_px));
        }
    }

    #[test]
    fn quartic_matches_splitting_field() {
        // ordinary quartic with dihedral Galois group over q = 3
        let w = validate(&IntPoly::from_i64(&[9, 3, 1, 1, 1]), 3, 1).unwrap();
        for l in primes_up_to(200) {
            let s = is_in_px(&w, l);
            if s.skipped.is_none() {
                for seed in [1, 2] {
                    assert_eq!(is_in_px_splitting_field(&w, l, seed, 16), Some(s.in_px), "l = {l}");
                }
            }
        }
    }

    #[test]
    fn congruences() {
        assert_eq!(crt(&[(1, 2), (2, 3)]), Some((5, 6)));
        assert_eq!(crt(&[(1, 2), (0, 4)]), None);
        assert_eq!(crt(&[(1, 2), (3, 4)]), Some((3, 4)));
    }

    #[test]
    fn totally_real_always_member() {
        let w = validate(&IntPoly::from_i64(&[-3, 0, 1]), 3, 1).unwrap();
        let rep = enumerate_px(&w, 100);
        assert_eq!(rep.members.len(), rep.tested);
    }

    #[test]
    fn power_indices() {
        assert_eq!(power_index(&[1, 2, 0], &[2, 0, 1]), Some(2));
        assert_eq!(power_index(&[1, 0, 2], &[0, 2, 1]), None);
    }
}
