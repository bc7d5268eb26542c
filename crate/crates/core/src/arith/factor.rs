//! Factorization over the rationals: squarefree decomposition, modular
//! factorization at a well-chosen prime, Hensel lifting and recombination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{inv_mod, is_prime_u64, PrimeField};
use super::fpoly;
use super::poly::IntPoly;

/// Irreducible factors with multiplicities. The product of the factors raised
/// to their multiplicities equals `p` up to a rational scalar; each factor is
/// primitive with positive leading coefficient. Sorted by degree, then
/// coefficients.
pub fn factor_rational(p: &IntPoly) -> Vec<(IntPoly, usize)> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (s, k) in p.squarefree_decomposition() {
        for f in factor_squarefree(&s) {
            out.push((f, k));
        }
    }
    out.sort_by(|(a, ka), (b, kb)| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())).then(ka.cmp(kb)));
    out
}

/// Whether a nonconstant polynomial is irreducible over the rationals.
pub fn is_irreducible(p: &IntPoly) -> bool {
    let f = factor_rational(p);
    f.len() == 1 && f[0].1 == 1
}

pub(crate) fn reduce_mod_p(f: &IntPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let v: Vec<u64> = f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fpoly::trim(&PrimeField { p }, v)
}

fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn poly_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn from_fp(v: &[u64]) -> IntPoly {
    IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

/// Subset sums of the factor degrees, excluding nothing.
fn degree_sums(degs: &[usize], n: usize) -> BTreeSet<usize> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    (0..=n).filter(|&s| reach[s]).collect()
}

/// Factor a primitive squarefree polynomial of positive degree.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_part();
    let n = f.deg();
    if n <= 1 {
        return vec![f];
    }
    let lc = f.lc();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // Sample several good primes; the intersection of attainable factor
    // degrees often proves irreducibility outright.
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut allowed: Option<BTreeSet<usize>> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 8 && p < 10_000 {
        if is_prime_u64(p) && !(&lc % p).is_zero() {
            let fp = reduce_mod_p(&f, p);
            let field = PrimeField { p };
            if fpoly::is_squarefree(&field, &fp) {
                let degs = fpoly::factor_degrees(&field, &fp);
                let sums = degree_sums(&degs, n);
                allowed = Some(match allowed {
                    None => sums,
                    Some(a) => a.intersection(&sums).copied().collect(),
                });
                if best.as_ref().is_none_or(|(_, d)| degs.len() < d.len()) {
                    best = Some((p, degs));
                }
                tried += 1;
                if allowed.as_ref().unwrap().len() == 2 {
                    return vec![f];
                }
            }
        }
        p += 1;
    }
    let (p, degs) = best.expect("a squarefree reduction exists");
    if degs.len() == 1 {
        return vec![f];
    }
    let field = PrimeField { p };
    let fp = reduce_mod_p(&f, p);
    let mut modular = fpoly::factor_squarefree(&field, &fp, &mut rng);
    modular.sort();

    // p^k > 2 * |lc| * 2^n * ||f||_2 bounds any candidate's coefficients
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let bound = lc.abs() * (BigInt::one() << n) * norm * 2;
    let pb = BigInt::from(p);
    let mut k = 1;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(&f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

fn recombine(f: IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut cur = f;
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let idx: Vec<usize> = (0..lifted.len()).collect();
        for subset in combinations(&idx, s) {
            let lc = cur.lc();
            let mut g = IntPoly::constant(lc.clone());
            for &i in &subset {
                g = poly_mod(&(&g * &lifted[i]), modulus);
            }
            let g = IntPoly::new(g.coeffs().iter().map(|c| symmetric_mod(c, modulus)).collect());
            // quick constant-term filter
            let c0 = g.coeff(0);
            if !c0.is_zero() && !(&lc * cur.coeff(0) % &c0).is_zero() {
                continue;
            }
            let cand = g.primitive_part();
            if let Some(q) = cur.div_exact(&cand) {
                out.push(cand);
                cur = q.primitive_part();
                let keep: Vec<IntPoly> =
                    lifted.iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if !cur.is_constant() {
        out.push(cur);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut cur, &mut out);
    out
}

/// Lift monic coprime factors of `f mod p` to monic factors modulo `p^k` with
/// `f = lc(f) * prod(factors) mod p^k`.
pub(crate) fn hensel_lift(f: &IntPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<IntPoly> {
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    let lc_inv = {
        // inverse of lc modulo p^k by Newton iteration from the mod-p inverse
        let lc = f.lc().mod_floor(&pk);
        let mut x = BigInt::from(inv_mod(lc.mod_floor(&BigInt::from(p)).to_u64().unwrap(), p));
        let mut m = BigInt::from(p);
        while m < pk {
            m = (&m * &m).min(pk.clone());
            x = (&x * (BigInt::from(2) - &lc * &x)).mod_floor(&m);
        }
        x.mod_floor(&pk)
    };
    let monic_f = poly_mod(&f.scale(&lc_inv), &pk);
    lift_tree(&monic_f, factors, p, k)
}

fn lift_tree(f: &IntPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<IntPoly> {
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    let field = PrimeField { p };
    let mid = factors.len() / 2;
    let prod = |fs: &[Vec<u64>]| fs.iter().fold(vec![1u64], |acc, g| fpoly::mul(&field, &acc, g));
    let g0 = prod(&factors[..mid]);
    let h0 = prod(&factors[mid..]);
    let (g, h) = lift_pair(f, &g0, &h0, p, k);
    let mut out = lift_tree(&g, &factors[..mid], p, k);
    out.extend(lift_tree(&h, &factors[mid..], p, k));
    out
}

/// Linear Hensel lifting of `f = g*h mod p` (all monic) to `mod p^k`.
fn lift_pair(f: &IntPoly, g0: &[u64], h0: &[u64], p: u64, k: u32) -> (IntPoly, IntPoly) {
    let field = PrimeField { p };
    let (one, s, t) = fpoly::ext_gcd(&field, g0, h0);
    assert_eq!(one, vec![1], "Hensel lifting needs coprime factors");
    let pb = BigInt::from(p);
    let mut g = from_fp(g0);
    let mut h = from_fp(h0);
    let mut m = pb.clone();
    for _ in 1..k {
        let diff = &*f - &(&g * &h);
        let e: Vec<u64> = diff
            .coeffs()
            .iter()
            .map(|c| {
                debug_assert!((c % &m).is_zero());
                (c / &m).mod_floor(&pb).to_u64().unwrap()
            })
            .collect();
        let e = fpoly::trim(&field, e);
        if !e.is_empty() {
            let dg = fpoly::rem(&field, &fpoly::mul(&field, &t, &e), g0);
            let dh = fpoly::rem(&field, &fpoly::mul(&field, &s, &e), h0);
            g = &g + &from_fp(&dg).scale(&m);
            h = &h + &from_fp(&dh).scale(&m);
        }
        m *= &pb;
    }
    (poly_mod(&g, &m), poly_mod(&h, &m))
}
