//! Polynomials over a finite field, generic in the field context.
//!
//! Polynomials are coefficient vectors, constant term first, without
//! trailing zeros.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::field::FieldCtx;

pub type Poly<F> = Vec<<F as FieldCtx>::E>;

pub fn trim<F: FieldCtx>(f: &F, mut a: Poly<F>) -> Poly<F> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn add<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, out)
}

pub fn sub<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, out)
}

pub fn mul<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: FieldCtx>(f: &F, a: &[F::E], c: &F::E) -> Poly<F> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn monic<F: FieldCtx>(f: &F, a: &[F::E]) -> Poly<F> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc)),
    }
}

pub fn divrem<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> (Poly<F>, Poly<F>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: Poly<F> = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(f, r));
    }
    let db = b.len() - 1;
    let inv = f.inv(&b[db]);
    let mut q = vec![f.zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &inv);
        if !f.is_zero(&c) {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F> {
    divrem(f, a, b).1
}

/// Monic gcd (zero if both are zero).
pub fn gcd<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F> {
    let mut x = trim(f, a.to_vec());
    let mut y = trim(f, b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1): (Poly<F>, Poly<F>) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1): (Poly<F>, Poly<F>) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = f.inv(r0.last().unwrap());
    (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
}

pub fn mulmod<F: FieldCtx>(f: &F, a: &[F::E], b: &[F::E], m: &[F::E]) -> Poly<F> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: FieldCtx>(f: &F, a: &[F::E], e: &BigUint, m: &[F::E]) -> Poly<F> {
    let mut acc: Poly<F> = rem(f, &[f.one()], m);
    let base = rem(f, a, m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &base, m);
        }
    }
    acc
}

pub fn derivative<F: FieldCtx>(f: &F, a: &[F::E]) -> Poly<F> {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_u64(i as u64))).collect();
    trim(f, out)
}

pub fn eval<F: FieldCtx>(f: &F, a: &[F::E], x: &F::E) -> F::E {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

pub fn is_squarefree<F: FieldCtx>(f: &F, a: &[F::E]) -> bool {
    if a.len() <= 2 {
        return !a.is_empty();
    }
    let d = derivative(f, a);
    if d.is_empty() {
        return false;
    }
    gcd(f, a, &d).len() == 1
}

fn x_poly<F: FieldCtx>(f: &F) -> Poly<F> {
    vec![f.zero(), f.one()]
}

/// `x^(|F|^k) mod m`.
fn frobenius_power<F: FieldCtx>(f: &F, m: &[F::E], k: usize) -> Poly<F> {
    let q = f.order();
    let mut h = rem(f, &x_poly(f), m);
    for _ in 0..k {
        h = powmod(f, &h, &q, m);
    }
    h
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial.
pub fn is_irreducible<F: FieldCtx>(f: &F, m: &[F::E]) -> bool {
    let n = m.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = x_poly(f);
    if sub(f, &frobenius_power(f, m, n), &rem(f, &x, m)).is_empty() {
        for r in prime_divisors(n) {
            let h = sub(f, &frobenius_power(f, m, n / r), &x);
            if gcd(f, &h, m).len() != 1 {
                return false;
            }
        }
        true
    } else {
        false
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree<F: FieldCtx>(f: &F, a: &[F::E]) -> Vec<(Poly<F>, usize)> {
    let mut out = Vec::new();
    let mut g = monic(f, a);
    let q = f.order();
    let x = x_poly(f);
    let mut h = rem(f, &x, &g);
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            let deg = g.len() - 1;
            out.push((g, deg));
            break;
        }
        h = powmod(f, &h, &q, &g);
        let c = gcd(f, &sub(f, &h, &x), &g);
        if c.len() > 1 {
            g = divrem(f, &g, &c).0;
            h = rem(f, &h, &g);
            out.push((c, d));
        }
    }
    out
}

/// Split a product of distinct monic irreducibles of degree `d` into its factors.
pub fn equal_degree<F: FieldCtx, R: Rng + ?Sized>(f: &F, a: &[F::E], d: usize, rng: &mut R) -> Vec<Poly<F>> {
    let n = a.len() - 1;
    if n == d {
        return vec![monic(f, a)];
    }
    let q = f.order();
    let char2 = f.characteristic() == 2;
    loop {
        let r: Poly<F> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if r.len() < 2 {
            continue;
        }
        let b = if char2 {
            // absolute trace to F_2: sum of r^(2^i), i < d * log2|F|
            let k = (q.bits() - 1) as usize * d;
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..k {
                t = mulmod(f, &t, &t, a);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let e = (num_traits::pow(q.clone(), d) - BigUint::one()) >> 1;
            sub(f, &powmod(f, &r, &e, a), &[f.one()])
        };
        let g = gcd(f, &b, a);
        if g.len() > 1 && g.len() < a.len() {
            let h = divrem(f, a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial, sorted by degree.
pub fn factor_squarefree<F: FieldCtx, R: Rng + ?Sized>(f: &F, a: &[F::E], rng: &mut R) -> Vec<Poly<F>> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, a) {
        out.extend(equal_degree(f, &g, d, rng));
    }
    out
}

/// Degrees of the irreducible factors of a squarefree polynomial, without
/// splitting equal-degree parts.
pub fn factor_degrees<F: FieldCtx>(f: &F, a: &[F::E]) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, a) {
        let count = (g.len() - 1) / d;
        out.extend(std::iter::repeat(d).take(count));
    }
    out
}

/// All roots in the field of a squarefree polynomial.
pub fn roots<F: FieldCtx, R: Rng + ?Sized>(f: &F, a: &[F::E], rng: &mut R) -> Vec<F::E> {
    let a = monic(f, a);
    let x = x_poly(f);
    // restrict to the product of linear factors: gcd(a, x^q - x)
    let xq = powmod(f, &x, &f.order(), &a);
    let lin = gcd(f, &sub(f, &xq, &x), &a);
    if lin.len() < 2 {
        return Vec::new();
    }
    equal_degree(f, &lin, 1, rng).into_iter().map(|l| f.neg(&l[0])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{ExtField, PrimeField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factor_over_prime_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f7 = PrimeField::new(7);
        // t^2 - t + 2 mod 7: disc -7 = 0 -> not squarefree
        assert!(!is_squarefree(&f7, &[2, 6, 1]));
        // t^4 - 1 over F_5 splits completely
        let f5 = PrimeField::new(5);
        let mut fs = factor_squarefree(&f5, &[4, 0, 0, 0, 1], &mut rng);
        fs.sort();
        assert_eq!(fs, vec![vec![1, 1], vec![2, 1], vec![3, 1], vec![4, 1]]);
        // t^2 - t + 2 over F_2 = t(t+1)
        let f2 = PrimeField::new(2);
        let mut r = roots(&f2, &[0, 1, 1], &mut rng);
        r.sort();
        assert_eq!(r, vec![0, 1]);
        // x^4 + x + 1 irreducible over F_2
        assert!(is_irreducible(&f2, &[1, 1, 0, 0, 1]));
        assert_eq!(factor_degrees(&f2, &[1, 1, 0, 0, 1]), vec![4]);
    }

    #[test]
    fn roots_in_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = ExtField::new(3, vec![1, 0, 1]).unwrap(); // F_9
                                                          // t^2 + 1 splits in F_9
        let p: Vec<Vec<u64>> = vec![k.one(), k.zero(), k.one()];
        let rs = roots(&k, &p, &mut rng);
        assert_eq!(rs.len(), 2);
        for r in rs {
            assert!(k.is_zero(&eval(&k, &p, &r)));
        }
    }
}
