//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use weilreg::arith::matrix::{bareiss_det, IntMatrix};
use weilreg::arith::IntPoly;
use weilreg::weil::WeilPolynomial;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Chebyshev-type polynomials with `D_j(s + 1/s) = s^j + s^-j`.
pub fn dickson(j: usize) -> IntPoly {
    let x = IntPoly::from_i64(&[0, 1]);
    let (mut a, mut b) = (IntPoly::from_i64(&[2]), x.clone());
    if j == 0 {
        return a;
    }
    for _ in 1..j {
        let c = &(&x * &b) - &a;
        a = b;
        b = c;
    }
    b
}

/// A weight-2 polynomial over `F_r` with one slope-0 root, one slope-2 root
/// and `2g - 2` roots of slope 1. `perturb[0]` multiplies `D_{g-1}/r` and
/// `perturb[j]` multiplies `D_{g-1-j}/r`; `r` must not divide `perturb[0]`
/// and `sum |perturb| < r`.
pub fn synthetic_height_one(g: usize, r: i64, perturb: &[i64]) -> IntPoly {
    assert!(perturb[0] % r != 0 && perturb.iter().map(|x| x.abs()).sum::<i64>() < r);
    // H(x) = D_g + sum perturb[j] D_{g-1-j} / r, scaled by r
    let mut h = dickson(g).scale(&BigInt::from(r));
    for (j, &e) in perturb.iter().enumerate() {
        if j < g {
            h = &h + &dickson(g - 1 - j).scale(&BigInt::from(e));
        }
    }
    // r * s^g H(s + 1/s) as a polynomial in s of degree 2g
    let mut rs = vec![BigInt::zero(); 2 * g + 1];
    let sp = IntPoly::from_i64(&[1, 0, 1]);
    for (k, hk) in h.coeffs().iter().enumerate() {
        // s^g (s + 1/s)^k = s^{g-k} (s^2 + 1)^k
        let t = sp.pow(k);
        for (i, c) in t.coeffs().iter().enumerate() {
            rs[g - k + i] += hk * c;
        }
    }
    // P(t) = r^{2g} R(t / r) with R = rs / r
    let coeffs: Vec<BigInt> = (0..=2 * g)
        .map(|i| {
            let v = &rs[i] * BigInt::from(r).pow((2 * g - i) as u32);
            let (q, rem) = num_integer::Integer::div_rem(&v, &BigInt::from(r));
            assert!(rem.is_zero());
            q
        })
        .collect();
    IntPoly::new(coeffs)
}

/// Rectangle `[re_lo, re_hi] x [im_lo, im_hi]`.
#[derive(Clone, Debug)]
struct Rect {
    re: (BigRational, BigRational),
    im: (BigRational, BigRational),
}

fn imul(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}

fn isub(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    (&a.0 - &b.1, &a.1 - &b.0)
}

fn iadd(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    (&a.0 + &b.0, &a.1 + &b.1)
}

impl Rect {
    fn point(x: BigRational) -> Rect {
        Rect { re: (x.clone(), x), im: (BigRational::zero(), BigRational::zero()) }
    }
    fn mul(&self, o: &Rect) -> Rect {
        Rect {
            re: isub(&imul(&self.re, &o.re), &imul(&self.im, &o.im)),
            im: iadd(&imul(&self.re, &o.im), &imul(&self.im, &o.re)),
        }
    }
    fn max_abs_sq(&self) -> BigRational {
        let m = |a: &(BigRational, BigRational)| {
            let x = a.0.abs().max(a.1.abs());
            &x * &x
        };
        m(&self.re) + m(&self.im)
    }
    fn contains_zero(&self) -> bool {
        !self.re.0.is_positive() && !self.re.1.is_negative() && !self.im.0.is_positive() && !self.im.1.is_negative()
    }
}

fn factorial(n: usize) -> u32 {
    (1..=n as u32).product()
}

/// Exact test of `prod roots[i] = q^{j}` for a tuple of root indices.
///
/// The product is an algebraic integer all of whose conjugates have absolute
/// value `Q = q^{mn/2}`; a nonzero difference with `Q` has norm at least 1,
/// so it is at least `(2Q)^{1-D}` in absolute value, `D` bounding the orbit.
pub fn tuple_product_is(w: &WeilPolynomial, tuple: &[usize], target: &BigInt) -> bool {
    let d = w.squarefree_degree();
    let orbit = factorial(d.max(1)) as u64;
    let two_q = BigRational::from_integer(target * 2);
    let mut gap = BigRational::one();
    for _ in 1..orbit {
        gap /= &two_q;
    }
    let mut bits = 64u64;
    loop {
        let bound = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let roots = w.refined_roots(&bound);
        let mut acc = Rect::point(BigRational::one());
        for &i in tuple {
            let b = &roots[i];
            let r = Rect { re: (&b.re - &b.radius, &b.re + &b.radius), im: (&b.im - &b.radius, &b.im + &b.radius) };
            acc = acc.mul(&r);
        }
        let t = BigRational::from_integer(target.clone());
        acc.re = (&acc.re.0 - &t, &acc.re.1 - &t);
        if !acc.contains_zero() {
            return false;
        }
        if acc.max_abs_sq() < &gap * &gap {
            return true;
        }
        bits *= 2;
        assert!(bits < 1 << 14, "product enclosure does not converge");
    }
}

/// Ordered `n`-tuples of eigenvalues (with multiplicity) with product `q^{mn/2}`.
pub fn brute_fixed_dim(w: &WeilPolynomial, n: usize) -> u64 {
    let d = w.squarefree_degree();
    let mults: Vec<u64> = w.roots().iter().map(|r| w.factors()[r.factor].1 as u64).collect();
    let mn = w.weight() as usize * n;
    assert!(mn % 2 == 0);
    let target = BigInt::from(w.q()).pow((mn / 2) as u32);
    let mut cache: std::collections::HashMap<Vec<usize>, bool> = Default::default();
    let mut total = 0;
    let mut t = vec![0usize; n];
    loop {
        let mut key = t.clone();
        key.sort();
        let hit = *cache.entry(key).or_insert_with(|| tuple_product_is(w, &t, &target));
        if hit {
            total += t.iter().map(|&i| mults[i]).product::<u64>();
        }
        // next tuple
        let mut k = 0;
        while k < n {
            t[k] += 1;
            if t[k] < d {
                break;
            }
            t[k] = 0;
            k += 1;
        }
        if k == n {
            return total;
        }
    }
}

/// Legendre symbol `(a / l)` for an odd prime `l` by Euler's criterion.
pub fn legendre(a: i64, l: u64) -> i64 {
    let a = a.rem_euclid(l as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r: u128 = 1;
    let mut b = a as u128;
    let mut e = (l - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % l as u128;
        }
        b = b * b % l as u128;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// `det(tI - M)` by evaluation at `0..=r` and Lagrange interpolation.
pub fn charpoly_by_det(m: &[Vec<i64>]) -> Vec<BigRational> {
    let r = m.len();
    let pts: Vec<(BigRational, BigRational)> = (0..=r as i64)
        .map(|t| {
            let a: IntMatrix = (0..r)
                .map(|i| (0..r).map(|j| BigInt::from(if i == j { t - m[i][j] } else { -m[i][j] })).collect())
                .collect();
            (rat(t), BigRational::from_integer(bareiss_det(a)))
        })
        .collect();
    let mut out = vec![BigRational::zero(); r + 1];
    for (i, (xi, yi)) in pts.iter().enumerate() {
        // basis polynomial prod_{j != i} (t - xj) / (xi - xj)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut nb = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                nb[k + 1] += c;
                nb[k] -= c * xj;
            }
            basis = nb;
            denom *= xi - xj;
        }
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * yi / &denom;
        }
    }
    out
}

/// Sum of the principal `i x i` minors.
pub fn principal_minor_sum(m: &[Vec<i64>], i: usize) -> BigInt {
    let r = m.len();
    let mut total = BigInt::zero();
    for mask in 0u32..(1 << r) {
        if mask.count_ones() as usize != i {
            continue;
        }
        let idx: Vec<usize> = (0..r).filter(|k| mask >> k & 1 == 1).collect();
        let sub: IntMatrix = idx.iter().map(|&a| idx.iter().map(|&b| BigInt::from(m[a][b])).collect()).collect();
        total += if sub.is_empty() { BigInt::one() } else { bareiss_det(sub) };
    }
    total
}
