//! Finite fields: prime fields `F_l` and extensions `F_l[x]/(m(x))`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use super::fpoly;

/// Arithmetic context for a finite field with element type `E`.
pub trait FieldCtx {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_u64(&self, n: u64) -> Self::E;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::E;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> BigUint;

    fn pow(&self, a: &Self::E, e: &BigUint) -> Self::E {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, (a % m) as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    assert!(r == 1, "{a} is not invertible mod {m}");
    t.rem_euclid(m as i128) as u64
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(is_prime_u64(p), "{p} is not prime");
        PrimeField { p }
    }
}

impl FieldCtx for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus is not monic of positive degree")]
    BadModulus,
    #[error("modulus is reducible mod {0}")]
    Reducible(u64),
}

/// Extension field `F_l[x]/(m(x))`; elements are coefficient vectors of
/// length `degree`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    modulus: Vec<u64>,
}

impl ExtField {
    /// Build the field, verifying irreducibility of `modulus` (monic, ascending).
    pub fn new(l: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let base = PrimeField::new(l);
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % l).collect();
        let modulus = fpoly::trim(&base, modulus);
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(FieldError::BadModulus);
        }
        if !fpoly::is_irreducible(&base, &modulus) {
            return Err(FieldError::Reducible(l));
        }
        Ok(ExtField { base, modulus })
    }

    /// A random irreducible monic modulus of the given degree.
    pub fn random<R: Rng + ?Sized>(l: u64, degree: usize, rng: &mut R) -> Self {
        let base = PrimeField::new(l);
        loop {
            let mut m: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..l)).collect();
            m.push(1);
            if fpoly::is_irreducible(&base, &m) {
                return ExtField { base, modulus: m };
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let d = self.degree();
        let p = self.base.p;
        for k in (d..v.len()).rev() {
            let c = v[k];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let t = mulmod(c, self.modulus[j], p);
                let idx = k - d + j;
                v[idx] = if v[idx] >= t { v[idx] - t } else { v[idx] + p - t };
            }
            v[k] = 0;
        }
        v.truncate(d);
        v.resize(d, 0);
        v
    }

    /// The class of `x`.
    pub fn generator(&self) -> Vec<u64> {
        self.reduce(vec![0, 1])
    }
}

impl FieldCtx for ExtField {
    type E = Vec<u64>;
    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let d = self.degree();
        let p = self.base.p as u128;
        let mut acc = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p;
            }
        }
        self.reduce(acc.into_iter().map(|x| x as u64).collect())
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        let f = fpoly::trim(&self.base, a.clone());
        assert!(!f.is_empty(), "inverse of zero");
        let (g, s, _) = fpoly::ext_gcd(&self.base, &f, &self.modulus);
        debug_assert_eq!(g, vec![1]);
        let mut s = s;
        s.resize(self.degree().max(s.len()), 0);
        self.reduce(s)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn from_u64(&self, n: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n % self.base.p;
        v
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.degree()).map(|_| rng.gen_range(0..self.base.p)).collect()
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.base.p), self.degree())
    }
}

/// A standalone element of `F_l[x]/(m(x))` carrying its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteFieldElem {
    field: Arc<ExtField>,
    value: Vec<u64>,
}

impl FiniteFieldElem {
    pub fn new(field: Arc<ExtField>, value: &[u64]) -> Self {
        let v = field.reduce(value.iter().map(|c| c % field.characteristic()).collect());
        FiniteFieldElem { field, value: v }
    }

    pub fn zero(field: Arc<ExtField>) -> Self {
        let v = field.zero();
        FiniteFieldElem { field, value: v }
    }

    pub fn one(field: Arc<ExtField>) -> Self {
        let v = field.one();
        FiniteFieldElem { field, value: v }
    }

    pub fn value(&self) -> &[u64] {
        &self.value
    }

    pub fn modulus(&self) -> &[u64] {
        self.field.modulus()
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    /// `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(FiniteFieldElem { field: self.field.clone(), value: self.field.inv(&self.value) })
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        FiniteFieldElem { field: self.field.clone(), value: self.field.pow(&self.value, &BigUint::from(e)) }
    }

    fn check(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field, "field mismatch");
    }
}

impl Add for &FiniteFieldElem {
    type Output = FiniteFieldElem;
    fn add(self, rhs: &FiniteFieldElem) -> FiniteFieldElem {
        self.check(rhs);
        FiniteFieldElem { field: self.field.clone(), value: self.field.add(&self.value, &rhs.value) }
    }
}

impl Sub for &FiniteFieldElem {
    type Output = FiniteFieldElem;
    fn sub(self, rhs: &FiniteFieldElem) -> FiniteFieldElem {
        self.check(rhs);
        FiniteFieldElem { field: self.field.clone(), value: self.field.sub(&self.value, &rhs.value) }
    }
}

impl Mul for &FiniteFieldElem {
    type Output = FiniteFieldElem;
    fn mul(self, rhs: &FiniteFieldElem) -> FiniteFieldElem {
        self.check(rhs);
        FiniteFieldElem { field: self.field.clone(), value: self.field.mul(&self.value, &rhs.value) }
    }
}

impl Neg for &FiniteFieldElem {
    type Output = FiniteFieldElem;
    fn neg(self) -> FiniteFieldElem {
        FiniteFieldElem { field: self.field.clone(), value: self.field.neg(&self.value) }
    }
}

impl fmt::Debug for FiniteFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod ({:?}, {})", self.value, self.field.modulus(), self.characteristic())
    }
}

/// Order of the multiplicative group, `|F| - 1`.
pub fn unit_group_order<F: FieldCtx>(f: &F) -> BigUint {
    f.order() - BigUint::one()
}
