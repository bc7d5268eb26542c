//! Arithmetic in `Q[t]/(f)` for a monic irreducible integer polynomial, and
//! `p`-adic valuations of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RatMatrix;
use super::poly::IntPoly;

/// `v_p(x)` for nonzero `x`.
pub fn vp_int(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

pub fn vp_rat(x: &BigRational, p: u64) -> i64 {
    vp_int(x.numer(), p) as i64 - vp_int(x.denom(), p) as i64
}

/// `x mod p` for a `p`-integral rational.
pub fn reduce_rat(x: &BigRational, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb).to_u64().unwrap();
    let d = x.denom().mod_floor(&pb).to_u64().unwrap();
    assert!(d != 0, "rational is not p-integral");
    super::field::mulmod(n, super::field::inv_mod(d, p), p)
}

pub type Elem = Vec<BigRational>;

#[derive(Clone, Debug)]
pub struct NumberField {
    f: IntPoly,
    n: usize,
}

impl NumberField {
    pub fn new(f: IntPoly) -> Self {
        assert!(f.is_monic() && f.deg() >= 1);
        let n = f.deg();
        NumberField { f, n }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn zero(&self) -> Elem {
        vec![BigRational::zero(); self.n]
    }

    pub fn one(&self) -> Elem {
        self.basis(0)
    }

    /// `t^i` for `i < n`.
    pub fn basis(&self, i: usize) -> Elem {
        let mut v = self.zero();
        v[i] = BigRational::one();
        v
    }

    pub fn from_int(&self, c: &BigInt) -> Elem {
        let mut v = self.zero();
        v[0] = BigRational::from_integer(c.clone());
        v
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &Elem, c: &BigRational) -> Elem {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.n;
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // reduce by the monic modulus
        for k in (n..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                prod[k - n + j] -= &c * BigRational::from_integer(self.f.coeff(j));
            }
        }
        prod.truncate(n);
        prod
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of `y -> a y` acting on row vectors in the power basis.
    pub fn mul_matrix(&self, a: &Elem) -> RatMatrix {
        (0..self.n).map(|i| self.mul(&self.basis(i), a)).collect()
    }

    /// Inverse of a nonzero element, by solving `a x = 1`.
    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        let m = self.mul_matrix(a);
        // x M = 1 with M rows = basis * a; solve via Gauss-Jordan on the transpose
        let n = self.n;
        let mut aug: RatMatrix = (0..n)
            .map(|j| {
                let mut row: Vec<BigRational> = (0..n).map(|i| m[i][j].clone()).collect();
                row.push(if j == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..n {
            let k = (c..n).find(|&k| !aug[k][c].is_zero())?;
            aug.swap(c, k);
            let inv = aug[c][c].recip();
            for x in aug[c].iter_mut() {
                *x *= &inv;
            }
            for k in 0..n {
                if k != c && !aug[k][c].is_zero() {
                    let f = aug[k][c].clone();
                    for j in 0..=n {
                        let t = &f * &aug[c][j];
                        aug[k][j] -= t;
                    }
                }
            }
        }
        Some(aug.into_iter().map(|r| r[n].clone()).collect())
    }
}
