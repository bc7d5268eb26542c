//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::bareiss_det;

/// Integer polynomial, coefficients stored constant term first.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector and `coeffs().last()` is the leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `t - root`.
    pub fn linear(root: BigInt) -> Self {
        Self::new(vec![-root, BigInt::one()])
    }

    /// `t^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0. Only for callers that
    /// already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Gcd of the coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `t^deg * self(1/t)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `self(c * t)`.
    pub fn scale_variable(&self, c: &BigInt) -> Self {
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    /// `self(-t)`.
    pub fn negate_variable(&self) -> Self {
        self.scale_variable(&BigInt::from(-1))
    }

    /// `self(t + c)` via repeated synthetic division.
    pub fn taylor_shift(&self, c: &BigInt) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Self::new(a)
    }

    /// `self(t^k)`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.deg() * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero polynomial");
        let dd = d.deg();
        let dl = d.lc();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return self.clone();
        }
        let steps = r.len() - dd;
        for k in (0..steps).rev() {
            let top = r[k + dd].clone();
            for x in r.iter_mut() {
                *x *= &dl;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &top * dc;
            }
            r.truncate(k + dd);
        }
        Self::new(r)
    }

    /// Exact quotient in `Z[t]`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let dl = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (f, rem) = r[k + dd].div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            if !f.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &f * dc;
                }
            }
            q[k] = f;
        }
        if r[..dd].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Division over the rationals, returning quotient and remainder coefficients.
    pub fn div_rem_rational(&self, d: &Self) -> (Vec<BigRational>, Vec<BigRational>) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        let dl = BigRational::from_integer(d.lc());
        let mut r: Vec<BigRational> = self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        if r.len() <= dd {
            return (Vec::new(), trim_rat(r));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &dl;
            if !f.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &f * BigRational::from_integer(dc.clone());
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (trim_rat(q), trim_rat(r))
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c).primitive_part()
    }

    /// Squarefree decomposition: pairs `(s_k, k)` with `self = c * prod s_k^k`,
    /// each `s_k` primitive squarefree and nonconstant; pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.primitive_part();
        // a_k = gcd(a_{k-1}, a_{k-1}'), b_k = a_{k-1} / a_k holds the factors of
        // multiplicity >= k; s_k = b_k / b_{k+1}.
        let mut a = f.gcd(&f.derivative());
        let mut b = f.div_exact(&a).expect("gcd divides").primitive_part();
        let mut k = 1;
        while !b.is_constant() {
            let (a2, b2) = if a.is_constant() {
                (IntPoly::one(), IntPoly::one())
            } else {
                let a2 = a.gcd(&a.derivative());
                let b2 = a.div_exact(&a2).expect("gcd divides").primitive_part();
                (a2, b2)
            };
            let s = b.div_exact(&b2).expect("nested squarefree parts").primitive_part();
            if !s.is_constant() {
                out.push((s, k));
            }
            a = a2;
            b = b2;
            k += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors, primitive.
    pub fn squarefree_part(&self) -> Self {
        let mut acc = Self::one();
        for (s, _) in self.squarefree_decomposition() {
            acc = &acc * &s;
        }
        acc.primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().iter().all(|(_, k)| *k == 1)
    }

    /// Resultant via the Sylvester determinant (fraction-free elimination).
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let m = self.deg();
        let n = other.deg();
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        if m == 0 {
            return num_traits::pow(self.lc(), n);
        }
        if n == 0 {
            return num_traits::pow(other.lc(), m);
        }
        let size = m + n;
        let mut rows = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                rows[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                rows[n + i][i + j] = c.clone();
            }
        }
        bareiss_det(rows)
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        let r = self.resultant(&self.derivative());
        let r = r / self.lc();
        if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Substitute a polynomial: `self(g(t))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// Coefficients as `i64` when they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

fn trim_rat(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = rhs.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => BigInt::zero(),
            });
        }
        IntPoly::new(out)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
