//! Weil polynomials: validation, Newton polygons, ordinariness and the
//! slopes of the `p`-adic primes of `Q[π]`.

mod newton;
mod profile;

pub use newton::{is_ordinary, newton_polygon, NewtonPolygon, Ordinariness, OrdinaryWitness};
pub use profile::{prime_profile, LocalPrime, PadicPrimeProfile, ProfileError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::factor::factor_rational;
use crate::arith::field::is_prime_u64;
use crate::arith::roots::{BoxedRoot, RootIsolation};
use crate::arith::sturm::count_real_roots_closed;
use crate::arith::IntPoly;

/// The clause of the Weil-number definition a polynomial fails.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WeilError {
    #[error("q = {q} is not a prime power")]
    BadPrimePower { q: u64 },
    #[error("polynomial is not monic with integer coefficients")]
    NotMonic,
    #[error("polynomial has degree zero")]
    ConstantPolynomial,
    #[error("a root violates |z|^2 = q^m: |z|^2 lies in [{}, {}]", approx(.abs_sq_lo), approx(.abs_sq_hi))]
    AbsValueViolation { root: BoxedRoot, abs_sq_lo: BigRational, abs_sq_hi: BigRational },
}

fn approx(x: &BigRational) -> String {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => format!("{:.9}", n / d),
        _ => x.to_string(),
    }
}

impl WeilError {
    /// Short machine-readable name of the violated clause.
    pub fn clause(&self) -> &'static str {
        match self {
            WeilError::BadPrimePower { .. } => "BadPrimePower",
            WeilError::NotMonic => "NotMonic",
            WeilError::ConstantPolynomial => "ConstantPolynomial",
            WeilError::AbsValueViolation { .. } => "AbsValueViolation",
        }
    }
}

/// Split a prime power into `(p, a)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    if !is_prime_u64(p) {
        return None;
    }
    let mut r = q;
    let mut a = 0;
    while r % p == 0 {
        r /= p;
        a += 1;
    }
    (r == 1).then_some((p, a))
}

/// A root of a validated Weil polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilRoot {
    pub disk: BoxedRoot,
    /// Index into [`WeilPolynomial::factors`].
    pub factor: usize,
}

/// A monic integer polynomial whose roots all have absolute value `q^{m/2}`.
#[derive(Clone, Debug)]
pub struct WeilPolynomial {
    poly: IntPoly,
    q: u64,
    p: u64,
    a: u32,
    m: u32,
    factors: Vec<(IntPoly, usize)>,
    roots: Vec<WeilRoot>,
    pairing: Vec<usize>,
    sign: i8,
    iso: RootIsolation,
}

impl WeilPolynomial {
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn a(&self) -> u32 {
        self.a
    }
    pub fn weight(&self) -> u32 {
        self.m
    }
    /// `q^m`, the product of a root and its partner.
    pub fn qm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.q), self.m as usize)
    }
    pub fn degree(&self) -> usize {
        self.poly.deg()
    }
    /// Irreducible factors with multiplicities, sorted by degree then coefficients.
    pub fn factors(&self) -> &[(IntPoly, usize)] {
        &self.factors
    }
    /// Distinct roots, grouped by factor. Within a factor the real roots come
    /// first, then conjugate pairs at consecutive indices.
    pub fn roots(&self) -> &[WeilRoot] {
        &self.roots
    }
    /// The involution `z -> q^m / z` on root indices; it equals complex conjugation.
    pub fn conj_pairing(&self) -> &[usize] {
        &self.pairing
    }
    /// Sign `s` with `t^d P(q^m/t) = s q^{md/2} P(t)`.
    pub fn functional_equation_sign(&self) -> i8 {
        self.sign
    }
    pub fn squarefree_part(&self) -> IntPoly {
        self.factors.iter().fold(IntPoly::one(), |acc, (f, _)| &acc * f)
    }
    pub fn squarefree_degree(&self) -> usize {
        self.roots.len()
    }
    pub fn has_real_roots(&self) -> bool {
        self.roots.iter().any(|r| r.disk.is_real())
    }
    /// Root disks refined to radius at most `bound`, same indexing as [`roots`](Self::roots).
    pub fn refined_roots(&self, bound: &BigRational) -> Vec<BoxedRoot> {
        let mut iso = self.iso.clone();
        iso.refine(bound);
        iso.boxes().iter().flatten().cloned().collect()
    }
    /// Root disks refined to radius at most `2^-bits` times `q^{m/2}`, roughly.
    pub fn roots_with_bits(&self, bits: u64) -> Vec<BoxedRoot> {
        self.refined_roots(&BigRational::new(BigInt::one(), BigInt::one() << bits))
    }
}

/// Check the Weil conditions for a monic integer polynomial and isolate its roots.
pub fn validate(poly: &IntPoly, q: u64, m: u32) -> Result<WeilPolynomial, WeilError> {
    let (p, a) = prime_power(q).ok_or(WeilError::BadPrimePower { q })?;
    if poly.is_zero() || !poly.is_monic() {
        return Err(WeilError::NotMonic);
    }
    let d = poly.deg();
    if d == 0 {
        return Err(WeilError::ConstantPolynomial);
    }
    let qm = num_traits::pow(BigInt::from(q), m as usize);
    let c0 = poly.coeff(0);

    // t^d P(Q/t) has roots Q/z; on the circle this is the conjugate multiset
    let mut pw = BigInt::one();
    let mut rev = vec![BigInt::zero(); d + 1];
    for i in 0..=d {
        rev[d - i] = poly.coeff(i) * &pw;
        pw *= &qm;
    }
    let functional = IntPoly::new(rev) == poly.scale(&c0);
    if !functional || !roots_on_circle(poly, &qm) {
        return Err(violation_witness(poly, &qm));
    }
    // c0 = sign * Q^{d/2}; d odd forces Q to be a square here
    let sign = if c0.is_negative() { -1 } else { 1 };

    let factors = factor_rational(poly);
    let (polys, mults): (Vec<IntPoly>, Vec<usize>) = factors.iter().cloned().unzip();
    let iso = RootIsolation::new(polys, mults);
    let mut roots = Vec::new();
    let mut pairing = Vec::new();
    for (k, boxes) in iso.boxes().iter().enumerate() {
        let base = roots.len();
        let reals = boxes.iter().filter(|b| b.is_real()).count();
        for (i, b) in boxes.iter().enumerate() {
            pairing.push(if b.is_real() { base + i } else { base + reals + ((i - reals) ^ 1) });
            roots.push(WeilRoot { disk: b.clone(), factor: k });
        }
    }
    Ok(WeilPolynomial { poly: poly.clone(), q, p, a, m, factors, roots, pairing, sign, iso })
}

/// Exact test that every root lies on `|z|^2 = Q`, assuming the functional equation.
fn roots_on_circle(poly: &IntPoly, qm: &BigInt) -> bool {
    let mut rest = poly.clone();
    // strip real roots ±sqrt(Q)
    let quad = IntPoly::new(vec![-qm.clone(), BigInt::zero(), BigInt::one()]);
    while let Some(r) = rest.div_exact(&quad) {
        rest = r;
    }
    let s = qm.sqrt();
    if &(&s * &s) == qm {
        for lin in [IntPoly::linear(s.clone()), IntPoly::linear(-s.clone())] {
            while let Some(r) = rest.div_exact(&lin) {
                rest = r;
            }
        }
    }
    let n = rest.deg();
    if n % 2 == 1 {
        return false;
    }
    let k = n / 2;
    // rest = t^k h(t + Q/t) with h = a_k + sum_j a_{k+j} D_j
    for j in 1..=k {
        if rest.coeff(k - j) != rest.coeff(k + j) * num_traits::pow(qm.clone(), j) {
            return false;
        }
    }
    let x = IntPoly::monomial(1);
    let qc = IntPoly::constant(qm.clone());
    let mut d_prev = IntPoly::constant(BigInt::from(2));
    let mut d_cur = x.clone();
    let mut h = IntPoly::constant(rest.coeff(k));
    for j in 1..=k {
        h = &h + &d_cur.scale(&rest.coeff(k + j));
        let next = &(&x * &d_cur) - &(&qc * &d_prev);
        d_prev = std::mem::replace(&mut d_cur, next);
    }
    if k == 0 {
        return true;
    }
    // h(x) h(-x) = g(x^2); every root of h real in [-2sqrt(Q), 2sqrt(Q)] iff
    // every root of g lies in [0, 4Q]
    let hh = &h * &h.negate_variable();
    let g = IntPoly::new(hh.coeffs().iter().step_by(2).cloned().collect());
    let lo = BigRational::zero();
    let hi = BigRational::from_integer(qm * 4);
    let inside: usize =
        g.squarefree_decomposition().iter().map(|(s, e)| e * count_real_roots_closed(s, &lo, &hi)).sum();
    inside == g.deg()
}

fn violation_witness(poly: &IntPoly, qm: &BigInt) -> WeilError {
    let q = BigRational::from_integer(qm.clone());
    let parts = poly.squarefree_decomposition();
    let (polys, mults): (Vec<IntPoly>, Vec<usize>) = parts.into_iter().unzip();
    let mut iso = RootIsolation::new(polys, mults);
    let mut bound = BigRational::new(BigInt::one(), BigInt::from(4));
    loop {
        for b in iso.boxes().iter().flatten() {
            let (lo, hi) = b.abs_sq_bounds();
            if hi < q || lo > q {
                return WeilError::AbsValueViolation { root: b.clone(), abs_sq_lo: lo, abs_sq_hi: hi };
            }
        }
        iso.refine(&bound);
        bound /= BigInt::from(16);
        assert!(bound.denom().bits() < 100_000, "no root off the circle was found");
    }
}

/// `q^n π` has weight `m + 2n`: the Weil polynomial of the scaled roots.
pub fn shift_weight(poly: &IntPoly, q: u64, n: u32) -> IntPoly {
    poly.scale_variable_inverse(&num_traits::pow(BigInt::from(q), n as usize))
}

impl IntPoly {
    /// `c^d P(t / c)`: the monic polynomial whose roots are `c` times the roots of `P`.
    pub fn scale_variable_inverse(&self, c: &BigInt) -> IntPoly {
        let d = self.deg();
        let mut pw = BigInt::one();
        let mut out = vec![BigInt::zero(); d + 1];
        for i in (0..=d).rev() {
            out[i] = self.coeff(i) * &pw;
            pw *= c;
        }
        IntPoly::new(out)
    }
}
