//! Sturm sequences for counting real roots in intervals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::IntPoly;

/// Sturm chain of a squarefree polynomial, each term scaled by a positive constant.
pub fn sturm_chain(f: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.is_constant() {
            break;
        }
        let steps = a.deg() - b.deg() + 1;
        let mut r = a.pseudo_rem(b);
        if b.lc().is_negative() && steps % 2 == 1 {
            r = -&r;
        }
        if r.is_zero() {
            break;
        }
        chain.push(-&r.primitive_part_unsigned());
    }
    chain
}

fn sign_changes(chain: &[IntPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let v = p.eval_rational(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of `f` in the half-open interval `(lo, hi]`.
pub fn count_real_roots(f: &IntPoly, lo: &BigRational, hi: &BigRational) -> usize {
    if f.deg() == 0 {
        return 0;
    }
    let chain = sturm_chain(&f.squarefree_part());
    sign_changes(&chain, lo).saturating_sub(sign_changes(&chain, hi))
}

/// Number of distinct real roots of `f` in the closed interval `[lo, hi]`.
pub fn count_real_roots_closed(f: &IntPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let extra = usize::from(f.eval_rational(lo).is_zero());
    count_real_roots(f, lo, hi) + extra
}

impl IntPoly {
    /// Divide by the positive gcd of the coefficients, keeping signs.
    pub fn primitive_part_unsigned(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let c: BigInt = c.abs();
        IntPoly::new(self.coeffs().iter().map(|x| x / &c).collect())
    }
}
