//! Cyclotomic polynomials and Euler's totient.

use num_bigint::BigInt;

use super::poly::IntPoly;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// All `n` with `phi(n) <= bound`, ascending. Uses `n <= 6 bound^2 + 6` as a search cap.
pub fn orders_with_phi_at_most(bound: u64) -> Vec<u64> {
    let cap = 6 * bound * bound + 6;
    (1..=cap).filter(|&n| euler_phi(n) <= bound).collect()
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    let mut f = &IntPoly::monomial(n as usize) - &IntPoly::one();
    for d in 1..n {
        if n % d == 0 {
            f = f.div_exact(&cyclotomic(d)).expect("cyclotomic divisibility");
        }
    }
    f
}

/// The order `n` if `f` is the `n`-th cyclotomic polynomial.
pub fn cyclotomic_index(f: &IntPoly) -> Option<u64> {
    if !f.is_monic() || f.deg() == 0 {
        return None;
    }
    let d = f.deg() as u64;
    orders_with_phi_at_most(d).into_iter().filter(|&n| euler_phi(n) == d).find(|&n| &cyclotomic(n) == f)
}

/// `Q^{deg} Phi_n(t / Q)` scaled to an integer polynomial: the minimal
/// polynomial of `Q` times a primitive `n`-th root of unity.
pub fn scaled_cyclotomic(n: u64, q: &BigInt) -> IntPoly {
    let phi = cyclotomic(n);
    let d = phi.deg();
    let mut c = Vec::with_capacity(d + 1);
    let mut pw = BigInt::from(1);
    let mut pows = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        pows.push(pw.clone());
        pw *= q;
    }
    for i in 0..=d {
        c.push(phi.coeff(i) * &pows[d - i]);
    }
    IntPoly::new(c)
}
