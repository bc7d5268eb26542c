//! Power sums, elementary symmetric functions and characteristic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::matrix::RatMatrix;
use super::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetricError {
    #[error("expected {expected} power sums, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("exterior power {i} exceeds dimension {dim}")]
    IndexTooLarge { i: usize, dim: usize },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Elementary symmetric functions `e_0..e_r` from power sums `s_1..s_r`.
pub fn elementary_from_power_sums(s: &[BigRational]) -> Vec<BigRational> {
    let mut e = vec![BigRational::one()];
    for k in 1..=s.len() {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let t = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        e.push(acc / rat(k as i64));
    }
    e
}

/// Monic characteristic polynomial with the given power sums, ascending
/// coefficients `c_0, .., c_{r-1}, 1` where `c_{r-i} = (-1)^i e_i`.
pub fn charpoly_from_power_sums(r: usize, s: &[BigRational]) -> Result<Vec<BigRational>, SymmetricError> {
    if r == 0 || s.len() != r {
        return Err(SymmetricError::LengthMismatch { expected: r.max(1), got: s.len() });
    }
    let e = elementary_from_power_sums(s);
    let mut c = vec![BigRational::zero(); r + 1];
    for (i, ei) in e.iter().enumerate() {
        c[r - i] = if i % 2 == 0 { ei.clone() } else { -ei };
    }
    Ok(c)
}

fn mat_mul_rat(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

/// `Tr(M), Tr(M^2), .., Tr(M^k)`.
pub fn trace_powers(m: &RatMatrix, k: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(k);
    let mut p = m.clone();
    for step in 0..k {
        out.push((0..p.len()).map(|i| p[i][i].clone()).sum());
        if step + 1 < k {
            p = mat_mul_rat(&p, m);
        }
    }
    out
}

fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for k in (1..=n.min(max)).rev() {
        cur.push(k);
        partitions(n - k, k, cur, out);
        cur.pop();
    }
}

/// Trace of the normalized antisymmetrizer composed with `M^{⊗i}` on the
/// `i`-fold tensor power, summed over cycle types of the symmetric group.
pub fn antisymmetrizer_trace(m: &RatMatrix, i: usize) -> Result<BigRational, SymmetricError> {
    let dim = m.len();
    if m.iter().any(|r| r.len() != dim) {
        return Err(SymmetricError::NotSquare);
    }
    if i > dim {
        return Err(SymmetricError::IndexTooLarge { i, dim });
    }
    if i == 0 {
        return Ok(BigRational::one());
    }
    let p = trace_powers(m, i);
    let mut parts = Vec::new();
    partitions(i, i, &mut Vec::new(), &mut parts);
    let mut total = BigRational::zero();
    for lambda in parts {
        // class size / i! = 1 / prod(k^{m_k} m_k!)
        let mut counts = vec![0usize; i + 1];
        for &k in &lambda {
            counts[k] += 1;
        }
        let mut denom = BigInt::one();
        let mut term = BigRational::one();
        for (k, &mk) in counts.iter().enumerate().skip(1) {
            for j in 1..=mk {
                denom *= BigInt::from(k * j);
                term *= &p[k - 1];
            }
        }
        let sign_odd = (i - lambda.len()) % 2 == 1;
        let v = term / BigRational::from_integer(denom);
        if sign_odd {
            total -= v;
        } else {
            total += v;
        }
    }
    Ok(total)
}

/// Power sums `s_1..s_count` of the roots of a monic integer polynomial.
pub fn power_sums(f: &IntPoly, count: usize) -> Vec<BigInt> {
    assert!(f.is_monic(), "power sums need a monic polynomial");
    let n = f.deg();
    let a = |j: usize| f.coeff(j);
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut acc = BigInt::zero();
        for j in 1..k.min(n + 1) {
            acc += a(n - j) * &s[k - j - 1];
        }
        if k <= n {
            acc += a(n - k) * BigInt::from(k);
        }
        s.push(-acc);
    }
    s
}

/// Monic degree-`n` polynomial whose roots have power sums `s_1..s_n`, or
/// `None` when the coefficients are not integral.
pub fn poly_from_power_sums(n: usize, s: &[BigInt]) -> Option<IntPoly> {
    assert!(s.len() >= n);
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let t = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return None;
        }
        e.push(q);
    }
    let mut c = vec![BigInt::zero(); n + 1];
    for (i, ei) in e.into_iter().enumerate() {
        c[n - i] = if i % 2 == 0 { ei } else { -ei };
    }
    Some(IntPoly::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::{det_rat, int_matrix, to_rat};

    fn rv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn small_charpolys() {
        assert_eq!(charpoly_from_power_sums(2, &rv(&[3, 5])).unwrap(), rv(&[2, -3, 1]));
        assert_eq!(charpoly_from_power_sums(3, &rv(&[3, 3, 3])).unwrap(), rv(&[-1, 3, -3, 1]));
        assert_eq!(charpoly_from_power_sums(2, &rv(&[0, -4])).unwrap(), rv(&[2, 0, 1]));
        assert!(charpoly_from_power_sums(2, &rv(&[1])).is_err());
        assert!(charpoly_from_power_sums(0, &[]).is_err());
    }

    #[test]
    fn upper_triangular_matches_det() {
        // det(tI - [[1,1],[0,2]]) at t = 0, 1, 2 determines the quadratic
        let m = to_rat(&int_matrix(&[vec![1, 1], vec![0, 2]]));
        let s = trace_powers(&m, 2);
        let c = charpoly_from_power_sums(2, &s).unwrap();
        for t in 0..3 {
            let shifted: RatMatrix = (0..2)
                .map(|i| (0..2).map(|j| if i == j { rat(t) - &m[i][j] } else { -m[i][j].clone() }).collect())
                .collect();
            let val: BigRational = c.iter().rev().fold(BigRational::zero(), |acc, ci| acc * rat(t) + ci);
            assert_eq!(det_rat(&shifted), val);
        }
    }

    #[test]
    fn antisymmetrizer_examples() {
        let d = to_rat(&int_matrix(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]));
        assert_eq!(antisymmetrizer_trace(&d, 2).unwrap(), rat(11));
        assert_eq!(antisymmetrizer_trace(&d, 3).unwrap(), rat(6));
        let id: RatMatrix = (0..4).map(|i| (0..4).map(|j| rat((i == j) as i64)).collect()).collect();
        assert_eq!(antisymmetrizer_trace(&id, 4).unwrap(), rat(1));
        assert_eq!(antisymmetrizer_trace(&id, 5), Err(SymmetricError::IndexTooLarge { i: 5, dim: 4 }));
    }

    #[test]
    fn power_sum_round_trip() {
        let f = IntPoly::from_i64(&[9, -3, 2, -1, 1]);
        let s = power_sums(&f, 8);
        assert_eq!(poly_from_power_sums(4, &s).unwrap(), f);
        // roots of t^2 + 2 are ±i√2: s_1 = 0, s_2 = -4, s_4 = 8
        let s = power_sums(&IntPoly::from_i64(&[2, 0, 1]), 4);
        assert_eq!(s, vec![0, -4, 0, 8].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert!(poly_from_power_sums(1, &[BigInt::from(1), BigInt::from(0)]).is_some());
        assert!(poly_from_power_sums(2, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }
}
