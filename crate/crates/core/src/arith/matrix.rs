//! Exact matrix routines over the integers and rationals, plus integer
//! lattice reduction (Hermite and Smith normal forms, LLL).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(x: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| {
            let mut s = BigInt::zero();
            for (i, xi) in x.iter().enumerate() {
                if !xi.is_zero() {
                    s += xi * &m[i][j];
                }
            }
            s
        })
        .collect()
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut a: IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Row echelon form over the rationals; returns the rank.
fn rat_echelon(a: &mut RatMatrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rat(a: &RatMatrix) -> usize {
    let mut m = a.clone();
    rat_echelon(&mut m).len()
}

pub fn rank_int(a: &IntMatrix) -> usize {
    rank_rat(&to_rat(a))
}

pub fn to_rat(a: &IntMatrix) -> RatMatrix {
    a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Determinant over the rationals.
pub fn det_rat(a: &RatMatrix) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Row-style Hermite normal form of the lattice spanned by the rows; zero
/// rows are dropped. Pivots are positive and entries above a pivot are
/// reduced into `[0, pivot)`.
pub fn hnf(rows: &IntMatrix) -> IntMatrix {
    let mut a: IntMatrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // gcd-combine column c into row r
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                continue;
            }
            let eg = a[r][c].extended_gcd(&a[i][c]);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let u = &a[r][c] / &g;
            let v = &a[i][c] / &g;
            for j in c..cols {
                let x = a[r][j].clone();
                let y = a[i][j].clone();
                a[r][j] = &s * &x + &t * &y;
                a[i][j] = &u * &y - &v * &x;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for j in c..cols {
                a[r][j] = -&a[r][j];
            }
        }
        for i in 0..r {
            let f = a[i][c].div_floor(&a[r][c]);
            if !f.is_zero() {
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Basis of `{x in Z^k : x * A = 0}` for a `k x n` matrix, LLL-reduced.
pub fn integer_left_kernel(a: &IntMatrix) -> IntMatrix {
    let k = a.len();
    if k == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut aug: IntMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut r = 0;
    for c in 0..n {
        for i in r + 1..k {
            if aug[i][c].is_zero() {
                continue;
            }
            if aug[r][c].is_zero() {
                aug.swap(r, i);
                continue;
            }
            let eg = aug[r][c].extended_gcd(&aug[i][c]);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let u = &aug[r][c] / &g;
            let v = &aug[i][c] / &g;
            for j in 0..n + k {
                let x = aug[r][j].clone();
                let y = aug[i][j].clone();
                aug[r][j] = &s * &x + &t * &y;
                aug[i][j] = &u * &y - &v * &x;
            }
        }
        if r < k && !aug[r][c].is_zero() {
            r += 1;
        }
    }
    let kernel: IntMatrix =
        aug.into_iter().filter(|row| row[..n].iter().all(|x| x.is_zero())).map(|row| row[n..].to_vec()).collect();
    if kernel.is_empty() {
        return kernel;
    }
    lll(&kernel).basis
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith(a: &IntMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = false;
        while !done {
            done = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let f = m[i][t].div_floor(&m[t][t]);
                for j in 0..cols {
                    let x = &f * &m[t][j];
                    m[i][j] -= x;
                }
                for j in 0..rows {
                    let x = &f * &u[t][j];
                    u[i][j] -= x;
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    u.swap(t, i);
                    done = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let f = m[t][j].div_floor(&m[t][t]);
                for i in 0..rows {
                    let x = &f * &m[i][t];
                    m[i][j] -= x;
                }
                for i in 0..cols {
                    let x = &f * &v[i][t];
                    v[i][j] -= x;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    done = false;
                }
            }
            if done {
                // divisibility: fold an offending row into row t
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&m[i][j] % &m[t][t]).is_zero() {
                            for c in 0..cols {
                                let x = m[i][c].clone();
                                m[t][c] += x;
                            }
                            for c in 0..rows {
                                let x = u[i][c].clone();
                                u[t][c] += x;
                            }
                            done = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -&m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -&u[t][j];
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|i| m[i][i].clone()).collect();
    Smith { diag, u, v }
}

/// Result of integral LLL: reduced basis and the Gram-Schmidt determinants
/// `d_0 = 1, d_i = det(Gram(b_1..b_i))`, so `|b*_i|^2 = d_i / d_(i-1)`.
#[derive(Clone, Debug)]
pub struct LllResult {
    pub basis: IntMatrix,
    pub d: Vec<BigInt>,
}

impl LllResult {
    /// Squared Gram-Schmidt norm of the `i`-th basis vector (0-based).
    pub fn gs_norm_sq(&self, i: usize) -> BigRational {
        BigRational::new(self.d[i + 1].clone(), self.d[i].clone())
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Integral LLL with `delta = 99/100` on linearly independent rows.
pub fn lll(rows: &IntMatrix) -> LllResult {
    let n = rows.len();
    let mut b: IntMatrix = rows.clone();
    if n == 0 {
        return LllResult { basis: b, d: vec![BigInt::one()] };
    }
    let (da, db) = (BigInt::from(99), BigInt::from(100));
    // 1-based bookkeeping: d[0] = 1, lam[k][j] for j < k
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    assert!(!d[1].is_zero(), "LLL input has a zero vector");
    let mut k = 2;
    let mut kmax = 1;

    fn red(k: usize, l: usize, b: &mut IntMatrix, d: &[BigInt], lam: &mut [Vec<BigInt>]) {
        let two: BigInt = &lam[k][l] * 2;
        if two.abs() > d[l] {
            // nearest integer to lam/d
            let q = (&two + &d[l]).div_floor(&(&d[l] * BigInt::from(2)));
            let bl = b[l - 1].clone();
            for (x, y) in b[k - 1].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l];
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input rows are linearly dependent");
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &d, &mut lam);
            let lhs = &db * &d[k] * &d[k - 2];
            let rhs = &da * &d[k - 1] * &d[k - 1] - &db * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                // swap k and k-1
                b.swap(k - 1, k - 2);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut b, &d, &mut lam);
                }
                k += 1;
                break;
            }
        }
    }
    LllResult { basis: b, d }
}
