//! Dense linear algebra over a prime field `F_p`, entries in `[0, p)`.

use super::field::{inv_mod, mulmod};

pub type FpMatrix = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut FpMatrix, p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| a[k][c] != 0) else { continue };
        a.swap(r, k);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for k in 0..rows {
            if k != r && a[k][c] != 0 {
                let f = a[k][c];
                for j in 0..cols {
                    let t = mulmod(f, a[r][j], p);
                    a[k][j] = (a[k][j] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &FpMatrix, p: u64) -> usize {
    let mut m = a.clone();
    rref(&mut m, p).len()
}

/// Basis of `{x : x A = 0}` where `A` has `a.len()` rows.
pub fn left_kernel(a: &FpMatrix, p: u64) -> FpMatrix {
    let n = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    // right kernel of A^T
    let mut t: FpMatrix = (0..cols).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
    if cols == 0 {
        return (0..n).map(|i| unit(n, i)).collect();
    }
    let pivots = rref(&mut t, p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - t[r][f]) % p;
            }
            v
        })
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `x A` over `F_p`.
pub fn vec_mat(x: &[u64], a: &FpMatrix, p: u64) -> Vec<u64> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = vec![0u64; cols];
    for (xi, row) in x.iter().zip(a) {
        if *xi == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o = (*o + mulmod(*xi, *r, p)) % p;
        }
    }
    out
}
