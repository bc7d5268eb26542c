//! Local structure of `Q_p ⊗ Q[π]`: one entry per prime of `Q[π]` above `p`.
//!
//! Each irreducible factor gets a `p`-maximal order by repeated ring
//! enlargement at the radical of `pO`. The primes are then read off from the
//! idempotents of `O/pO`, and the valuation of `π` at each prime from the
//! norm of `π e + (1 - e)` for a lifted idempotent `e`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::WeilPolynomial;
use crate::arith::field::{inv_mod, mulmod, PrimeField};
use crate::arith::fpmat::{left_kernel, rank, FpMatrix};
use crate::arith::fpoly;
use crate::arith::matrix::{bareiss_det, hnf, identity, mat_mul, IntMatrix};
use crate::arith::nf::{reduce_rat, vp_int, Elem, NumberField};
use crate::arith::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPrime {
    /// Local degree `[Q[π]_v : Q_p]`.
    pub degree: usize,
    pub residue_degree: usize,
    pub ramification: usize,
    /// `ord_v(π) / ord_v(q)`.
    pub slope: BigRational,
    /// Index into [`WeilPolynomial::factors`].
    pub factor: usize,
    /// Index of the prime `ιv` in the profile.
    pub iota_image: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPrimeProfile {
    pub primes: Vec<LocalPrime>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("order enlargement did not stabilize within {0} steps")]
    PrecisionExhausted(usize),
}

pub fn prime_profile(w: &WeilPolynomial) -> Result<PadicPrimeProfile, ProfileError> {
    let qm = w.qm();
    let mut primes = Vec::new();
    for (k, (f, _)) in w.factors().iter().enumerate() {
        let base = primes.len();
        for mut lp in local_primes(f, w.p(), w.a(), &qm)? {
            lp.factor = k;
            lp.iota_image += base;
            primes.push(lp);
        }
    }
    Ok(PadicPrimeProfile { primes })
}

/// A full-rank subring of `Q[θ]`. Basis rows are `basis / den` in the power
/// basis; `basis` stays upper triangular.
struct Order {
    field: NumberField,
    basis: IntMatrix,
    den: BigInt,
    one: Vec<BigInt>,
    /// `table[i][j]` = coordinates of `w_i w_j`.
    table: Vec<Vec<Vec<BigInt>>>,
}

/// `x` with `x h = v` for upper triangular `h`, if `x` is integral.
fn solve_upper(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = h.len();
    let mut x: Vec<BigInt> = Vec::with_capacity(n);
    for j in 0..n {
        let mut r = v[j].clone();
        for (i, xi) in x.iter().enumerate() {
            if !h[i][j].is_zero() {
                r -= xi * &h[i][j];
            }
        }
        let (q, rem) = r.div_rem(&h[j][j]);
        if !rem.is_zero() {
            return None;
        }
        x.push(q);
    }
    Some(x)
}

/// Rational `x` with `x h = v` for upper triangular `h`.
fn solve_upper_rat(h: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    let n = h.len();
    let mut x: Vec<BigRational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut r = v[j].clone();
        for (i, xi) in x.iter().enumerate() {
            if !h[i][j].is_zero() {
                r -= xi * &h[i][j];
            }
        }
        x.push(r / &h[j][j]);
    }
    x
}

fn combine(x: &[BigInt], rows: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (xi, row) in x.iter().zip(rows) {
        if xi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            if !r.is_zero() {
                *o += xi * r;
            }
        }
    }
    out
}

impl Order {
    /// `Z[θ]` for monic `f`.
    fn equation(field: NumberField) -> Self {
        let n = field.degree();
        // θ^k reduced, for k < 2n - 1
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
        for k in 0..2 * n - 1 {
            let e = field.pow(&field.basis(1), k as u64);
            powers.push(e.into_iter().map(|c| c.to_integer()).collect());
        }
        let table = (0..n).map(|i| (0..n).map(|j| powers[i + j].clone()).collect()).collect();
        let one = (0..n).map(|k| if k == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        Order { field, basis: identity(n), den: BigInt::one(), one, table }
    }

    /// The ring with basis `(1/p) h w` for upper triangular `h`.
    fn enlarge(&self, h: &IntMatrix, p: &BigInt) -> Self {
        let n = h.len();
        // s[i][b] = sum_a h[i][a] w_a w_b
        let s: Vec<Vec<Vec<BigInt>>> = h
            .iter()
            .map(|hi| {
                (0..n).map(|b| combine(hi, &self.table.iter().map(|r| r[b].clone()).collect::<Vec<_>>(), n)).collect()
            })
            .collect();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let u = combine(&h[j], &s[i], n);
                let x = solve_upper(h, &u).expect("basis does not span a ring");
                let c: Vec<BigInt> = x
                    .into_iter()
                    .map(|c| {
                        let (q, r) = c.div_rem(p);
                        assert!(r.is_zero(), "basis does not span a ring");
                        q
                    })
                    .collect();
                table[j][i] = c.clone();
                table[i][j] = c;
            }
        }
        let scaled: Vec<BigInt> = self.one.iter().map(|c| c * p).collect();
        let one = solve_upper(h, &scaled).expect("1 lies in the enlarged ring");
        let basis = mat_mul(h, &self.basis);
        Order { field: self.field.clone(), basis, den: &self.den * p, one, table }
    }

    /// Coordinates of a field element in this basis.
    fn coords(&self, x: &Elem) -> Vec<BigRational> {
        let d = BigRational::from_integer(self.den.clone());
        let v: Vec<BigRational> = x.iter().map(|c| c * &d).collect();
        solve_upper_rat(&self.basis, &v)
    }

    fn to_field(&self, x: &[BigInt]) -> Elem {
        combine(x, &self.basis, x.len()).into_iter().map(|c| BigRational::new(c, self.den.clone())).collect()
    }

    fn table_mod(&self, p: u64) -> Vec<Vec<Vec<u64>>> {
        let pb = BigInt::from(p);
        self.table
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()).collect())
            .collect()
    }

    fn one_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        self.one.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()
    }
}

fn mul_fp(t: &[Vec<Vec<u64>>], x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    let n = x.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let c = mulmod(x[i], y[j], p);
            for (o, tk) in out.iter_mut().zip(&t[i][j]) {
                *o = (*o + mulmod(c, *tk, p)) % p;
            }
        }
    }
    out
}

fn pow_fp(t: &[Vec<Vec<u64>>], x: &[u64], mut e: u64, one: &[u64], p: u64) -> Vec<u64> {
    let mut base = x.to_vec();
    let mut acc = one.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_fp(t, &acc, &base, p);
        }
        base = mul_fp(t, &base, &base, p);
        e >>= 1;
    }
    acc
}

fn mul_int(t: &[Vec<Vec<BigInt>>], x: &[BigInt], y: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = x.len();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let c = &x[i] * &y[j];
            for (o, tk) in out.iter_mut().zip(&t[i][j]) {
                *o += &c * tk;
            }
        }
    }
    out.into_iter().map(|c| c.mod_floor(m)).collect()
}

fn unit_rows(n: usize, scale: &BigInt) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { scale.clone() } else { BigInt::zero() }).collect()).collect()
}

fn lift(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Basis of the radical of `O/pO`: the kernel of `x -> x^{p^j}` with `p^j >= n`.
fn radical(t: &[Vec<Vec<u64>>], one: &[u64], n: usize, p: u64) -> FpMatrix {
    let mut j = 0u32;
    let mut pj: u128 = 1;
    while pj < n as u128 {
        pj *= p as u128;
        j += 1;
    }
    let images: FpMatrix = (0..n)
        .map(|i| {
            let mut x: Vec<u64> = (0..n).map(|k| (k == i) as u64).collect();
            for _ in 0..j {
                x = pow_fp(t, &x, p, one, p);
            }
            x
        })
        .collect();
    left_kernel(&images, p)
}

fn p_maximal_order(f: &IntPoly, p: u64) -> Result<Order, ProfileError> {
    let n = f.deg();
    let mut order = Order::equation(NumberField::new(f.clone()));
    let disc = f.discriminant();
    if disc.is_zero() || vp_int(&disc, p) < 2 {
        return Ok(order);
    }
    // each enlargement divides the index by at least p
    let limit = vp_int(&disc, p) as usize / 2 + 1;
    let pb = BigInt::from(p);
    for _ in 0..=limit {
        let t = order.table_mod(p);
        let one = order.one_mod(p);
        let rad = radical(&t, &one, n, p);
        let mut gens: IntMatrix = rad.iter().map(|v| lift(v)).collect();
        gens.extend(unit_rows(n, &pb));
        let ip = hnf(&gens);
        // x -> (y -> x y) in End(I_p / p I_p)
        let m: FpMatrix = (0..n)
            .map(|i| {
                let mut row = Vec::with_capacity(n * n);
                for y in &ip {
                    let z = combine(y, &order.table[i], n);
                    let c = solve_upper(&ip, &z).expect("I_p is an ideal");
                    row.extend(c.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()));
                }
                row
            })
            .collect();
        let ker = left_kernel(&m, p);
        if ker.is_empty() {
            return Ok(order);
        }
        let mut gens: IntMatrix = ker.iter().map(|v| lift(v)).collect();
        gens.extend(unit_rows(n, &pb));
        let h = hnf(&gens);
        order = order.enlarge(&h, &pb);
    }
    Err(ProfileError::PrecisionExhausted(limit))
}

/// Minimal polynomial of `x` in the unital algebra with identity `e`.
fn min_poly(t: &[Vec<Vec<u64>>], x: &[u64], e: &[u64], p: u64) -> Vec<u64> {
    let mut powers: FpMatrix = vec![e.to_vec()];
    loop {
        let next = mul_fp(t, powers.last().unwrap(), x, p);
        powers.push(next);
        let ker = left_kernel(&powers, p);
        if let Some(k) = ker.first() {
            return k.clone();
        }
    }
}

fn split_idempotents(t: &[Vec<Vec<u64>>], one: &[u64], fixed: &FpMatrix, p: u64) -> Vec<Vec<u64>> {
    let field = PrimeField::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut idems = vec![one.to_vec()];
    for b in fixed {
        let mut next = Vec::new();
        for e in &idems {
            let x = mul_fp(t, e, b, p);
            let mp = min_poly(t, &x, e, p);
            let roots = fpoly::roots(&field, &mp, &mut rng);
            if roots.len() <= 1 {
                next.push(e.clone());
                continue;
            }
            for (i, ci) in roots.iter().enumerate() {
                let mut acc = e.clone();
                for (j, cj) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let shifted: Vec<u64> =
                        x.iter().zip(e).map(|(xv, ev)| (xv + p - mulmod(*cj, *ev, p)) % p).collect();
                    let s = inv_mod((ci + p - cj) % p, p);
                    acc = mul_fp(t, &acc, &shifted, p).into_iter().map(|v| mulmod(v, s, p)).collect();
                }
                next.push(acc);
            }
        }
        idems = next;
    }
    idems
}

fn local_primes(f: &IntPoly, p: u64, a: u32, qm: &BigInt) -> Result<Vec<LocalPrime>, ProfileError> {
    let n = f.deg();
    let c0 = f.coeff(0);
    if n == 1 {
        let v = vp_int(&c0, p);
        return Ok(vec![LocalPrime {
            degree: 1,
            residue_degree: 1,
            ramification: 1,
            slope: BigRational::new(BigInt::from(v), BigInt::from(a)),
            factor: 0,
            iota_image: 0,
        }]);
    }
    let order = p_maximal_order(f, p)?;
    let t = order.table_mod(p);
    let one = order.one_mod(p);
    let rad = radical(&t, &one, n, p);
    let frob: FpMatrix = (0..n)
        .map(|i| {
            let x: Vec<u64> = (0..n).map(|k| (k == i) as u64).collect();
            let mut y = pow_fp(&t, &x, p, &one, p);
            y[i] = (y[i] + p - 1) % p;
            y
        })
        .collect();
    let fixed = left_kernel(&frob, p);
    let idems = if fixed.len() == 1 { vec![one.clone()] } else { split_idempotents(&t, &one, &fixed, p) };
    debug_assert_eq!(idems.len(), fixed.len());

    let big_n = vp_int(&c0, p) + 1;
    let pn = num_traits::pow(BigInt::from(p), big_n as usize);
    let theta = order.field.basis(1);
    let theta_c: Vec<BigInt> = order.coords(&theta).into_iter().map(|c| c.to_integer()).collect();
    let iota_theta = {
        let inv = order.field.inverse(&theta).expect("θ is a unit in the field");
        order.field.scale(&inv, &BigRational::from_integer(qm.clone()))
    };
    let mut out = Vec::new();
    let mut iota_elems = Vec::new();
    for e in &idems {
        let mult: FpMatrix = (0..n)
            .map(|i| {
                let x: Vec<u64> = (0..n).map(|k| (k == i) as u64).collect();
                mul_fp(&t, e, &x, p)
            })
            .collect();
        let degree = rank(&mult, p);
        let mut with_rad = mult.clone();
        with_rad.extend(rad.iter().cloned());
        let residue_degree = rank(&with_rad, p) - rad.len();

        // Newton lift e <- 3e^2 - 2e^3 to precision p^N
        let mut el = lift(e);
        let mut prec = 1u64;
        while prec < big_n {
            let e2 = mul_int(&order.table, &el, &el, &pn);
            let e3 = mul_int(&order.table, &e2, &el, &pn);
            el = e2
                .iter()
                .zip(&e3)
                .map(|(a2, a3)| {
                    let v: BigInt = a2 * 3 - a3 * 2;
                    v.mod_floor(&pn)
                })
                .collect();
            prec *= 2;
        }
        // the norm is a polynomial in the coordinates and its valuation is below N
        let x: Vec<BigInt> = mul_int(&order.table, &theta_c, &el, &pn)
            .iter()
            .zip(order.one.iter().zip(&el))
            .map(|(te, (o, e))| (te + o - e).mod_floor(&pn))
            .collect();
        let mx: IntMatrix = (0..n).map(|i| combine(&x, &order.table[i], n)).collect();
        let v = vp_int(&bareiss_det(mx), p);
        let slope = BigRational::new(BigInt::from(v), BigInt::from(degree as i64 * a as i64));

        // ι(e): substitute θ -> Q/θ
        let ef = order.to_field(&el);
        let mut acc = order.field.zero();
        for c in ef.iter().rev() {
            acc = order.field.mul(&acc, &iota_theta);
            acc[0] += c;
        }
        let coords: Vec<u64> = order.coords(&acc).iter().map(|c| reduce_rat(c, p)).collect();
        iota_elems.push(coords);
        out.push(LocalPrime {
            degree,
            residue_degree,
            ramification: degree / residue_degree.max(1),
            slope,
            factor: 0,
            iota_image: 0,
        });
    }
    for (i, ie) in iota_elems.iter().enumerate() {
        out[i].iota_image = idems.iter().position(|e| e == ie).expect("ι permutes the idempotents");
    }
    Ok(out)
}
