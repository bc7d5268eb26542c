//! Multiplicative relations among Frobenius eigenvalues.
//!
//! Candidates come from lattice reduction on certified root arguments. A
//! candidate is accepted only after an exact proof: the polynomial whose roots
//! are all products of conjugates with the candidate's exponents must vanish
//! at the predicted rational value, and a Taylor bound must show that the
//! actual product is that root and not a neighbouring one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::fixed::{disk_turn_bounds, round_rational};
use crate::arith::matrix::{hnf, integer_left_kernel, lll, IntMatrix};
use crate::arith::roots::{sqrt_bounds, BoxedRoot};
use crate::arith::symmetric::{poly_from_power_sums, power_sums};
use crate::arith::IntPoly;
use crate::weil::WeilPolynomial;

use super::character::pairing_rows;

#[derive(Clone, Debug)]
pub struct RelationConfig {
    /// Sup-norm bound on the exponents of relations searched for.
    pub height: u32,
    /// Initial working precision of the root arguments, in bits.
    pub start_bits: u64,
    pub escalations: u32,
    /// Largest composed polynomial degree attempted during certification.
    pub degree_cap: usize,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig { height: 32, start_bits: 128, escalations: 10, degree_cap: 512 }
    }
}

/// `exp(2 pi i numerator / order)` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub numerator: u64,
    pub order: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { numerator: 0, order: 1 }
    }

    pub fn new(numerator: i64, order: u64) -> Self {
        let n = numerator.rem_euclid(order as i64) as u64;
        let g = n.gcd(&order).max(1);
        let (n, o) = if n == 0 { (0, 1) } else { (n / g, order / g) };
        RootOfUnity { numerator: n, order: o }
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn mul(&self, o: &RootOfUnity) -> RootOfUnity {
        let l = self.order.lcm(&o.order);
        RootOfUnity::new((self.numerator * (l / self.order) + o.numerator * (l / o.order)) as i64, l)
    }

    pub fn pow(&self, e: i64) -> RootOfUnity {
        RootOfUnity::new((self.numerator as i64).wrapping_mul(e.rem_euclid(self.order as i64)), self.order)
    }
}

/// An exponent vector `n` on the distinct roots with
/// `prod z_i^{n_i} = zeta q^{m sum(n)/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub exponents: Vec<i64>,
    pub zeta: RootOfUnity,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationLattice {
    pub dim: usize,
    /// Basis of all `n` whose product is a root of unity times a power of `sqrt(q^m)`.
    pub basis: Vec<Relation>,
    /// Basis of the sublattice with `zeta = 1`.
    pub trivial_basis: Vec<Vec<i64>>,
    /// Basis of the pairing relations.
    pub pairing_basis: Vec<Vec<i64>>,
    /// `(upper, lower)` root indices of each conjugate pair.
    pub cm_pairs: Vec<(usize, usize)>,
    /// Exponent vectors on the pair representatives (saturated).
    pub angle_relations: Vec<Vec<i64>>,
    pub angle_rank: usize,
    /// Whether every relation of height at most the bound is accounted for.
    pub complete: bool,
    pub height_bound: u32,
    pub precision_bits: u64,
}

impl RelationLattice {
    /// Whether `n` is an integer combination of the basis.
    pub fn contains(&self, n: &[i64]) -> bool {
        lattice_member(&to_big(&self.basis.iter().map(|r| r.exponents.clone()).collect::<Vec<_>>()), &big_vec(n))
            .is_some()
    }

    /// `zeta` for an integer combination of the basis.
    pub fn zeta_of(&self, n: &[i64]) -> Option<RootOfUnity> {
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| r.exponents.clone()).collect();
        let coeffs = solve_in_rows(&rows, n)?;
        let mut z = RootOfUnity::one();
        for (c, r) in coeffs.iter().zip(&self.basis) {
            z = z.mul(&r.zeta.pow(*c));
        }
        Some(z)
    }
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| big_vec(r)).collect()
}

fn to_small(rows: &IntMatrix) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_i64().expect("relation exponent fits in i64")).collect()).collect()
}

/// Reduce `x` against an HNF basis; `Some(())` if the remainder vanishes.
fn lattice_member(rows: &IntMatrix, x: &[BigInt]) -> Option<()> {
    let h = hnf(rows);
    let mut r = x.to_vec();
    for row in &h {
        let Some(c) = row.iter().position(|v| !v.is_zero()) else { continue };
        let (q, rem) = r[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return None;
        }
        for (rj, hj) in r.iter_mut().zip(row) {
            *rj -= &q * hj;
        }
    }
    r.iter().all(|v| v.is_zero()).then_some(())
}

/// Integer coefficients `c` with `sum c_t rows_t = x`, if any.
fn solve_in_rows(rows: &[Vec<i64>], x: &[i64]) -> Option<Vec<i64>> {
    // left kernel of [rows; -x] with last coordinate 1
    let mut m = to_big(rows);
    m.push(x.iter().map(|&v| BigInt::from(-v)).collect());
    let ker = integer_left_kernel(&m);
    let last = rows.len();
    let col: Vec<BigInt> = ker.iter().map(|k| k[last].clone()).collect();
    // find an integer combination of kernel vectors with last entry 1
    let mut g = BigInt::zero();
    let mut coef: Vec<BigInt> = vec![BigInt::zero(); ker.len()];
    for (i, c) in col.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = g.extended_gcd(c);
        for x in coef.iter_mut() {
            *x *= &e.x;
        }
        coef[i] = e.y.clone();
        g = e.gcd;
    }
    if !g.is_one() {
        return None;
    }
    let mut out = vec![BigInt::zero(); last];
    for (k, c) in ker.iter().zip(&coef) {
        for (o, v) in out.iter_mut().zip(k) {
            *o += c * v;
        }
    }
    Some(out.into_iter().map(|v| v.to_i64().unwrap()).collect())
}

/// Saturation `(L ⊗ Q) ∩ Z^g` of the row lattice.
pub fn saturate(rows: &IntMatrix, g: usize) -> IntMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    let t: IntMatrix = (0..g).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    // y with rows * y = 0
    let perp = integer_left_kernel(&t);
    if perp.is_empty() {
        return (0..g).map(|i| (0..g).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    }
    let pt: IntMatrix = (0..g).map(|j| perp.iter().map(|y| y[j].clone()).collect()).collect();
    hnf(&integer_left_kernel(&pt))
}

/// A closed complex disk with dyadic rational center.
#[derive(Clone, Debug)]
struct CDisk {
    re: BigRational,
    im: BigRational,
    r: BigRational,
}

impl CDisk {
    fn abs_hi(&self) -> BigRational {
        sqrt_bounds(&(&self.re * &self.re + &self.im * &self.im), 64).1
    }

    fn mul(&self, o: &CDisk, bits: u64) -> CDisk {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let r = self.abs_hi() * &o.r + o.abs_hi() * &self.r + &self.r * &o.r;
        CDisk { re, im, r }.round(bits)
    }

    fn round(self, bits: u64) -> CDisk {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        let f = |x: &BigRational| BigRational::new((x * &scale).floor().to_integer(), BigInt::one() << bits);
        let re = f(&self.re);
        let im = f(&self.im);
        // each coordinate moved by less than 2^-bits
        let err = BigRational::new(BigInt::from(2), BigInt::one() << bits);
        CDisk { re, im, r: self.r + err }
    }

    fn pow(&self, e: u64, bits: u64) -> CDisk {
        let mut acc = CDisk { re: BigRational::one(), im: BigRational::zero(), r: BigRational::zero() };
        for _ in 0..e {
            acc = acc.mul(self, bits);
        }
        acc
    }
}

struct Context<'a> {
    w: &'a WeilPolynomial,
    pairs: Vec<(usize, usize)>,
    cfg: RelationConfig,
    q_square: bool,
}

enum Certified {
    Yes,
    No,
    Unknown,
}

impl Context<'_> {
    /// Exact check that `prod_j u_j^{k_j} = 1`, with `u_j = z_rep(j) / sqrt(Q)`.
    fn certify(&self, k: &[BigInt], disks: &[BoxedRoot], phis: &[(BigRational, BigRational)]) -> Certified {
        let mut slots: Vec<(usize, u64)> = Vec::new();
        let mut s: u64 = 0;
        for (j, kj) in k.iter().enumerate() {
            if kj.is_zero() {
                continue;
            }
            let a = kj.abs().to_u64().unwrap();
            s += a;
            let idx = if kj.is_positive() { self.pairs[j].0 } else { self.pairs[j].1 };
            slots.push((idx, a));
        }
        if slots.is_empty() {
            return Certified::Yes;
        }
        let e: u64 = if s % 2 == 0 || self.q_square { 1 } else { 2 };
        let qm = self.w.qm();
        let c = if e == 1 && s % 2 == 1 {
            num_traits::pow(qm.sqrt(), s as usize)
        } else {
            num_traits::pow(qm.clone(), (e * s / 2) as usize)
        };
        let factors: Vec<&IntPoly> =
            slots.iter().map(|(i, _)| &self.w.factors()[self.w.roots()[*i].factor].0).collect();
        let degree: usize = factors.iter().map(|f| f.deg()).product();
        if degree > self.cfg.degree_cap {
            return Certified::Unknown;
        }
        // power sums of all products of conjugates raised to the slot exponents
        let sums: Vec<Vec<BigInt>> =
            slots.iter().zip(&factors).map(|((_, a), f)| power_sums(f, degree * (*a * e) as usize)).collect();
        let s_h: Vec<BigInt> = (1..=degree)
            .map(|t| slots.iter().zip(&sums).map(|((_, a), ps)| ps[t * (*a * e) as usize - 1].clone()).product())
            .collect();
        let Some(h) = poly_from_power_sums(degree, &s_h) else { return Certified::Unknown };
        if !h.eval(&c).is_zero() {
            return Certified::No;
        }
        // H = (x - c)^mu G with G(c) != 0
        let lin = IntPoly::linear(c.clone());
        let mut g = h;
        while let Some(r) = g.div_exact(&lin) {
            g = r;
        }
        let shifted = g.taylor_shift(&c);
        let g0 = BigRational::from_integer(shifted.coeff(0).abs());

        // ball around beta^e from the root disks
        let bits = 64 + disks.iter().map(|d| d.radius.denom().bits()).max().unwrap_or(64);
        let mut ball = CDisk { re: BigRational::one(), im: BigRational::zero(), r: BigRational::zero() };
        for (idx, a) in &slots {
            let d = &disks[*idx];
            let z = CDisk { re: d.re.clone(), im: d.im.clone(), r: d.radius.clone() };
            ball = ball.mul(&z.pow(a * e, bits), bits);
        }
        let cr = BigRational::from_integer(c.clone());
        let dre = &ball.re - &cr;
        let dist_hi = sqrt_bounds(&(&dre * &dre + &ball.im * &ball.im), bits).1;
        let rho = dist_hi + &ball.r;
        let mut rhs = BigRational::zero();
        let mut rp = BigRational::one();
        for i in 1..shifted.coeffs().len() {
            rp *= &rho;
            rhs += BigRational::from_integer(shifted.coeff(i).abs()) * &rp;
        }
        if g0 <= rhs {
            return Certified::Unknown;
        }
        if e == 2 {
            // beta = ±sqrt(Q)^s exactly; the argument interval must exclude 1/2
            let (lo, hi) = angle_sum(k, phis);
            let near_zero = (&hi - &lo) < BigRational::new(BigInt::one(), BigInt::from(4))
                && round_rational(&lo) == round_rational(&hi)
                && (&lo - BigRational::from_integer(round_rational(&lo))).abs()
                    < BigRational::new(BigInt::one(), BigInt::from(4));
            if !near_zero {
                return Certified::Unknown;
            }
        }
        Certified::Yes
    }
}

/// Interval for `sum k_j phi_j`.
fn angle_sum(k: &[BigInt], phis: &[(BigRational, BigRational)]) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (kj, (a, b)) in k.iter().zip(phis) {
        let kr = BigRational::from_integer(kj.clone());
        if kj.is_negative() {
            lo += &kr * b;
            hi += &kr * a;
        } else {
            lo += &kr * a;
            hi += &kr * b;
        }
    }
    (lo, hi)
}

pub fn relation_lattice(w: &WeilPolynomial, cfg: &RelationConfig) -> RelationLattice {
    let d = w.squarefree_degree();
    let roots = w.roots();
    let pairs: Vec<(usize, usize)> =
        (0..d).filter(|&i| roots[i].disk.im.is_positive()).map(|i| (i, w.conj_pairing()[i])).collect();
    let g = pairs.len();
    let qm = w.qm();
    let q_square = {
        let s = qm.sqrt();
        &s * &s == qm
    };
    let ctx = Context { w, pairs: pairs.clone(), cfg: cfg.clone(), q_square };
    let h = BigInt::from(cfg.height);

    let mut found: IntMatrix = Vec::new();
    let mut complete = g == 0;
    let mut bits = cfg.start_bits;
    let mut phis: Vec<(BigRational, BigRational)> = Vec::new();
    if g > 0 {
        for _ in 0..=cfg.escalations {
            let disks = w.roots_with_bits(bits + 16);
            let ph: Option<Vec<_>> = pairs.iter().map(|(i, _)| disk_turn_bounds(&disks[*i], bits + 8)).collect();
            let Some(ph) = ph else {
                bits *= 2;
                continue;
            };
            phis = ph;
            let scale = BigRational::from_integer(BigInt::one() << bits);
            let mut eps_sum = BigRational::zero();
            let mut xs = Vec::with_capacity(g);
            let mut eps = Vec::with_capacity(g);
            for (lo, hi) in &phis {
                let mid = (lo + hi) / BigInt::from(2);
                let x = round_rational(&(&mid * &scale));
                let xr = BigRational::from_integer(x.clone());
                let e1 = (&xr - lo * &scale).abs();
                let e2 = (&xr - hi * &scale).abs();
                let e = if e1 > e2 { e1 } else { e2 };
                eps_sum += &e;
                eps.push(e);
                xs.push(x);
            }
            let mut rows: IntMatrix = (0..g)
                .map(|j| {
                    let mut r: Vec<BigInt> = (0..g).map(|t| BigInt::from((t == j) as i64)).collect();
                    r.push(xs[j].clone());
                    r
                })
                .collect();
            let mut last = vec![BigInt::zero(); g];
            last.push(BigInt::one() << bits);
            rows.push(last);
            let red = lll(&rows);

            let mut prefix: IntMatrix = Vec::new();
            let mut ok = true;
            for b in &red.basis {
                let k = &b[..g];
                if k.iter().all(|x| x.is_zero()) || k.iter().any(|x| x.abs() > h) {
                    break;
                }
                let bound: BigRational =
                    k.iter().zip(&eps).map(|(kj, e)| BigRational::from_integer(kj.abs()) * e).sum();
                if BigRational::from_integer(b[g].abs()) > bound {
                    break;
                }
                match ctx.certify(k, &disks, &phis) {
                    Certified::Yes => prefix.push(k.to_vec()),
                    Certified::No => break,
                    Certified::Unknown => {
                        ok = false;
                        break;
                    }
                }
            }
            let r = prefix.len();
            let hr = BigRational::from_integer(h.clone());
            let b2 = BigRational::from_integer(BigInt::from(g as u64) * &h * &h) + (&hr * &eps_sum) * (&hr * &eps_sum);
            let gs_ok = (r..red.basis.len()).all(|t| red.gs_norm_sq(t) > b2);
            if prefix.len() > found.len() || found.is_empty() {
                found = prefix;
            }
            if ok && gs_ok {
                complete = true;
                break;
            }
            bits *= 2;
        }
    }

    let angle = if found.is_empty() { Vec::new() } else { saturate(&found, g) };
    let angle_rank = g - angle.len();

    // zeta for each saturated vector: M k lies in the certified lattice
    let mut basis: Vec<Relation> = Vec::new();
    for k in &angle {
        let mut m: u64 = 1;
        loop {
            let mk: Vec<BigInt> = k.iter().map(|x| x * m).collect();
            if lattice_member(&found, &mk).is_some() {
                break;
            }
            m += 1;
            assert!(m < 1 << 20, "saturation index is bounded");
        }
        let (lo, hi) = angle_sum(k, &phis);
        let mr = BigRational::from_integer(BigInt::from(m));
        let j_lo = round_rational(&(&lo * &mr));
        let j_hi = round_rational(&(&hi * &mr));
        assert_eq!(j_lo, j_hi, "argument precision suffices to pin the root of unity");
        let zeta = RootOfUnity::new(j_lo.mod_floor(&BigInt::from(m)).to_i64().unwrap(), m);
        let mut n = vec![0i64; d];
        for (j, kj) in k.iter().enumerate() {
            n[pairs[j].0] = kj.to_i64().unwrap();
        }
        basis.push(Relation { exponents: n, zeta });
    }
    for &(a, b) in &pairs {
        let mut n = vec![0i64; d];
        n[a] = 1;
        n[b] = 1;
        basis.push(Relation { exponents: n, zeta: RootOfUnity::one() });
    }
    for (i, r) in roots.iter().enumerate() {
        if r.disk.is_real() {
            let mut n = vec![0i64; d];
            n[i] = 1;
            let zeta = if r.disk.re.is_negative() { RootOfUnity::new(1, 2) } else { RootOfUnity::one() };
            basis.push(Relation { exponents: n, zeta });
        }
    }

    // zeta = 1 sublattice: integer kernel of the exponents of zeta modulo the common order
    let order = basis.iter().fold(1u64, |acc, r| acc.lcm(&r.zeta.order));
    let mut col: IntMatrix =
        basis.iter().map(|r| vec![BigInt::from(r.zeta.numerator * (order / r.zeta.order))]).collect();
    col.push(vec![BigInt::from(order)]);
    let ker = integer_left_kernel(&col);
    let trivial: IntMatrix = ker
        .iter()
        .map(|x| {
            let mut n = vec![BigInt::zero(); d];
            for (c, r) in x.iter().zip(&basis) {
                for (o, e) in n.iter_mut().zip(&r.exponents) {
                    *o += c * e;
                }
            }
            n
        })
        .collect();
    let trivial = hnf(&trivial);

    RelationLattice {
        dim: d,
        basis,
        trivial_basis: to_small(&trivial),
        pairing_basis: to_small(&hnf(&pairing_rows(w.conj_pairing()))),
        cm_pairs: pairs,
        angle_relations: to_small(&angle),
        angle_rank,
        complete,
        height_bound: cfg.height,
        precision_bits: bits,
    }
}
