//! Certified isolation of complex roots.
//!
//! Approximations come from an Aberth iteration in big fixed-point
//! arithmetic. They are certified with Weierstrass corrections computed
//! exactly: the roots of a squarefree `p` with approximations `z_i` are the
//! eigenvalues of `diag(z) - W 1^T` with `W_i = p(z_i) / (lc * prod_(j != i)(z_i - z_j))`,
//! so by Gerschgorin each disk `D(z_i, n |W_i|)` that is disjoint from the
//! others holds exactly one root.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;

/// A disk in the complex plane with rational center and radius, holding
/// exactly `multiplicity` roots (with multiplicity) of its source polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxedRoot {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
    pub multiplicity: usize,
}

impl BoxedRoot {
    /// Whether the center is on the real axis; for a real polynomial this is
    /// equivalent to the enclosed root being real.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn center_abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Rational bounds `lo <= |z|^2 <= hi` for every `z` in the disk.
    pub fn abs_sq_bounds(&self) -> (BigRational, BigRational) {
        let c2 = self.center_abs_sq();
        let (clo, chi) = sqrt_bounds(&c2, 64 + self.radius_bits());
        let lo = &clo - &self.radius;
        let lo = if lo.is_negative() { BigRational::zero() } else { &lo * &lo };
        let hi = &chi + &self.radius;
        (lo, &hi * &hi)
    }

    fn radius_bits(&self) -> u64 {
        // enough bits to resolve the radius
        let d = self.radius.denom().bits();
        let n = self.radius.numer().bits();
        d.saturating_sub(n) + 8
    }

    /// Whether the closed disks intersect.
    pub fn intersects(&self, other: &BoxedRoot) -> bool {
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let s = &self.radius + &other.radius;
        &dr * &dr + &di * &di <= &s * &s
    }

    /// Whether the point lies in the closed disk.
    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        let dr = &self.re - re;
        let di = &self.im - im;
        &dr * &dr + &di * &di <= &self.radius * &self.radius
    }

    /// Floating-point view of the center, for display only.
    pub fn center_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// `ceil(sqrt(n))` for `n >= 0`.
pub fn ceil_sqrt(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1
    }
}

/// Rational bounds on `sqrt(x)` with absolute error about `2^-bits`.
pub fn sqrt_bounds(x: &BigRational, bits: u64) -> (BigRational, BigRational) {
    assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let den = BigInt::one() << bits;
    let num = x.numer() * &scale;
    let lo_sq = num.div_floor(x.denom());
    let lo = lo_sq.sqrt();
    let hi_sq = -((-num).div_floor(x.denom()));
    let hi = ceil_sqrt(&hi_sq);
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

#[derive(Clone, Debug, PartialEq)]
struct CFix {
    re: BigInt,
    im: BigInt,
}

impl CFix {
    fn zero() -> Self {
        CFix { re: BigInt::zero(), im: BigInt::zero() }
    }
    fn add(&self, o: &CFix) -> CFix {
        CFix { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &CFix) -> CFix {
        CFix { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &CFix, prec: u64) -> CFix {
        CFix { re: (&self.re * &o.re - &self.im * &o.im) >> prec, im: (&self.re * &o.im + &self.im * &o.re) >> prec }
    }
    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &CFix, prec: u64) -> Option<CFix> {
        let n = o.norm_sq();
        if n.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << prec;
        let im = (&self.im * &o.re - &self.re * &o.im) << prec;
        Some(CFix { re: re.div_floor(&n), im: im.div_floor(&n) })
    }
    fn rescale(&self, from: u64, to: u64) -> CFix {
        if to >= from {
            CFix { re: &self.re << (to - from), im: &self.im << (to - from) }
        } else {
            CFix { re: &self.re >> (from - to), im: &self.im >> (from - to) }
        }
    }
    fn conj(&self) -> CFix {
        CFix { re: self.re.clone(), im: -&self.im }
    }
}

fn f64_to_fix(x: f64, prec: u64) -> BigInt {
    let m = BigInt::from((x * 2f64.powi(52)).round() as i64);
    if prec >= 52 {
        m << (prec - 52)
    } else {
        m >> (52 - prec)
    }
}

/// Evaluate `p` and `p'` at `z` in fixed point.
fn eval_pair(p: &IntPoly, z: &CFix, prec: u64) -> (CFix, CFix) {
    let mut v = CFix::zero();
    let mut d = CFix::zero();
    for c in p.coeffs().iter().rev() {
        d = d.mul(z, prec).add(&v);
        v = v.mul(z, prec);
        v.re += c << prec;
    }
    (v, d)
}

fn log2_abs(c: &BigInt) -> f64 {
    let bits = c.bits();
    if bits <= 60 {
        c.to_f64().unwrap().abs().log2()
    } else {
        let top = (c >> (bits - 53)).to_f64().unwrap().abs();
        top.log2() + (bits - 53) as f64
    }
}

fn initial_points(p: &IntPoly, prec: u64) -> Vec<CFix> {
    let n = p.deg();
    let lc = log2_abs(&p.lc());
    let mut rmax: f64 = -60.0;
    for (k, c) in p.coeffs().iter().enumerate().take(n) {
        if !c.is_zero() {
            let r = (log2_abs(c) - lc) / (n - k) as f64;
            rmax = rmax.max(r);
        }
    }
    let r = 2f64.powf(rmax.min(900.0)) * 1.1;
    (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            CFix { re: f64_to_fix(r * a.cos(), prec), im: f64_to_fix(r * a.sin(), prec) }
        })
        .collect()
}

/// Run Aberth sweeps; returns whether the last sweep's corrections all fell
/// below `2^-(prec - 16)` relative to the iterate size.
fn aberth(p: &IntPoly, z: &mut [CFix], prec: u64, max_iter: usize) -> bool {
    let n = z.len();
    let one = CFix { re: BigInt::one() << prec, im: BigInt::zero() };
    for _ in 0..max_iter {
        let mut converged = true;
        for i in 0..n {
            let (v, d) = eval_pair(p, &z[i], prec);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let ratio = match v.div(&d, prec) {
                Some(r) => r,
                None => {
                    // nudge off a critical point
                    z[i].re += BigInt::one() << (prec / 2);
                    converged = false;
                    continue;
                }
            };
            let mut s = CFix::zero();
            let mut clash = false;
            for j in 0..n {
                if j != i {
                    match one.div(&z[i].sub(&z[j]), prec) {
                        Some(t) => s = s.add(&t),
                        None => clash = true,
                    }
                }
            }
            if clash {
                z[i].im += BigInt::one() << (prec / 2);
                converged = false;
                continue;
            }
            let denom = one.sub(&ratio.mul(&s, prec));
            let w = ratio.div(&denom, prec).unwrap_or(ratio);
            z[i] = z[i].sub(&w);
            // |w| <= 2^(16 - prec) (1 + |z|)
            let tol = (BigInt::one() + (z[i].norm_sq() >> (2 * prec))) << 34;
            if w.norm_sq() > tol {
                converged = false;
            }
        }
        if converged {
            return true;
        }
    }
    false
}

/// Make the approximation set closed under conjugation. Returns the indices
/// ordered as: real roots by increasing real part, then for each root in the
/// upper half plane (by real part, then imaginary part) the root followed by
/// its conjugate. `None` when the approximations cannot be paired.
fn symmetrize(z: &mut [CFix], prec: u64) -> Option<Vec<usize>> {
    let n = z.len();
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, w) in z.iter().enumerate() {
        // |im| below 2^(-prec/4) * (1 + |z|) counts as real
        let mag = (w.norm_sq() >> prec).sqrt() + (BigInt::one() << prec);
        let thr = mag >> (prec / 4);
        if w.im.abs() <= thr {
            real.push(i);
        } else if w.im.is_positive() {
            upper.push(i);
        } else {
            lower.push(i);
        }
    }
    if upper.len() != lower.len() {
        return None;
    }
    for &i in &real {
        z[i].im = BigInt::zero();
    }
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    for &u in &upper {
        let c = z[u].conj();
        let mut best: Option<(usize, BigInt)> = None;
        for &l in &lower {
            if used[l] {
                continue;
            }
            let d = c.sub(&z[l]).norm_sq();
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((l, d));
            }
        }
        let (l, _) = best?;
        used[l] = true;
        z[l] = c;
        pairs.push((u, l));
    }
    real.sort_by(|&a, &b| z[a].re.cmp(&z[b].re));
    pairs.sort_by(|&(a, _), &(b, _)| z[a].re.cmp(&z[b].re).then(z[a].im.cmp(&z[b].im)));
    let mut order = real;
    for (u, l) in pairs {
        order.push(u);
        order.push(l);
    }
    Some(order)
}

/// Gerschgorin radii as integers `R_i` in units of `2^-(2 prec)`, or `None`
/// when two approximations coincide.
fn weierstrass_radii(p: &IntPoly, z: &[CFix], prec: u64) -> Option<Vec<BigInt>> {
    let n = z.len();
    let e = 2 * prec;
    let lc = p.lc();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (nre, nim) = exact_eval_scaled(p, &z[i], prec);
        let mut dre = BigInt::one();
        let mut dim = BigInt::zero();
        for j in 0..n {
            if j == i {
                continue;
            }
            let a = &z[i].re - &z[j].re;
            let b = &z[i].im - &z[j].im;
            if a.is_zero() && b.is_zero() {
                return None;
            }
            let re = &dre * &a - &dim * &b;
            let im = &dre * &b + &dim * &a;
            dre = re;
            dim = im;
        }
        let nn = &nre * &nre + &nim * &nim;
        if nn.is_zero() {
            out.push(BigInt::one());
            continue;
        }
        let dd = &dre * &dre + &dim * &dim;
        // W = N / (2^prec lc D); radius^2 >= n^2 |W|^2 in units of 4^-e
        let x = (nn * BigInt::from(n * n)) << (2 * (e - prec));
        let y = &lc * &lc * dd;
        let q = -((-x).div_floor(&y));
        out.push(ceil_sqrt(&q).max(BigInt::one()));
    }
    Some(out)
}

/// `p(z) 2^(prec n)` for `z = Z / 2^prec`, i.e. `sum c_k Z^k 2^(prec (n-k))`.
fn exact_eval_scaled(p: &IntPoly, z: &CFix, prec: u64) -> (BigInt, BigInt) {
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for (step, c) in p.coeffs().iter().rev().enumerate() {
        let r = &re * &z.re - &im * &z.im;
        let i = &re * &z.im + &im * &z.re;
        re = r + (c << (prec * step as u64));
        im = i;
    }
    (re, im)
}

fn to_box(z: &CFix, r: &BigInt, prec: u64, mult: usize) -> BoxedRoot {
    let den = BigInt::one() << prec;
    BoxedRoot {
        re: BigRational::new(z.re.clone(), den.clone()),
        im: BigRational::new(z.im.clone(), den),
        radius: BigRational::new(r.clone(), BigInt::one() << (2 * prec)),
        multiplicity: mult,
    }
}

/// Persistent isolation state for a list of pairwise coprime squarefree
/// polynomials; root indices stay fixed under refinement.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    polys: Vec<IntPoly>,
    mults: Vec<usize>,
    prec: u64,
    approx: Vec<Vec<CFix>>,
    boxes: Vec<Vec<BoxedRoot>>,
}

impl RootIsolation {
    /// Isolate the roots of each polynomial; `mults` is attached to the boxes.
    pub fn new(polys: Vec<IntPoly>, mults: Vec<usize>) -> Self {
        assert_eq!(polys.len(), mults.len());
        assert!(polys.iter().all(|p| p.deg() >= 1), "constant polynomial has no roots");
        let mut prec = 64;
        let mut approx: Vec<Vec<CFix>> = polys.iter().map(|p| initial_points(p, prec)).collect();
        for (p, z) in polys.iter().zip(approx.iter_mut()) {
            aberth(p, z, prec, 4000);
        }
        loop {
            if let Some(boxes) = Self::certify(&polys, &mults, &mut approx, prec, None) {
                return RootIsolation { polys, mults, prec, approx, boxes };
            }
            prec = Self::escalate(&polys, &mut approx, prec);
        }
    }

    fn escalate(polys: &[IntPoly], approx: &mut [Vec<CFix>], prec: u64) -> u64 {
        let np = prec * 2;
        for (p, z) in polys.iter().zip(approx.iter_mut()) {
            for w in z.iter_mut() {
                *w = w.rescale(prec, np);
            }
            aberth(p, z, np, 200);
        }
        np
    }

    /// Certify the current approximations. With `previous`, each new disk
    /// must meet exactly one old disk of the same polynomial, and is stored at
    /// that index.
    fn certify(
        polys: &[IntPoly],
        mults: &[usize],
        approx: &mut [Vec<CFix>],
        prec: u64,
        previous: Option<&[Vec<BoxedRoot>]>,
    ) -> Option<Vec<Vec<BoxedRoot>>> {
        let mut all = Vec::with_capacity(polys.len());
        for (k, p) in polys.iter().enumerate() {
            let order = symmetrize(&mut approx[k], prec)?;
            let radii = weierstrass_radii(p, &approx[k], prec)?;
            let mut boxes: Vec<BoxedRoot> =
                order.iter().map(|&i| to_box(&approx[k][i], &radii[i], prec, mults[k])).collect();
            let mut ordered: Vec<CFix> = order.iter().map(|&i| approx[k][i].clone()).collect();
            if let Some(prev) = previous {
                let old = &prev[k];
                let mut slot = vec![usize::MAX; boxes.len()];
                for (i, b) in boxes.iter().enumerate() {
                    let hits: Vec<usize> = (0..old.len()).filter(|&j| old[j].intersects(b)).collect();
                    if hits.len() != 1 {
                        return None;
                    }
                    slot[i] = hits[0];
                }
                let mut seen = vec![false; old.len()];
                for &s in &slot {
                    if seen[s] {
                        return None;
                    }
                    seen[s] = true;
                }
                let mut nb = boxes.clone();
                let mut na = ordered.clone();
                for (i, &s) in slot.iter().enumerate() {
                    nb[s] = boxes[i].clone();
                    na[s] = ordered[i].clone();
                }
                boxes = nb;
                ordered = na;
            }
            approx[k] = ordered;
            all.push(boxes);
        }
        // pairwise disjoint across everything
        let flat: Vec<&BoxedRoot> = all.iter().flatten().collect();
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                if flat[i].intersects(flat[j]) {
                    return None;
                }
            }
        }
        Some(all)
    }

    /// Shrink every radius to at most `bound`.
    pub fn refine(&mut self, bound: &BigRational) {
        assert!(bound.is_positive(), "radius bound must be positive");
        while self.boxes.iter().flatten().any(|b| &b.radius > bound) {
            self.prec = Self::escalate(&self.polys, &mut self.approx, self.prec);
            if let Some(b) = Self::certify(&self.polys, &self.mults, &mut self.approx, self.prec, Some(&self.boxes)) {
                self.boxes = b;
            }
        }
    }

    /// Boxes per polynomial, in the fixed index order.
    pub fn boxes(&self) -> &[Vec<BoxedRoot>] {
        &self.boxes
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }
}

/// Isolate all complex roots of `p` in disks of radius at most `radius_bound`.
/// Repeated roots come back as one disk carrying their multiplicity.
pub fn isolate_roots(p: &IntPoly, radius_bound: &BigRational) -> Vec<BoxedRoot> {
    assert!(!p.is_zero(), "the zero polynomial has no isolated roots");
    let parts = p.squarefree_decomposition();
    if parts.is_empty() {
        return Vec::new();
    }
    let (polys, mults): (Vec<IntPoly>, Vec<usize>) = parts.into_iter().unzip();
    let mut iso = RootIsolation::new(polys, mults);
    iso.refine(radius_bound);
    let mut out: Vec<BoxedRoot> = iso.boxes.into_iter().flatten().collect();
    out.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    out
}
