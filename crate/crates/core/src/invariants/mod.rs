//! Torus invariants in tensor powers, their generation in degree two, pole
//! orders of zeta functions of tensor powers, and the transcendental part.

mod group;

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use group::QuotientGroup;

use crate::arith::cyclotomic::{cyclotomic_index, scaled_cyclotomic};
use crate::arith::IntPoly;
use crate::torus::{pairing_rows, RelationLattice};
use crate::weil::WeilPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("weight system: {0}")]
    InvalidWeights(String),
    #[error("more than {limit} partial sums in degree {n}")]
    TooManyStates { n: usize, limit: usize },
    #[error("relation lattice is incomplete")]
    IncompleteLattice,
    #[error("weight {0} is odd")]
    OddWeight(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    pub character: Vec<i64>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightSource {
    Weil { q: u64, m: u32 },
    Synthetic,
}

/// Characters in `Z^d / <relations>`, each with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    pub ambient_rank: usize,
    pub relations: Vec<Vec<i64>>,
    pub weights: Vec<Weight>,
    pub source: WeightSource,
}

/// Cap on the number of distinct partial sums tracked per degree.
pub const MAX_STATES: usize = 4_000_000;

impl WeightSystem {
    pub fn new(ambient_rank: usize, relations: Vec<Vec<i64>>, weights: Vec<Weight>) -> Result<Self, InvariantsError> {
        if relations.iter().chain(weights.iter().map(|w| &w.character)).any(|r| r.len() != ambient_rank) {
            return Err(InvariantsError::InvalidWeights("vector length differs from the ambient rank".into()));
        }
        if weights.iter().any(|w| w.multiplicity == 0) {
            return Err(InvariantsError::InvalidWeights("zero multiplicity".into()));
        }
        Ok(WeightSystem { ambient_rank, relations, weights, source: WeightSource::Synthetic })
    }

    /// The weights `ξ_σ` of a Weil polynomial, one per distinct root, in
    /// `Z^d` modulo the pairing relations.
    pub fn from_weil(w: &WeilPolynomial) -> Self {
        Self::on_roots(
            w,
            pairing_rows(w.conj_pairing()).iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect(),
        )
    }

    fn on_roots(w: &WeilPolynomial, relations: Vec<Vec<i64>>) -> Self {
        let d = w.squarefree_degree();
        let weights = w
            .roots()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut c = vec![0; d];
                c[i] = 1;
                Weight { character: c, multiplicity: w.factors()[r.factor].1 as u64 }
            })
            .collect();
        WeightSystem { ambient_rank: d, relations, weights, source: WeightSource::Weil { q: w.q(), m: w.weight() } }
    }

    pub fn dimension(&self) -> u64 {
        self.weights.iter().map(|w| w.multiplicity).sum()
    }

    pub fn group(&self) -> QuotientGroup {
        QuotientGroup::new(self.ambient_rank, &self.relations)
    }

    /// Distinct group elements among the weights with summed multiplicities.
    fn classes(&self, g: &QuotientGroup) -> Vec<(Vec<i64>, BigUint)> {
        let mut out: Vec<(Vec<i64>, BigUint)> = Vec::new();
        for w in &self.weights {
            let c = g.class_of(&w.character);
            match out.iter_mut().find(|(x, _)| *x == c) {
                Some((_, m)) => *m += w.multiplicity,
                None => out.push((c, BigUint::from(w.multiplicity))),
            }
        }
        out
    }
}

type Counts = HashMap<Vec<i64>, BigUint>;

fn sums(g: &QuotientGroup, classes: &[(Vec<i64>, BigUint)], k: usize) -> Result<Counts, InvariantsError> {
    let zero = vec![0i64; g.torsion().len() + g.free_rank()];
    let mut cur: Counts = HashMap::from([(zero, BigUint::one())]);
    for step in 0..k {
        let mut next: Counts = HashMap::new();
        for (s, c) in &cur {
            for (x, m) in classes {
                *next.entry(g.add(s, x)).or_default() += c * m;
            }
        }
        if next.len() > MAX_STATES {
            return Err(InvariantsError::TooManyStates { n: step + 1, limit: MAX_STATES });
        }
        cur = next;
    }
    Ok(cur)
}

/// Weighted number of ordered `n`-tuples of weights summing to zero.
pub fn invariant_dimension(ws: &WeightSystem, n: usize) -> Result<BigUint, InvariantsError> {
    let g = ws.group();
    let classes = ws.classes(&g);
    let a = sums(&g, &classes, n.div_ceil(2))?;
    let b = if n % 2 == 0 { a.clone() } else { sums(&g, &classes, n / 2)? };
    Ok(a.iter().filter_map(|(s, c)| b.get(&g.neg(s)).map(|d| c * d)).sum())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Weighted number of ordered `n`-tuples whose positions split into pairs
/// `(χ, -χ)`: the degree-`n` part of the subalgebra generated by degree two.
pub fn generated_dimension(ws: &WeightSystem, n: usize) -> BigUint {
    if n % 2 == 1 {
        return BigUint::zero();
    }
    let g = ws.group();
    let classes = ws.classes(&g);
    let mut seen = vec![false; classes.len()];
    // exponential generating function, truncated at degree n
    let mut egf: Vec<BigRational> = vec![BigRational::zero(); n + 1];
    egf[0] = BigRational::one();
    let mul = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    for i in 0..classes.len() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let (x, mx) = &classes[i];
        let nx = g.neg(x);
        let mut f = vec![BigRational::zero(); n + 1];
        if nx == *x {
            let m = BigInt::from(mx.clone());
            for k in (0..=n).step_by(2) {
                f[k] = BigRational::new(m.pow(k as u32), factorial(k));
            }
        } else {
            let Some(j) = classes.iter().position(|(y, _)| *y == nx) else { continue };
            seen[j] = true;
            let mm = BigInt::from(mx * &classes[j].1);
            for k in 0..=n / 2 {
                let fk = factorial(k);
                f[2 * k] = BigRational::new(mm.pow(k as u32), &fk * &fk);
            }
        }
        egf = mul(&egf, &f);
    }
    let v = &egf[n] * BigRational::from_integer(factorial(n));
    debug_assert!(v.is_integer());
    v.to_integer().to_biguint().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub n: usize,
    pub dim_invariants: BigUint,
    pub dim_generated: BigUint,
    pub generated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub rows: Vec<InvariantRow>,
    pub generated_in_degree_two: bool,
}

pub fn degree_two_generation(ws: &WeightSystem, n_max: usize) -> Result<InvariantReport, InvariantsError> {
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let dim_invariants = invariant_dimension(ws, n)?;
        let dim_generated = generated_dimension(ws, n);
        debug_assert!(dim_generated <= dim_invariants);
        rows.push(InvariantRow { n, generated: dim_generated == dim_invariants, dim_invariants, dim_generated });
    }
    let generated_in_degree_two = rows.iter().all(|r| r.generated);
    Ok(InvariantReport { rows, generated_in_degree_two })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleOrderRow {
    pub n: usize,
    /// Ordered `n`-tuples of eigenvalues with product `q^{mn/2}`.
    pub fixed_dim: BigUint,
    pub invariant_dim: BigUint,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleOrderReport {
    pub rows: Vec<PoleOrderRow>,
}

impl PoleOrderReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

fn check_lattice(w: &WeilPolynomial, rl: &RelationLattice) -> Result<(), InvariantsError> {
    assert_eq!(rl.dim, w.squarefree_degree(), "relation lattice belongs to another polynomial");
    if rl.complete {
        Ok(())
    } else {
        Err(InvariantsError::IncompleteLattice)
    }
}

/// Pole orders of the zeta function of `X^n` at the middle twist, for every
/// `n <= n_max` with `mn` even.
pub fn pole_orders(w: &WeilPolynomial, rl: &RelationLattice, n_max: usize) -> Result<PoleOrderReport, InvariantsError> {
    check_lattice(w, rl)?;
    let fixed = WeightSystem::on_roots(w, rl.trivial_basis.clone());
    let inv = WeightSystem::from_weil(w);
    let mut rows = Vec::new();
    for n in 0..=n_max {
        if (w.weight() as usize * n) % 2 == 1 {
            continue;
        }
        let fixed_dim = invariant_dimension(&fixed, n)?;
        let invariant_dim = invariant_dimension(&inv, n)?;
        rows.push(PoleOrderRow { n, equal: fixed_dim == invariant_dim, fixed_dim, invariant_dim });
    }
    Ok(PoleOrderReport { rows })
}

/// Ordered `n`-tuples of eigenvalues with product `q^j`. Every such product
/// has absolute value `q^{mn/2}`, so only `2j = mn` can contribute.
pub fn fixed_dim_at_twist(
    w: &WeilPolynomial,
    rl: &RelationLattice,
    n: usize,
    j: i64,
) -> Result<BigUint, InvariantsError> {
    check_lattice(w, rl)?;
    if 2 * j != w.weight() as i64 * n as i64 {
        return Ok(BigUint::zero());
    }
    invariant_dimension(&WeightSystem::on_roots(w, rl.trivial_basis.clone()), n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscendentalSplit {
    /// Orders `k` of the factors `q^{m/2} ζ_k` split off, with multiplicities.
    pub algebraic_factors: Vec<(u64, usize)>,
    pub algebraic_dimension: usize,
    pub transcendental_degree: usize,
    pub distinct: bool,
}

/// The order `k` if `f` is the minimal polynomial of `c ζ_k`.
fn scaled_cyclotomic_order(f: &IntPoly, c: &BigInt) -> Option<u64> {
    // f(c t) / c^d must be cyclotomic
    let g = f.scale_variable(c);
    let cd = c.pow(f.deg() as u32);
    let coeffs: Option<Vec<BigInt>> = g
        .coeffs()
        .iter()
        .map(|x| {
            let (qt, rem) = num_integer::Integer::div_rem(x, &cd);
            rem.is_zero().then_some(qt)
        })
        .collect();
    let k = cyclotomic_index(&IntPoly::new(coeffs?))?;
    debug_assert_eq!(&scaled_cyclotomic(k, c), f);
    Some(k)
}

/// Whether the eigenvalues outside `q^{m/2}` times roots of unity are distinct.
pub fn distinct_transcendental_eigenvalues(w: &WeilPolynomial) -> Result<TranscendentalSplit, InvariantsError> {
    if w.weight() % 2 == 1 {
        return Err(InvariantsError::OddWeight(w.weight()));
    }
    let c = BigInt::from(w.q()).pow(w.weight() / 2);
    let mut algebraic_factors = Vec::new();
    let mut algebraic_dimension = 0;
    let mut transcendental_degree = 0;
    let mut distinct = true;
    for (f, mult) in w.factors() {
        match scaled_cyclotomic_order(f, &c) {
            Some(k) => {
                algebraic_factors.push((k, *mult));
                algebraic_dimension += f.deg() * mult;
            }
            None => {
                transcendental_degree += f.deg() * mult;
                distinct &= *mult == 1;
            }
        }
    }
    Ok(TranscendentalSplit { algebraic_factors, algebraic_dimension, transcendental_degree, distinct })
}
