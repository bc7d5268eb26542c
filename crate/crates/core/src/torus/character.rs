use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::matrix::{hnf, smith, vec_mat, IntMatrix};
use crate::weil::WeilPolynomial;

/// `X*(S) = Z^d / <e_i + e_ι(i)>`, with canonical coordinates from a Smith form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterLattice {
    pub ambient_rank: usize,
    /// One row per conjugate pair, `2 e_i` for a self-paired root.
    pub pairing_relations: Vec<Vec<i64>>,
    /// Invariant factors of the pairing relations (all 1 or 2).
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    /// Number of `Z/2` factors.
    pub torsion_rank: usize,
    #[serde(skip)]
    v: IntMatrix,
}

pub fn pairing_rows(pairing: &[usize]) -> IntMatrix {
    let d = pairing.len();
    let mut rows = Vec::new();
    for (i, &j) in pairing.iter().enumerate() {
        if j < i {
            continue;
        }
        let mut r = vec![BigInt::zero(); d];
        r[i] += 1;
        r[j] += 1;
        rows.push(r);
    }
    rows
}

impl CharacterLattice {
    pub fn from_pairing(pairing: &[usize]) -> Self {
        let d = pairing.len();
        let rows = pairing_rows(pairing);
        let s = smith(&rows, d);
        let invariant_factors: Vec<u64> = s.diag.iter().map(|x| x.try_into().unwrap()).collect();
        let torsion_rank = invariant_factors.iter().filter(|&&x| x > 1).count();
        CharacterLattice {
            ambient_rank: d,
            pairing_relations: rows.iter().map(|r| r.iter().map(|x| x.try_into().unwrap()).collect()).collect(),
            free_rank: d - invariant_factors.len(),
            torsion_rank,
            invariant_factors,
            v: s.v,
        }
    }

    /// Canonical coordinates of the class of `x`: residues modulo the
    /// nontrivial invariant factors, then the free coordinates.
    pub fn class_of(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = vec_mat(x, &self.v);
        let mut out = Vec::new();
        for (i, yi) in y.iter().enumerate() {
            match self.invariant_factors.get(i) {
                Some(&1) => {}
                Some(&f) => out.push(yi.mod_floor(&BigInt::from(f))),
                None => out.push(yi.clone()),
            }
        }
        out
    }

    /// Whether `x` lies in the span of the pairing relations.
    pub fn is_trivial(&self, x: &[BigInt]) -> bool {
        self.class_of(x).iter().all(|c| c.is_zero())
    }

    pub fn pairing_hnf(&self) -> IntMatrix {
        let rows: IntMatrix =
            self.pairing_relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        hnf(&rows)
    }

    /// Check that `x + ι(x)` is trivial for every basis vector, i.e. `ι = -1`.
    pub fn iota_is_minus_one(&self, pairing: &[usize]) -> bool {
        (0..self.ambient_rank).all(|i| {
            let mut x = vec![BigInt::zero(); self.ambient_rank];
            x[i] += BigInt::one();
            x[pairing[i]] += BigInt::one();
            self.is_trivial(&x)
        })
    }
}

pub fn character_lattice(w: &WeilPolynomial) -> CharacterLattice {
    CharacterLattice::from_pairing(w.conj_pairing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::weil::validate;

    #[test]
    fn shapes() {
        let w = validate(&IntPoly::from_i64(&[2, -1, 1]), 2, 1).unwrap();
        let c = character_lattice(&w);
        assert_eq!((c.free_rank, c.torsion_rank), (1, 0));
        assert!(c.iota_is_minus_one(w.conj_pairing()));
        let w = validate(&IntPoly::from_i64(&[-2, 0, 1]), 2, 1).unwrap();
        let c = character_lattice(&w);
        assert_eq!((c.free_rank, c.torsion_rank), (0, 2));
        assert_eq!(c.invariant_factors, vec![2, 2]);
        let w = validate(&IntPoly::from_i64(&[9, -3, 2, -1, 1]), 3, 1).unwrap();
        let c = character_lattice(&w);
        assert_eq!((c.free_rank, c.torsion_rank), (2, 0));
        let one = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(c.is_trivial(&one(&[1, 1, 0, 0])));
        assert!(!c.is_trivial(&one(&[1, 0, 0, 0])));
    }
}
