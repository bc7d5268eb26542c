use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::matrix::{smith, vec_mat, IntMatrix};

/// A finitely generated abelian group `Z^d / <relations>` with canonical
/// element coordinates: torsion residues first, then free coordinates.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    d: usize,
    diag: Vec<u64>,
    v: IntMatrix,
    torsion: Vec<u64>,
}

impl QuotientGroup {
    pub fn new(d: usize, relations: &[Vec<i64>]) -> Self {
        let rows: IntMatrix = relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let (diag, v) = if rows.is_empty() {
            (Vec::new(), crate::arith::matrix::identity(d))
        } else {
            let s = smith(&rows, d);
            (s.diag.iter().map(|x| x.to_u64().expect("invariant factor fits in u64")).collect(), s.v)
        };
        let torsion = diag.iter().copied().filter(|&f| f > 1).collect();
        QuotientGroup { d, diag, v, torsion }
    }

    pub fn ambient_rank(&self) -> usize {
        self.d
    }

    pub fn free_rank(&self) -> usize {
        self.d - self.diag.len()
    }

    /// Orders of the cyclic torsion factors.
    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn class_of(&self, x: &[i64]) -> Vec<i64> {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let y = vec_mat(&xb, &self.v);
        let mut out = Vec::with_capacity(self.torsion.len() + self.free_rank());
        for (i, yi) in y.iter().enumerate() {
            match self.diag.get(i) {
                Some(&1) => {}
                Some(&f) => out.push(yi.mod_floor(&BigInt::from(f)).to_i64().unwrap()),
                None => out.push(yi.to_i64().expect("coordinate fits in i64")),
            }
        }
        out
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let t = self.torsion.len();
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| if i < t { (x + y).rem_euclid(self.torsion[i] as i64) } else { x + y })
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let t = self.torsion.len();
        a.iter().enumerate().map(|(i, x)| if i < t { (-x).rem_euclid(self.torsion[i] as i64) } else { -x }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_quotients() {
        let g = QuotientGroup::new(2, &[vec![1, 1]]);
        assert_eq!(g.free_rank(), 1);
        assert!(g.torsion().is_empty());
        assert_eq!(g.class_of(&[1, 1]), g.class_of(&[0, 0]));
        assert_eq!(g.class_of(&[1, 0]), g.neg(&g.class_of(&[0, 1])));
        let g = QuotientGroup::new(2, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(g.torsion(), &[2, 2]);
        let a = g.class_of(&[1, 0]);
        assert_eq!(g.add(&a, &a), vec![0, 0]);
    }
}
