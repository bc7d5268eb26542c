use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::WeilPolynomial;
use crate::arith::nf::vp_int;

/// Slopes of the Newton polygon, normalized so that `ord(q) = 1`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub slopes: Vec<(BigRational, usize)>,
}

impl NewtonPolygon {
    pub fn total_multiplicity(&self) -> usize {
        self.slopes.iter().map(|(_, k)| k).sum()
    }

    /// Multiplicity of a given slope, zero if absent.
    pub fn multiplicity(&self, s: &BigRational) -> usize {
        self.slopes.iter().find(|(t, _)| t == s).map_or(0, |(_, k)| *k)
    }
}

/// Slopes of the lower convex hull of `(i, v_p(c_i))` divided by `a`,
/// reported as root valuations (the hull slopes negated).
pub fn newton_polygon_of(coeffs: &[BigInt], p: u64, a: u32) -> NewtonPolygon {
    let pts: Vec<(i64, i64)> =
        coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64, vp_int(c, p) as i64)).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt.0 - x1) >= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes: Vec<(BigRational, usize)> = Vec::new();
    // a leading run of zero coefficients means roots at 0, slope infinity; not for Weil input
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let s = BigRational::new(BigInt::from(y1 - y2), BigInt::from((x2 - x1) * a as i64));
        slopes.push((s, (x2 - x1) as usize));
    }
    slopes.sort();
    NewtonPolygon { slopes }
}

pub fn newton_polygon(w: &WeilPolynomial) -> NewtonPolygon {
    newton_polygon_of(w.poly().coeffs(), w.p(), w.a())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinaryWitness {
    /// Index of the middle coefficient.
    pub index: usize,
    pub coefficient: BigInt,
    /// `v_p` of the middle coefficient; absent when it is zero.
    pub valuation: Option<u64>,
    /// Whether the Newton slopes are exactly `{0: g, m: g}`.
    pub slopes_zero_and_m: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Ordinariness {
    Ordinary(OrdinaryWitness),
    NotOrdinary(OrdinaryWitness),
    /// Odd degree, weight zero or real roots.
    NotApplicable {
        reason: String,
    },
}

impl Ordinariness {
    pub fn is_ordinary(&self) -> bool {
        matches!(self, Ordinariness::Ordinary(_))
    }
}

pub fn is_ordinary(w: &WeilPolynomial) -> Ordinariness {
    let d = w.degree();
    if d % 2 == 1 {
        return Ordinariness::NotApplicable { reason: "odd degree".into() };
    }
    if w.weight() == 0 {
        return Ordinariness::NotApplicable { reason: "weight zero".into() };
    }
    if w.has_real_roots() {
        return Ordinariness::NotApplicable { reason: "real roots".into() };
    }
    let g = d / 2;
    let c = w.poly().coeff(g);
    let valuation = (!c.is_zero()).then(|| vp_int(&c, w.p()));
    let np = newton_polygon(w);
    let m = BigRational::from_integer(BigInt::from(w.weight()));
    let slopes_zero_and_m =
        np.slopes.len() == 2 && np.multiplicity(&BigRational::zero()) == g && np.multiplicity(&m) == g;
    let ordinary = valuation == Some(0);
    debug_assert_eq!(ordinary, slopes_zero_and_m);
    let wit = OrdinaryWitness { index: g, coefficient: c, valuation, slopes_zero_and_m };
    if ordinary {
        Ordinariness::Ordinary(wit)
    } else {
        Ordinariness::NotOrdinary(wit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::weil::validate;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn polygons() {
        let w = validate(&IntPoly::from_i64(&[2, -1, 1]), 2, 1).unwrap();
        assert_eq!(newton_polygon(&w).slopes, vec![(r(0, 1), 1), (r(1, 1), 1)]);
        let w = validate(&IntPoly::from_i64(&[3, 0, 1]), 3, 1).unwrap();
        assert_eq!(newton_polygon(&w).slopes, vec![(r(1, 2), 2)]);
        let w = validate(&IntPoly::from_i64(&[25, 0, 0, 0, 1]), 5, 1).unwrap();
        assert_eq!(newton_polygon(&w).slopes, vec![(r(1, 2), 4)]);
        // q = 4: valuations divide by a = 2
        let w = validate(&IntPoly::from_i64(&[4, 1, 1]), 4, 1).unwrap();
        assert_eq!(newton_polygon(&w).slopes, vec![(r(0, 1), 1), (r(1, 1), 1)]);
    }

    #[test]
    fn ordinariness() {
        let w = validate(&IntPoly::from_i64(&[2, -1, 1]), 2, 1).unwrap();
        assert!(is_ordinary(&w).is_ordinary());
        let w = validate(&IntPoly::from_i64(&[3, 0, 1]), 3, 1).unwrap();
        assert!(matches!(is_ordinary(&w), Ordinariness::NotOrdinary(_)));
        let w = validate(&IntPoly::from_i64(&[9, -3, 2, -1, 1]), 3, 1).unwrap();
        assert!(is_ordinary(&w).is_ordinary());
        let w = validate(&IntPoly::from_i64(&[-3, 0, 1]), 3, 1).unwrap();
        assert!(matches!(is_ordinary(&w), Ordinariness::NotApplicable { .. }));
    }
}
