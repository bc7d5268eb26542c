mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weilreg::arith::factor::factor_rational;
use weilreg::arith::field::{ExtField, FiniteFieldElem};
use weilreg::arith::matrix::{rank_rat, RatMatrix};
use weilreg::arith::symmetric::{antisymmetrizer_trace, charpoly_from_power_sums, trace_powers};
use weilreg::arith::{isolate_roots, IntPoly};
use weilreg::invariants::{
    degree_two_generation, generated_dimension, invariant_dimension, pole_orders, Weight, WeightSystem,
};
use weilreg::torus::{regularity, relation_lattice, RelationConfig};
use weilreg::weil::{newton_polygon, prime_profile, validate};

use common::{charpoly_by_det, principal_minor_sum, rat};

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

fn to_rat(m: &[Vec<i64>]) -> RatMatrix {
    m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charpoly_from_traces(m in int_matrix()) {
        let n = m.len();
        let s = trace_powers(&to_rat(&m), n);
        prop_assert_eq!(charpoly_from_power_sums(n, &s).unwrap(), charpoly_by_det(&m));
    }

    #[test]
    fn antisymmetrizer_is_minor_sum(m in int_matrix()) {
        let r = to_rat(&m);
        for i in 0..=m.len() {
            let want = BigRational::from_integer(principal_minor_sum(&m, i));
            prop_assert_eq!(antisymmetrizer_trace(&r, i).unwrap(), want);
        }
    }

    #[test]
    fn factorization_round_trips(parts in prop::collection::vec(prop::collection::vec(-6i64..=6, 2..=4), 1..=3)) {
        let mut p = IntPoly::one();
        for c in &parts {
            let mut c = c.clone();
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            p = &p * &IntPoly::from_i64(&c);
        }
        let fs = factor_rational(&p);
        let mut back = IntPoly::one();
        for (f, k) in &fs {
            prop_assert!(f.lc().is_positive());
            prop_assert!(f.content().is_one());
            back = &back * &f.pow(*k);
            if f.deg() >= 2 && f.deg() <= 3 {
                prop_assert!(!has_rational_root(f));
            }
            if f.deg() == 4 {
                prop_assert!(!has_rational_root(f) && !has_quadratic_factor(f));
            }
        }
        // equal up to a rational scalar
        let c = p.lc();
        let b = back.lc();
        prop_assert_eq!(p.scale(&b), back.scale(&c));
    }

    #[test]
    fn extension_field_axioms(l in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101]), d in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Arc::new(ExtField::random(l, d, &mut rng));
        let el = |rng: &mut ChaCha8Rng| {
            let v: Vec<u64> = (0..d).map(|_| rand::Rng::gen_range(rng, 0..l)).collect();
            FiniteFieldElem::new(f.clone(), &v)
        };
        let (a, b, c) = (el(&mut rng), el(&mut rng), el(&mut rng));
        let one = FiniteFieldElem::one(f.clone());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a * &one, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), one.clone());
            let order = num_traits::pow(l, d);
            prop_assert_eq!(a.pow(order - 1), one);
        }
    }

    #[test]
    fn root_multiplicities_sum_to_degree(roots in prop::collection::vec((-4i64..=4, 0i64..=3), 1..=3)) {
        // products of (t - a) and (t^2 - 2 a t + a^2 + b^2)
        let mut p = IntPoly::one();
        for &(a, b) in &roots {
            let f = if b == 0 { IntPoly::from_i64(&[-a, 1]) } else { IntPoly::from_i64(&[a * a + b * b, -2 * a, 1]) };
            p = &p * &f;
        }
        let boxes = isolate_roots(&p, &BigRational::new(BigInt::one(), BigInt::from(64)));
        prop_assert_eq!(boxes.iter().map(|b| b.multiplicity).sum::<usize>(), p.deg());
        for (i, x) in boxes.iter().enumerate() {
            for y in &boxes[i + 1..] {
                prop_assert!(!x.intersects(y));
            }
        }
    }
}

fn has_rational_root(f: &IntPoly) -> bool {
    let lead = f.lc().abs();
    let c0 = f.coeff(0).abs();
    if c0.is_zero() {
        return true;
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n: i64 = n.try_into().unwrap();
        (1..=n).filter(|d| n % d == 0).map(BigInt::from).collect()
    };
    for p in divisors(&c0) {
        for q in divisors(&lead) {
            for s in [1, -1] {
                let x = BigRational::new(&p * s, q.clone());
                if f.eval_rational(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether `f` has an integer quadratic factor `a t^2 + b t + c`; such a factor
/// has `a | lc` and `c | c0`; `b` is bounded by the root bound.
fn has_quadratic_factor(f: &IntPoly) -> bool {
    let lead: i64 = f.lc().abs().try_into().unwrap();
    let c0: i64 = f.coeff(0).abs().try_into().unwrap();
    let bound: i64 = f.coeffs().iter().map(|c| i64::try_from(c.abs()).unwrap()).sum::<i64>() * 4 + 4;
    for a in (1..=lead).filter(|d| lead % d == 0) {
        for c in (1..=c0).filter(|d| c0 % d == 0) {
            for c in [c, -c] {
                for b in -bound..=bound {
                    let d = IntPoly::from_i64(&[c, b, a]);
                    if f.pseudo_rem(&d).is_zero() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn rank_of(m: &[Vec<BigRational>]) -> usize {
    rank_rat(&m.to_vec())
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn kron(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|i| (0..n * m).map(|j| &a[i / m][j / m] * &b[i % m][j % m]).collect()).collect()
}

fn inverse(a: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { rat(1) } else { rat(0) }));
            row
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !aug[k][c].is_zero()).unwrap();
        aug.swap(c, k);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for k in 0..n {
            if k != c && !aug[k][c].is_zero() {
                let f = aug[k][c].clone();
                for j in 0..2 * n {
                    let t = &f * &aug[c][j];
                    aug[k][j] -= t;
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn minus_scalar(a: &RatMatrix, s: &BigRational) -> RatMatrix {
    let mut out = a.clone();
    for (i, r) in out.iter_mut().enumerate() {
        r[i] -= s;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // eigenvalue q of α⊗α is semisimple iff α is, when the eigenvalues of α
    // come in pairs with product q
    #[test]
    fn semisimplicity_transfer(
        q in 2i64..=9,
        a in prop::sample::select(vec![1i64, -1, 2, -2, 3]),
        b in prop::sample::select(vec![1i64, -1, 2, -3, 4]),
        jordan in 0usize..3,
        p in prop::collection::vec(-3i64..=3, 16),
    ) {
        let a = BigRational::from_integer(a.into());
        let b = BigRational::from_integer(b.into());
        let qr = rat(q);
        let (a2, b2) = (&qr / &a, &qr / &b);
        let mut j: RatMatrix = vec![vec![rat(0); 4]; 4];
        // jordan 0: diag(a, q/a, b, q/b); 1: J2(a) ⊕ J2(q/a); 2: J2(a) ⊕ diag(q/a, q/a)
        match jordan {
            0 => { j[0][0] = a.clone(); j[1][1] = a2.clone(); j[2][2] = b.clone(); j[3][3] = b2.clone(); }
            1 => { j[0][0] = a.clone(); j[1][1] = a.clone(); j[0][1] = rat(1); j[2][2] = a2.clone(); j[3][3] = a2.clone(); j[2][3] = rat(1); }
            _ => { j[0][0] = a.clone(); j[1][1] = a.clone(); j[0][1] = rat(1); j[2][2] = a2.clone(); j[3][3] = a2.clone(); }
        }
        let mut pm: RatMatrix = (0..4).map(|i| (0..4).map(|k| rat(p[4 * i + k])).collect()).collect();
        for (i, r) in pm.iter_mut().enumerate() {
            r[i] += rat(7);
        }
        prop_assume!(rank_of(&pm) == 4);
        let alpha = mat_mul(&mat_mul(&pm, &j), &inverse(&pm));
        let semisimple_alpha = {
            let mut ok = true;
            for ev in [&a, &a2, &b, &b2] {
                let m1 = minus_scalar(&alpha, ev);
                ok &= rank_of(&m1) == rank_of(&mat_mul(&m1, &m1));
            }
            ok
        };
        prop_assert_eq!(semisimple_alpha, jordan == 0);
        let aa = kron(&alpha, &alpha);
        let m1 = minus_scalar(&aa, &qr);
        let semisimple_at_q = rank_of(&m1) == rank_of(&mat_mul(&m1, &m1));
        prop_assert_eq!(semisimple_at_q, semisimple_alpha);
    }
}

/// Weight systems whose relations are generated by pairs `ξ + ξ' = 0`.
fn paired_weights() -> impl Strategy<Value = WeightSystem> {
    (1usize..=6).prop_flat_map(|d| (Just(d), involution(d), prop::collection::vec(1u64..=2, d))).prop_map(
        |(d, pairing, mults)| {
            let mut relations = Vec::new();
            for (i, &j) in pairing.iter().enumerate() {
                if i <= j {
                    let mut r = vec![0i64; d];
                    r[i] += 1;
                    r[j] += 1;
                    relations.push(r);
                }
            }
            // keep total dimension at most 6
            let mut budget = 6u64;
            let weights = (0..d)
                .map(|i| {
                    let m = mults[i].min(budget - (d - 1 - i) as u64).max(1);
                    budget -= m;
                    let mut c = vec![0i64; d];
                    c[i] = 1;
                    Weight { character: c, multiplicity: m }
                })
                .collect();
            WeightSystem::new(d, relations, weights).unwrap()
        },
    )
}

/// A random involution of `0..d`.
fn involution(d: usize) -> impl Strategy<Value = Vec<usize>> {
    (Just((0..d).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), d)).prop_map(
        move |(order, fix)| {
            let mut inv: Vec<usize> = (0..d).collect();
            let mut rest = order.into_iter();
            while let Some(i) = rest.next() {
                if fix[i] {
                    continue;
                }
                if let Some(j) = rest.next() {
                    inv[i] = j;
                    inv[j] = i;
                }
            }
            inv
        },
    )
}

fn permuted(ws: &WeightSystem, perm: &[usize]) -> WeightSystem {
    let mut out = ws.clone();
    out.weights = perm.iter().map(|&i| ws.weights[i].clone()).collect();
    out
}

fn negated(ws: &WeightSystem) -> WeightSystem {
    let mut out = ws.clone();
    for w in &mut out.weights {
        for c in &mut w.character {
            *c = -*c;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariant_dimension_symmetries(ws in paired_weights(), seed in any::<u64>(), n in 1usize..=5) {
        let k = ws.weights.len();
        let mut perm: Vec<usize> = (0..k).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut ChaCha8Rng::seed_from_u64(seed));
        let base = invariant_dimension(&ws, n).unwrap();
        prop_assert_eq!(invariant_dimension(&permuted(&ws, &perm), n).unwrap(), base.clone());
        prop_assert_eq!(invariant_dimension(&negated(&ws), n).unwrap(), base);
    }

    #[test]
    fn generated_within_invariants(ws in paired_weights(), n in 1usize..=6) {
        let inv = invariant_dimension(&ws, n).unwrap();
        prop_assert!(generated_dimension(&ws, n) <= inv);
        if n == 2 {
            prop_assert_eq!(generated_dimension(&ws, 2), inv);
        }
    }

    #[test]
    fn paired_relations_generate_in_degree_two(ws in paired_weights()) {
        let rep = degree_two_generation(&ws, 6).unwrap();
        prop_assert!(rep.generated_in_degree_two);
        prop_assert!(rep.rows.iter().all(|r| r.generated));
    }
}

/// Elliptic Weil polynomials `t^2 - a t + q` and the supersingular `t^2 + q`.
fn elliptic(q: i64) -> impl Strategy<Value = IntPoly> {
    let bound = (2.0 * (q as f64).sqrt()).floor() as i64;
    (-bound..=bound).prop_map(move |a| IntPoly::from_i64(&[q, -a, 1]))
}

fn weil_product() -> impl Strategy<Value = (u64, IntPoly)> {
    prop::sample::select(vec![2i64, 3, 5, 7])
        .prop_flat_map(|q| (Just(q as u64), prop::collection::vec(elliptic(q), 1..=2)))
        .prop_map(|(q, fs)| (q, fs.iter().fold(IntPoly::one(), |acc, f| &acc * f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_validate_and_slopes_agree((q, f) in weil_product()) {
        let w = validate(&f, q, 1).unwrap();
        let np = newton_polygon(&w);
        let m = rat(1);
        for (s, k) in &np.slopes {
            prop_assert_eq!(np.multiplicity(&(&m - s)), *k);
        }
        // squarefree part: local primes weighted by degree reproduce the slopes
        let sq = validate(&w.squarefree_part(), q, 1).unwrap();
        let prof = prime_profile(&sq).unwrap();
        let mut from_primes: Vec<(BigRational, usize)> = Vec::new();
        for pr in &prof.primes {
            match from_primes.iter_mut().find(|(s, _)| *s == pr.slope) {
                Some((_, k)) => *k += pr.degree,
                None => from_primes.push((pr.slope.clone(), pr.degree)),
            }
        }
        from_primes.sort();
        prop_assert_eq!(from_primes, newton_polygon(&sq).slopes);
    }

    #[test]
    fn lattice_contains_pairings_and_is_iota_stable((q, f) in weil_product()) {
        let w = validate(&f, q, 1).unwrap();
        let rl = relation_lattice(&w, &RelationConfig::default());
        let pairing = w.conj_pairing();
        let d = pairing.len();
        for i in 0..d {
            let mut v = vec![0i64; d];
            v[i] += 1;
            v[pairing[i]] += 1;
            prop_assert!(rl.contains(&v));
        }
        for r in &rl.basis {
            // ι sends π_i to π_{ι(i)} = q^m / π_i: permute and negate
            let mut v = vec![0i64; d];
            for (i, &e) in r.exponents.iter().enumerate() {
                v[pairing[i]] -= e;
            }
            prop_assert!(rl.contains(&v));
        }
    }

    #[test]
    fn regular_implies_equal_pole_orders((q, f) in weil_product()) {
        let w = validate(&f, q, 1).unwrap();
        let v = regularity(&w).unwrap();
        let rl = relation_lattice(&w, &RelationConfig::default());
        if v.regular {
            for r in rl.basis.iter().filter(|r| r.zeta.is_one()) {
                prop_assert!(in_rational_span(&rl.pairing_basis, &r.exponents));
            }
            prop_assert!(pole_orders(&w, &rl, 4).unwrap().all_equal());
        }
    }
}

fn in_rational_span(rows: &[Vec<i64>], v: &[i64]) -> bool {
    let a: RatMatrix = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let mut b = a.clone();
    b.push(v.iter().map(|&x| rat(x)).collect());
    rank_rat(&a) == rank_rat(&b)
}

#[test]
fn k3_shape_with_two_real_roots() {
    // (t - r)(t + r) R(t), R of degree 20 with a slope-0 root: algebraic part is exactly ±r
    let r = 13;
    let f = common::synthetic_height_one(10, r, &[1, 1, -1, 0, 1]);
    let p = &IntPoly::from_i64(&[-r * r, 0, 1]) * &f;
    let w = validate(&p, r as u64, 2).unwrap();
    assert_eq!(w.degree(), 22);
    let s = weilreg::invariants::distinct_transcendental_eigenvalues(&w).unwrap();
    assert_eq!((s.algebraic_dimension, s.transcendental_degree), (2, 20));
    assert!(s.distinct);
}
