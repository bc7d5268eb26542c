//! Acceptance suite: one line per criterion, then a single assertion that
//! every criterion passed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use weilreg::arith::factor::is_irreducible;
use weilreg::arith::matrix::RatMatrix;
use weilreg::arith::symmetric::{antisymmetrizer_trace, charpoly_from_power_sums, trace_powers};
use weilreg::arith::IntPoly;
use weilreg::invariants::{degree_two_generation, pole_orders, Weight, WeightSystem};
use weilreg::primes::{enumerate_px, is_in_px, is_in_px_splitting_field, primes_up_to};
use weilreg::report::InputRecord;
use weilreg::torus::{
    criterion_height_one, lattice_obstruction, regularity, relation_lattice, CriterionStatus, RegularityReason,
    RelationConfig,
};
use weilreg::weil::{prime_profile, validate, WeilPolynomial};
use weilreg_cli::fetch::{Client, Query};

use common::{
    brute_fixed_dim, charpoly_by_det, legendre, principal_minor_sum, rat, synthetic_height_one, tuple_product_is,
};

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

const QS: [u64; 4] = [2, 3, 4, 5];

fn fixtures(g: u32, q: u64) -> Vec<InputRecord> {
    let c = Client { base_url: String::new(), cache_dir: manifest().join("tests/fixtures/cache"), offline: true };
    c.fetch(&Query { g, q }).expect("fixture present")
}

fn all_fixtures() -> Vec<InputRecord> {
    (1..=2).flat_map(|g| QS.iter().flat_map(move |&q| fixtures(g, q))).collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let recs = all_fixtures();
    let accepted = recs.iter().filter(|r| validate(&r.poly(), r.q, r.m).is_ok()).count();

    // mutants with the clause they must violate, derived by hand:
    // |c_0| = q^{md/2} for a Weil polynomial, |a_1| <= d sqrt(q^m), lc = 1, q a prime power
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut mutants: Vec<(IntPoly, u64, &str)> = Vec::new();
    let pick = |rng: &mut ChaCha8Rng, v: &[InputRecord]| v[rng.gen_range(0..v.len())].clone();
    for i in 0..8 {
        let r = pick(&mut rng, &recs);
        let mut c: Vec<BigInt> = r.coeffs.iter().map(|x| x.0.clone()).collect();
        c[0] += if i % 2 == 0 { 1 } else { -1 };
        mutants.push((IntPoly::new(c), r.q, "AbsValueViolation"));
    }
    for _ in 0..4 {
        let r = pick(&mut rng, &recs);
        let mut c: Vec<BigInt> = r.coeffs.iter().map(|x| x.0.clone()).collect();
        let d = c.len() - 1;
        // beyond the trace bound d sqrt(q) <= d q
        c[d - 1] = BigInt::from(d as u64 * r.q + 1);
        mutants.push((IntPoly::new(c), r.q, "AbsValueViolation"));
    }
    for _ in 0..4 {
        let r = pick(&mut rng, &recs);
        let mut c: Vec<BigInt> = r.coeffs.iter().map(|x| x.0.clone()).collect();
        *c.last_mut().unwrap() = BigInt::from(2);
        mutants.push((IntPoly::new(c), r.q, "NotMonic"));
    }
    for bad_q in [6u64, 10, 12, 15] {
        let r = pick(&mut rng, &recs);
        mutants.push((r.poly(), bad_q, "BadPrimePower"));
    }
    let correct =
        mutants.iter().filter(|(p, q, want)| matches!(validate(p, *q, 1), Err(ref e) if e.clause() == *want)).count();
    outcome(
        accepted == recs.len() && correct == mutants.len(),
        format!(
            "{accepted}/{} fixtures accepted, {correct}/{} mutants rejected with the expected clause",
            recs.len(),
            mutants.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let mr: RatMatrix = m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let from_traces = charpoly_from_power_sums(n, &trace_powers(&mr, n)).unwrap() == charpoly_by_det(&m);
        let wedges = (0..=n)
            .all(|i| antisymmetrizer_trace(&mr, i).unwrap() == BigRational::from_integer(principal_minor_sum(&m, i)));
        ok += (from_traces && wedges) as usize;
    }
    outcome(ok == 200, format!("{ok}/200 random matrices reproduce the determinant characteristic polynomial"))
}

fn paired_system(rng: &mut ChaCha8Rng) -> WeightSystem {
    let d = rng.gen_range(1..=6);
    let mut order: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut inv: Vec<usize> = (0..d).collect();
    let mut i = 0;
    while i < d {
        if i + 1 < d && rng.gen_bool(0.7) {
            inv[order[i]] = order[i + 1];
            inv[order[i + 1]] = order[i];
            i += 2;
        } else {
            i += 1;
        }
    }
    let relations = (0..d)
        .filter(|&i| i <= inv[i])
        .map(|i| {
            let mut r = vec![0i64; d];
            r[i] += 1;
            r[inv[i]] += 1;
            r
        })
        .collect();
    let mut budget = 6 - d as u64;
    let weights = (0..d)
        .map(|i| {
            let extra = if budget > 0 && rng.gen_bool(0.3) { 1 } else { 0 };
            budget -= extra;
            let mut c = vec![0i64; d];
            c[i] = 1;
            Weight { character: c, multiplicity: 1 + extra }
        })
        .collect();
    WeightSystem::new(d, relations, weights).unwrap()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ok = (0..50)
        .filter(|_| {
            let ws = paired_system(&mut rng);
            ws.dimension() <= 6 && degree_two_generation(&ws, 6).unwrap().generated_in_degree_two
        })
        .count();
    let three = WeightSystem::new(
        3,
        vec![vec![1, 1, 1]],
        (0..3).map(|i| Weight { character: (0..3).map(|j| (i == j) as i64).collect(), multiplicity: 1 }).collect(),
    )
    .unwrap();
    let rep = degree_two_generation(&three, 3).unwrap();
    let row3 = rep.rows.iter().find(|r| r.n == 3).unwrap();
    let negative = !row3.generated && !row3.dim_invariants.is_zero() && !rep.generated_in_degree_two;
    outcome(
        ok == 50 && negative,
        format!(
            "{ok}/50 paired systems generated in degree two up to n = 6; three-term control generated at n = 3: {}",
            row3.generated
        ),
    )
}

/// Whether `prod pi_i^{k n_i} = q^{m k sum(n) / 2}`, with negative exponents
/// moved to the paired root.
fn relation_power_holds(w: &WeilPolynomial, n: &[i64], k: i64) -> bool {
    let pairing = w.conj_pairing();
    let mut tuple = Vec::new();
    let mut shift = 0i64;
    for (i, &e) in n.iter().enumerate() {
        let (idx, cnt) = if e >= 0 { (i, e) } else { (pairing[i], -e) };
        if e < 0 {
            shift += w.weight() as i64 * k * cnt;
        }
        tuple.extend(std::iter::repeat(idx).take((k * cnt) as usize));
    }
    let twice = w.weight() as i64 * k * n.iter().sum::<i64>() + 2 * shift;
    assert!(twice % 2 == 0);
    tuple_product_is(w, &tuple, &BigInt::from(w.q()).pow((twice / 2) as u32))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let w = validate(&IntPoly::from_i64(&[2, -1, 1]), 2, 1).unwrap();
    let v = regularity(&w).unwrap();
    pass &= v.regular && v.angle_rank == 1;
    notes.push(format!("t^2-t+2: regular {} rank {}", v.regular, v.angle_rank));

    for p in [3i64, 5, 7] {
        let w = validate(&IntPoly::from_i64(&[p, 0, 1]), p as u64, 1).unwrap();
        let v = regularity(&w).unwrap();
        let ok = match &v.reason {
            RegularityReason::ExtraRelation { relation } => {
                let n = &relation.exponents;
                // order exactly 4: the fourth power is q-power, the square is not
                relation.zeta.order == 4 && relation_power_holds(&w, n, 4) && !relation_power_holds(&w, n, 2)
            }
            _ => false,
        };
        pass &= !v.regular && ok;
        notes.push(format!("t^2+{p}: regular {} order-4 witness {ok}", v.regular));
    }

    for q in [2u64, 3, 5, 7] {
        let w = validate(&IntPoly::from_i64(&[-(q as i64), 0, 1]), q, 1).unwrap();
        // exact signs of the real roots: each disk excludes zero
        let signs: Vec<i64> = w
            .roots()
            .iter()
            .map(|r| {
                assert!(r.disk.im.is_zero() && r.disk.re.abs() > r.disk.radius);
                if r.disk.re.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect();
        // χ(π/√q) = prod sign_i^{χ_i}; a character with odd coordinates and value 1 obstructs
        let expected_regular = false;
        let v = regularity(&w).unwrap();
        let ok = match &v.reason {
            RegularityReason::TorsionObstruction { character } => {
                let value: i64 =
                    character.iter().zip(&signs).map(|(&c, &s)| if c.rem_euclid(2) == 1 { s } else { 1 }).product();
                value == 1 && character.iter().any(|c| c.rem_euclid(2) == 1)
            }
            _ => false,
        };
        pass &= v.regular == expected_regular && ok;
        notes.push(format!("t^2-{q}: regular {} sign witness {ok}", v.regular));
    }
    outcome(pass, notes.join("; "))
}

/// Twenty irreducible height-one members, degrees 4 to 22.
fn height_one_family() -> Vec<(usize, i64, WeilPolynomial)> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = Vec::new();
    for g in 2..=11usize {
        let mut found = 0;
        while found < 2 {
            let r = [11i64, 13, 17, 19][rng.gen_range(0..4)];
            let mut perturb: Vec<i64> = (0..g).map(|_| rng.gen_range(-1..=1)).collect();
            perturb[0] = [1, 2, -1, -2][rng.gen_range(0..4)];
            if perturb.iter().map(|x| x.abs()).sum::<i64>() >= r {
                continue;
            }
            let f = synthetic_height_one(g, r, &perturb);
            if !is_irreducible(&f) {
                continue;
            }
            out.push((g, r, validate(&f, r as u64, 2).expect("synthetic members are Weil")));
            found += 1;
        }
    }
    out
}

fn criterion_5(family: &[(usize, i64, WeilPolynomial)]) -> Outcome {
    let cfg = RelationConfig::default();
    let results: Vec<(usize, bool, bool)> = family
        .par_iter()
        .map(|(g, _, w)| {
            let prof = prime_profile(w).unwrap();
            let cert = criterion_height_one(w, &prof);
            let fires = cert.status == CriterionStatus::Holds && cert.implies_regular;
            let rl = relation_lattice(w, &cfg);
            let lattice_regular = rl.complete && rl.angle_rank == *g && lattice_obstruction(&rl).is_none();
            (2 * g, fires, lattice_regular)
        })
        .collect();
    let fired = results.iter().filter(|r| r.1).count();
    let confirmed = results.iter().filter(|r| r.1 && r.2).count();
    let max_deg = results.iter().map(|r| r.0).max().unwrap_or(0);
    outcome(
        fired == 20 && confirmed == 20 && family.len() == 20,
        format!("{fired}/20 fire, {confirmed}/20 confirmed by the lattice, degrees up to {max_deg}"),
    )
}

fn criterion_6(family: &[(usize, i64, WeilPolynomial)]) -> Outcome {
    let cfg = RelationConfig::default();
    let mut corpus: Vec<WeilPolynomial> =
        all_fixtures().iter().map(|r| validate(&r.poly(), r.q, r.m).unwrap()).collect();
    corpus.extend(family.iter().filter(|(g, _, _)| *g <= 6).map(|(_, _, w)| w.clone()));
    let res: Vec<(bool, bool, bool)> = corpus
        .par_iter()
        .map(|w| match regularity(w) {
            Ok(v) if v.regular => {
                let rl = relation_lattice(w, &cfg);
                (true, true, pole_orders(w, &rl, 4).map(|r| r.all_equal()).unwrap_or(false))
            }
            Ok(_) => (true, false, true),
            Err(_) => (false, false, true),
        })
        .collect();
    let decided = res.iter().filter(|r| r.0).count();
    let regular = res.iter().filter(|r| r.1).count();
    let equal = res.iter().filter(|r| r.1 && r.2).count();
    outcome(
        regular > 0 && equal == regular,
        format!(
            "{regular} regular inputs of {} ({decided} decided), pole orders equal for {equal} of them, n <= 4",
            corpus.len()
        ),
    )
}

/// Degree <= 4 inputs: weight one over `F_q`, and the `F_4` classes read as weight two over `F_2`.
fn small_corpus() -> Vec<WeilPolynomial> {
    let mut out = Vec::new();
    for g in 1..=2 {
        for q in [2u64, 3, 5] {
            out.extend(fixtures(g, q).iter().map(|r| validate(&r.poly(), q, 1).unwrap()));
        }
        out.extend(fixtures(g, 4).iter().map(|r| validate(&r.poly(), 2, 2).unwrap()));
    }
    out
}

fn criterion_7() -> Outcome {
    let cfg = RelationConfig::default();
    let corpus = small_corpus();
    let res: Vec<(usize, usize)> = corpus
        .par_iter()
        .map(|w| {
            let rl = relation_lattice(w, &cfg);
            let rows = pole_orders(w, &rl, 3).unwrap().rows;
            let agree = rows.iter().filter(|r| r.fixed_dim == BigUint::from(brute_fixed_dim(w, r.n))).count();
            (rows.len(), agree)
        })
        .collect();
    let total: usize = res.iter().map(|r| r.0).sum();
    let agree: usize = res.iter().map(|r| r.1).sum();
    outcome(
        total == agree,
        format!("{agree}/{total} (input, n) pairs agree with exhaustive tuple counting over {} inputs", corpus.len()),
    )
}

fn criterion_8() -> Outcome {
    let w = validate(&IntPoly::from_i64(&[2, -1, 1]), 2, 1).unwrap();
    let mut tested = 0;
    let mut agree = 0;
    let mut l = 0;
    for &p in &primes_up_to(20_000) {
        if tested == 1000 {
            break;
        }
        l = p;
        let s = is_in_px(&w, l);
        if s.skipped.is_some() {
            continue;
        }
        tested += 1;
        // inert in Q(sqrt(-7))
        agree += (s.in_px == (legendre(-7, l) == -1)) as usize;
    }
    let rep = enumerate_px(&w, 10_000);
    let density = rep.density_f64();
    outcome(
        agree == 1000 && (density - 0.5).abs() <= 0.05,
        format!("{agree}/1000 match the Kronecker symbol (largest l = {l}); density at 10^4 = {density:.4}"),
    )
}

fn criterion_9() -> Outcome {
    let cfg = RelationConfig::default();
    let quartics: Vec<WeilPolynomial> = fixtures(2, 3)
        .iter()
        .map(|r| validate(&r.poly(), 3, 1).unwrap())
        .filter(|w| is_irreducible(w.poly()))
        .take(10)
        .collect();
    let ls = primes_up_to(200);
    let mut checks = 0;
    let mut stable = 0;
    for w in &quartics {
        for &l in &ls {
            let a = is_in_px(w, l);
            if a.skipped.is_some() {
                continue;
            }
            let b = is_in_px(w, l);
            let s1 = is_in_px_splitting_field(w, l, 1, 24);
            let s2 = is_in_px_splitting_field(w, l, 2, 24);
            checks += 1;
            stable += (a == b && s1 == Some(a.in_px) && s2 == Some(a.in_px)) as usize;
        }
    }
    let poles: Vec<bool> = quartics
        .par_iter()
        .take(4)
        .map(|w| {
            let rl = relation_lattice(w, &cfg);
            pole_orders(w, &rl, 4).unwrap().rows.iter().all(|r| r.fixed_dim == BigUint::from(brute_fixed_dim(w, r.n)))
        })
        .collect();
    let pole_ok = poles.iter().filter(|&&b| b).count();
    outcome(
        stable == checks && pole_ok == poles.len(),
        format!(
            "{stable}/{checks} memberships agree across reruns and two moduli; pole orders agree with tuple counting for {pole_ok}/{} quartics",
            poles.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let cases: [(&str, &[&str], i32); 3] = [
        ("analyze.json", &["analyze", "--q", "2", "--m", "1", "--coeffs", "2,-1,1", "--json"], 0),
        ("validate.json", &["validate", "--q", "2", "--m", "1", "--coeffs", "2,-3,1", "--json"], 2),
        ("poles.json", &["poles", "--q", "3", "--m", "1", "--coeffs", "3,0,1", "--n-max", "4", "--json"], 0),
    ];
    let mut same = 0;
    for (name, args, code) in cases {
        let want = std::fs::read(manifest().join("tests/golden").join(name)).unwrap();
        // twice, to catch nondeterminism
        let runs: Vec<_> =
            (0..2).map(|_| Command::new(env!("CARGO_BIN_EXE_weilreg")).args(args).output().unwrap()).collect();
        same += runs.iter().all(|o| o.status.code() == Some(code) && o.stdout == want) as usize;
    }
    outcome(same == 3, format!("{same}/3 documented invocations reproduce their golden files byte for byte"))
}

#[test]
fn acceptance() {
    let _ = writeln!(std::io::stderr());
    let start = Instant::now();
    let family = height_one_family();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut run = |i: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        // written to the handle directly so the lines survive output capture
        let _ = writeln!(
            std::io::stderr(),
            "criterion {i:>2} {}  {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push((i, name, o));
    };
    run(1, "validation soundness", &criterion_1);
    run(2, "trace identities", &criterion_2);
    run(3, "degree-two generation", &criterion_3);
    run(4, "regularity ground truth", &criterion_4);
    run(5, "height-one criterion implies regularity", &|| criterion_5(&family));
    run(6, "regular implies equal pole orders", &|| criterion_6(&family));
    run(7, "pole orders against tuple counting", &criterion_7);
    run(8, "P(X) for Q(sqrt(-7))", &criterion_8);
    run(9, "l-independence sanity", &criterion_9);
    run(10, "CLI golden files", &criterion_10);
    let _ = writeln!(std::io::stderr(), "acceptance suite finished in {:.1}s", start.elapsed().as_secs_f64());
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
