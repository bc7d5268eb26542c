//! Writes isogeny-class responses for `g <= 2` and small `q` into a cache
//! directory, in the same shape the API returns.
//!
//! Classes are enumerated by Honda-Tate: a Weil polynomial is the Frobenius
//! polynomial of an abelian variety iff every irreducible factor `h` occurs
//! with multiplicity divisible by `e_h`, the lcm of the denominators of the
//! local invariants `slope * local degree` and `1/2` at real places.
//!
//! ```text
//! cargo run -p weilreg-cli --example honda_tate -- crates/cli/tests/fixtures/cache
//! ```

use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde_json::json;
use weilreg::arith::IntPoly;
use weilreg::weil::{prime_profile, validate};
use weilreg_cli::fetch::{store, Query};

fn letters(mut n: u64) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        n /= 26;
        if n == 0 {
            break;
        }
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

/// `g.q.a1_a2`, negative coefficients prefixed with `a`.
fn label(g: u32, q: u64, a: &[i64]) -> String {
    let parts: Vec<String> =
        a.iter().map(|&x| if x < 0 { format!("a{}", letters(x.unsigned_abs())) } else { letters(x as u64) }).collect();
    format!("{g}.{q}.{}", parts.join("_"))
}

fn e_factor(h: &IntPoly, q: u64) -> u64 {
    let w = validate(h, q, 1).expect("factors of Weil polynomials are Weil");
    let mut e = if w.has_real_roots() { 2u64 } else { 1 };
    let prof = prime_profile(&w).expect("profile");
    for pr in &prof.primes {
        let inv = &pr.slope * BigInt::from(pr.degree as u64);
        e = e.lcm(&inv.denom().to_u64().unwrap());
    }
    e
}

fn is_isogeny_class(poly: &IntPoly, q: u64) -> bool {
    let Ok(w) = validate(poly, q, 1) else { return false };
    w.factors().iter().all(|(h, k)| *k as u64 % e_factor(h, q) == 0)
}

/// `L(T) = 1 + a_1 T + ... + q^g T^{2g}` for the given middle coefficients.
fn l_poly(g: u32, q: u64, a: &[i64]) -> Vec<i64> {
    let q = q as i64;
    match g {
        1 => vec![1, a[0], q],
        2 => vec![1, a[0], a[1], q * a[0], q * q],
        _ => unreachable!(),
    }
}

fn classes(g: u32, q: u64) -> Vec<serde_json::Value> {
    let b1 = (2 * g as i64) * ((q as f64).sqrt().ceil() as i64);
    let b2 = 6 * q as i64;
    let mut tuples: Vec<Vec<i64>> = Vec::new();
    for a1 in -b1..=b1 {
        if g == 1 {
            tuples.push(vec![a1]);
        } else {
            for a2 in -b2..=b2 {
                tuples.push(vec![a1, a2]);
            }
        }
    }
    let mut out = Vec::new();
    for a in tuples {
        let lp = l_poly(g, q, &a);
        let mut asc = lp.clone();
        asc.reverse();
        let poly = IntPoly::from_i64(&asc);
        debug_assert!(poly.lc().is_one());
        if is_isogeny_class(&poly, q) {
            out.push(json!({ "label": label(g, q, &a), "g": g, "q": q, "poly": lp }));
        }
    }
    out
}

fn main() {
    let dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "crates/cli/tests/fixtures/cache".into()).into();
    for g in 1..=2u32 {
        for q in [2u64, 3, 4, 5] {
            let data = classes(g, q);
            println!("g={g} q={q}: {} classes", data.len());
            let body = serde_json::to_string(&json!({ "data": data })).unwrap();
            store(&dir, &Query { g, q }, &body).expect("write cache");
        }
    }
}
