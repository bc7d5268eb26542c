//! wasm-bindgen exports for the demo page in `www/`.
//!
//! Every export takes ascending coefficients as a comma-separated string and
//! returns a JSON string. The `*_json` functions hold the logic so that they
//! can be tested natively.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use weilreg::arith::IntPoly;
use weilreg::primes::{is_in_px, primes_up_to, SkipReason};
use weilreg::weil::{newton_polygon, validate, WeilPolynomial};

/// Largest prime bound the strip accepts.
pub const MAX_STRIP_BOUND: u64 = 20_000;

fn parse(coeffs: &str, q: u64, m: u32) -> Result<WeilPolynomial, String> {
    let c = coeffs
        .split(',')
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| format!("bad coefficient `{}`", s.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    validate(&IntPoly::new(c), q, m).map_err(|e| e.to_string())
}

/// Distinct roots scaled to the unit circle, with angles in turns.
pub fn roots_json(coeffs: &str, q: u64, m: u32) -> Result<String, String> {
    let w = parse(coeffs, q, m)?;
    let scale = (q as f64).powf(m as f64 / 2.0);
    let roots: Vec<Value> = w
        .roots()
        .iter()
        .map(|r| {
            let (re, im) = r.disk.center_f64();
            json!({
                "re": re / scale,
                "im": im / scale,
                "turns": im.atan2(re) / std::f64::consts::TAU,
                "multiplicity": w.factors()[r.factor].1,
                "factor": r.factor,
            })
        })
        .collect();
    Ok(json!({ "degree": w.degree(), "roots": roots }).to_string())
}

/// Vertices of the Newton polygon of `P` at `p`, with valuations normalized by `v(q)`.
pub fn newton_json(coeffs: &str, q: u64, m: u32) -> Result<String, String> {
    let w = parse(coeffs, q, m)?;
    let np = newton_polygon(&w);
    let mut x = 0usize;
    let mut y = 0f64;
    let mut vertices = vec![json!([0, 0.0])];
    let mut slopes = Vec::new();
    for (s, k) in &np.slopes {
        let sf = s.to_f64().unwrap_or(f64::NAN);
        x += k;
        y += sf * *k as f64;
        vertices.push(json!([x, y]));
        slopes.push(json!({ "slope": s.to_string(), "multiplicity": k }));
    }
    Ok(json!({ "p": w.p(), "vertices": vertices, "slopes": slopes }).to_string())
}

/// Membership of each prime up to `bound` in P(X).
pub fn strip_json(coeffs: &str, q: u64, m: u32, bound: u64) -> Result<String, String> {
    if bound > MAX_STRIP_BOUND {
        return Err(format!("bound is capped at {MAX_STRIP_BOUND}"));
    }
    let w = parse(coeffs, q, m)?;
    let cells: Vec<Value> = primes_up_to(bound)
        .into_iter()
        .map(|l| {
            let s = is_in_px(&w, l);
            let state = match s.skipped {
                Some(SkipReason::Ramified) => "ramified",
                Some(SkipReason::EqualsP) => "characteristic",
                None if s.in_px => "member",
                None => "other",
            };
            json!({ "l": l, "state": state, "degrees": s.factor_degrees })
        })
        .collect();
    let tested = cells.iter().filter(|c| matches!(c["state"].as_str(), Some("member" | "other"))).count();
    let members = cells.iter().filter(|c| c["state"] == "member").count();
    Ok(json!({ "cells": cells, "members": members, "tested": tested }).to_string())
}

#[wasm_bindgen]
pub fn roots(coeffs: &str, q: u32, m: u32) -> Result<String, JsError> {
    roots_json(coeffs, q.into(), m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn newton(coeffs: &str, q: u32, m: u32) -> Result<String, JsError> {
    newton_json(coeffs, q.into(), m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn prime_strip(coeffs: &str, q: u32, m: u32, bound: u32) -> Result<String, JsError> {
    strip_json(coeffs, q.into(), m, bound.into()).map_err(|e| JsError::new(&e))
}
