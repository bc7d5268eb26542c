//! Record processing, batch mode and output rendering.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use weilreg::report::{analyze, AnalysisReport, AnalyzeOptions, InputRecord};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

/// One line of batch output: a report, or the reason a line could not be read.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Report(Box<AnalysisReport>),
    Malformed { line: usize, error: String },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Report(r) if r.rejected() => EXIT_REJECTED,
            Outcome::Report(r) if r.partial => EXIT_PARTIAL,
            Outcome::Report(_) => EXIT_OK,
            Outcome::Malformed { .. } => EXIT_REJECTED,
        }
    }
}

/// Rejection outranks partial results.
pub fn combined_exit(outcomes: &[Outcome]) -> i32 {
    let codes: Vec<i32> = outcomes.iter().map(Outcome::exit_code).collect();
    if codes.contains(&EXIT_REJECTED) {
        EXIT_REJECTED
    } else if codes.contains(&EXIT_PARTIAL) {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

fn check(rec: &InputRecord) -> Result<(), String> {
    if rec.coeffs.is_empty() {
        return Err("coeffs is empty".into());
    }
    if rec.q < 2 {
        return Err(format!("q = {} is below 2", rec.q));
    }
    Ok(())
}

pub fn process(rec: &InputRecord, opts: &AnalyzeOptions) -> Result<AnalysisReport, String> {
    check(rec)?;
    Ok(analyze(rec, opts))
}

/// Parse JSON lines and analyze them concurrently; output order follows input order.
pub fn run_batch(input: &str, opts: &AnalyzeOptions) -> Vec<Outcome> {
    let lines: Vec<(usize, &str)> =
        input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, l)| (i + 1, l)).collect();
    lines
        .par_iter()
        .map(|&(line, text)| {
            let rec: InputRecord = match serde_json::from_str(text) {
                Ok(r) => r,
                Err(e) => return Outcome::Malformed { line, error: e.to_string() },
            };
            match process(&rec, opts) {
                Ok(r) => Outcome::Report(Box::new(r)),
                Err(error) => Outcome::Malformed { line, error },
            }
        })
        .collect()
}

pub fn to_json_lines(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&serde_json::to_string(o).expect("reports serialize"));
        out.push('\n');
    }
    out
}

pub fn to_json_pretty(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        format!("  {}\n", parts.join("  "))
    };
    out.push_str(&line(header.to_vec()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
}

/// Aligned plain-text rendering of whatever sections the report carries.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let coeffs: Vec<String> = r.input.coeffs.iter().map(|c| c.0.to_string()).collect();
    let _ = writeln!(out, "{}  q={} m={} coeffs=[{}]", r.input.id, r.input.q, r.input.m, coeffs.join(","));
    let v = &r.validation;
    if !v.accepted {
        let _ =
            writeln!(out, "rejected: {} ({})", v.clause.as_deref().unwrap_or("?"), v.message.as_deref().unwrap_or(""));
        return out;
    }
    let _ = writeln!(
        out,
        "accepted, functional equation sign {}",
        v.functional_equation_sign.map_or("?".to_string(), |s| s.to_string())
    );
    if let Some(np) = &r.newton_polygon {
        let s: Vec<String> = np.iter().map(|e| format!("{} x{}", e.slope, e.multiplicity)).collect();
        let _ = writeln!(out, "newton slopes: {}", s.join(", "));
    }
    if let Some(o) = &r.ordinary {
        let _ = writeln!(out, "ordinary: {} ({})", o.ordinary, o.status);
    }
    if let Some(pp) = &r.prime_profile {
        let _ = writeln!(out, "primes above p:");
        let rows: Vec<Vec<String>> = pp
            .iter()
            .map(|e| {
                vec![
                    e.factor.to_string(),
                    e.degree.to_string(),
                    e.residue_degree.to_string(),
                    e.ramification.to_string(),
                    e.slope.clone(),
                    e.iota_image.to_string(),
                ]
            })
            .collect();
        table(&mut out, &["factor", "deg", "f", "e", "slope", "iota"], &rows);
    }
    if let Some(reg) = &r.regularity {
        match reg.regular {
            Some(b) => {
                let reason = reg.reason.as_ref().map(|x| serde_json::to_string(x).unwrap()).unwrap_or_default();
                let _ = writeln!(out, "regular: {b}  angle rank {}  reason {reason}", reg.angle_rank);
            }
            None => {
                let _ = writeln!(out, "regular: undecided ({})", reg.error.as_deref().unwrap_or(""));
            }
        }
        if !reg.flags.is_empty() {
            let _ = writeln!(out, "flags: {:?}", reg.flags);
        }
    }
    if let Some(cs) = &r.criteria {
        for c in cs {
            let _ = writeln!(out, "criterion {:?}: {:?}", c.criterion, c.status);
        }
    }
    if let Some(inv) = &r.invariants {
        let _ = writeln!(out, "torus invariants (generated in degree two: {}):", inv.generated_in_degree_two);
        let rows: Vec<Vec<String>> = inv
            .rows
            .iter()
            .map(|e| vec![e.n.to_string(), e.dim_invariants.0.to_string(), e.dim_generated.0.to_string()])
            .collect();
        table(&mut out, &["n", "invariants", "generated"], &rows);
    }
    if let Some(poles) = &r.poles {
        let _ = writeln!(out, "pole orders:");
        let rows: Vec<Vec<String>> = poles
            .iter()
            .map(|e| {
                vec![e.n.to_string(), e.fixed_dim.0.to_string(), e.invariant_dim.0.to_string(), e.equal.to_string()]
            })
            .collect();
        table(&mut out, &["n", "fixed", "invariant", "equal"], &rows);
    }
    if let Some(ps) = &r.prime_set {
        let shown: Vec<String> = ps.members.iter().take(20).map(u64::to_string).collect();
        let more = if ps.members.len() > 20 { ", ..." } else { "" };
        let _ = writeln!(
            out,
            "P(X) up to {}: {} of {} tested, density {}: {}{more}",
            ps.bound,
            ps.members.len(),
            ps.tested,
            ps.density,
            shown.join(", ")
        );
    }
    for c in &r.conclusions {
        let _ = writeln!(out, "* {c}");
    }
    for e in &r.errors {
        let _ = writeln!(out, "error: {e}");
    }
    out
}
