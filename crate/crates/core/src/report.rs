//! Input records and the JSON analysis report.
//!
//! Integers that fit in `i64` serialize as JSON numbers and larger ones as
//! decimal strings; rationals serialize as `"p/q"` strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::IntPoly;
use crate::invariants::{degree_two_generation, distinct_transcendental_eigenvalues, pole_orders, WeightSystem};
use crate::primes::enumerate_px;
use crate::torus::{
    decide, gather_evidence, Certificate, RegularityError, RegularityReason, RelationConfig, VerdictFlag,
};
use crate::weil::{is_ordinary, newton_polygon, validate, Ordinariness, WeilError, WeilPolynomial};

pub const SCHEMA_VERSION: &str = "1";

/// An arbitrary-precision integer with a compact JSON form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl<T: Into<BigInt>> From<T> for Int {
    fn from(v: T) -> Self {
        Int(v.into())
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                BigInt::from_str(v).map(Int).map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

fn rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

/// Inputs whose tensor-square Tate conjecture is known and can be granted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    K3,
    Abelian,
    #[default]
    None,
}

/// One input polynomial. Coefficients are ascending, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub id: String,
    pub q: u64,
    pub m: u32,
    pub coeffs: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub hypothesis: Hypothesis,
}

impl InputRecord {
    pub fn poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c.0.clone()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sections {
    pub profile: bool,
    pub regularity: bool,
    pub invariants: bool,
    pub poles: bool,
    pub primes: bool,
}

impl Sections {
    pub const VALIDATE: Sections =
        Sections { profile: false, regularity: false, invariants: false, poles: false, primes: false };
    pub const ALL: Sections = Sections { profile: true, regularity: true, invariants: true, poles: true, primes: true };
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub n_max: usize,
    pub primes_bound: u64,
    pub relations: RelationConfig,
    pub sections: Sections,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { n_max: 4, primes_bound: 1000, relations: RelationConfig::default(), sections: Sections::ALL }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub coeffs: Vec<Int>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional_equation_sign: Option<i8>,
    pub factors: Vec<FactorEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeEntry {
    pub slope: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinarySection {
    pub ordinary: bool,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEntry {
    pub degree: usize,
    pub residue_degree: usize,
    pub ramification: usize,
    pub slope: String,
    pub factor: usize,
    pub iota_image: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub exponents: Vec<i64>,
    /// `j/N` for the root of unity `exp(2 pi i j / N)`.
    pub zeta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSection {
    pub complete: bool,
    pub height_bound: u32,
    pub precision_bits: u64,
    pub angle_rank: usize,
    pub basis: Vec<RelationEntry>,
    pub trivial_basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularitySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<RegularityReason>,
    pub angle_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_agrees: Option<bool>,
    pub flags: Vec<VerdictFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantEntry {
    pub n: usize,
    pub dim_invariants: Int,
    pub dim_generated: Int,
    pub generated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSection {
    pub rows: Vec<InvariantEntry>,
    pub generated_in_degree_two: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleEntry {
    pub n: usize,
    pub fixed_dim: Int,
    pub invariant_dim: Int,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSetSection {
    pub bound: u64,
    pub members: Vec<u64>,
    pub tested: usize,
    pub skipped: Vec<u64>,
    pub density: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscendentalSection {
    pub algebraic_dimension: usize,
    pub transcendental_degree: usize,
    pub distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub input: InputRecord,
    pub validation: Validation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub newton_polygon: Option<Vec<SlopeEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordinary: Option<OrdinarySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_profile: Option<Vec<PrimeEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<RelationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria: Option<Vec<Certificate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<PoleEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcendental: Option<TranscendentalSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_set: Option<PrimeSetSection>,
    pub conclusions: Vec<String>,
    /// Set when a computation ran out of budget and sections are missing.
    pub partial: bool,
    pub errors: Vec<String>,
}

impl AnalysisReport {
    pub fn rejected(&self) -> bool {
        !self.validation.accepted
    }
}

fn validation_section(r: &Result<WeilPolynomial, WeilError>) -> Validation {
    match r {
        Ok(w) => Validation {
            accepted: true,
            clause: None,
            message: None,
            functional_equation_sign: Some(w.functional_equation_sign()),
            factors: w
                .factors()
                .iter()
                .map(|(f, k)| FactorEntry { coeffs: ints(f.coeffs()), multiplicity: *k })
                .collect(),
        },
        Err(e) => Validation {
            accepted: false,
            clause: Some(e.clause().into()),
            message: Some(e.to_string()),
            functional_equation_sign: None,
            factors: Vec::new(),
        },
    }
}

fn ordinary_section(o: &Ordinariness) -> OrdinarySection {
    let (status, wit, reason) = match o {
        Ordinariness::Ordinary(w) => ("ordinary", Some(w), None),
        Ordinariness::NotOrdinary(w) => ("not_ordinary", Some(w), None),
        Ordinariness::NotApplicable { reason } => ("not_applicable", None, Some(reason.clone())),
    };
    OrdinarySection {
        ordinary: o.is_ordinary(),
        status: status.into(),
        coefficient_index: wit.map(|w| w.index),
        coefficient: wit.map(|w| Int(w.coefficient.clone())),
        valuation: wit.and_then(|w| w.valuation),
        reason,
    }
}

pub fn analyze(input: &InputRecord, opts: &AnalyzeOptions) -> AnalysisReport {
    let validated = validate(&input.poly(), input.q, input.m);
    let mut rep = AnalysisReport {
        schema_version: SCHEMA_VERSION.into(),
        input: input.clone(),
        validation: validation_section(&validated),
        newton_polygon: None,
        ordinary: None,
        prime_profile: None,
        relations: None,
        regularity: None,
        criteria: None,
        invariants: None,
        poles: None,
        transcendental: None,
        prime_set: None,
        conclusions: Vec::new(),
        partial: false,
        errors: Vec::new(),
    };
    let Ok(w) = validated else { return rep };
    let s = opts.sections;

    rep.newton_polygon = Some(
        newton_polygon(&w).slopes.iter().map(|(sl, k)| SlopeEntry { slope: rat_str(sl), multiplicity: *k }).collect(),
    );
    rep.ordinary = Some(ordinary_section(&is_ordinary(&w)));

    let needs_lattice = s.profile || s.regularity || s.poles;
    let mut lattice = None;
    if needs_lattice {
        match gather_evidence(&w, &opts.relations) {
            Ok(ev) => {
                rep.prime_profile = Some(
                    ev.profile
                        .primes
                        .iter()
                        .map(|p| PrimeEntry {
                            degree: p.degree,
                            residue_degree: p.residue_degree,
                            ramification: p.ramification,
                            slope: rat_str(&p.slope),
                            factor: p.factor,
                            iota_image: p.iota_image,
                        })
                        .collect(),
                );
                let l = &ev.lattice;
                rep.relations = Some(RelationSection {
                    complete: l.complete,
                    height_bound: l.height_bound,
                    precision_bits: l.precision_bits,
                    angle_rank: l.angle_rank,
                    basis: l
                        .basis
                        .iter()
                        .map(|r| RelationEntry {
                            exponents: r.exponents.clone(),
                            zeta: format!("{}/{}", r.zeta.numerator, r.zeta.order),
                        })
                        .collect(),
                    trivial_basis: l.trivial_basis.clone(),
                });
                if s.regularity {
                    rep.criteria = Some(ev.criteria.clone());
                    rep.regularity = Some(match decide(&ev) {
                        Ok(v) => RegularitySection {
                            regular: Some(v.regular),
                            reason: Some(v.reason),
                            angle_rank: v.angle_rank,
                            lattice_agrees: v.lattice_agrees,
                            flags: v.flags,
                            error: None,
                        },
                        Err(e) => {
                            rep.partial = true;
                            rep.errors.push(e.to_string());
                            RegularitySection {
                                regular: None,
                                reason: None,
                                angle_rank: l.angle_rank,
                                lattice_agrees: None,
                                flags: Vec::new(),
                                error: Some(e.to_string()),
                            }
                        }
                    });
                }
                lattice = Some(ev.lattice);
            }
            Err(e) => {
                rep.partial = true;
                rep.errors.push(RegularityError::from(e).to_string());
            }
        }
        if !s.profile {
            rep.prime_profile = None;
        }
    }

    if s.invariants {
        match degree_two_generation(&WeightSystem::from_weil(&w), opts.n_max) {
            Ok(r) => {
                rep.invariants = Some(InvariantSection {
                    generated_in_degree_two: r.generated_in_degree_two,
                    rows: r
                        .rows
                        .into_iter()
                        .map(|x| InvariantEntry {
                            n: x.n,
                            dim_invariants: Int(x.dim_invariants.into()),
                            dim_generated: Int(x.dim_generated.into()),
                            generated: x.generated,
                        })
                        .collect(),
                })
            }
            Err(e) => {
                rep.partial = true;
                rep.errors.push(e.to_string());
            }
        }
    }

    if s.poles {
        if let Some(l) = &lattice {
            match pole_orders(&w, l, opts.n_max) {
                Ok(r) => {
                    rep.poles = Some(
                        r.rows
                            .into_iter()
                            .map(|x| PoleEntry {
                                n: x.n,
                                fixed_dim: Int(x.fixed_dim.into()),
                                invariant_dim: Int(x.invariant_dim.into()),
                                equal: x.equal,
                            })
                            .collect(),
                    )
                }
                Err(e) => {
                    rep.partial = true;
                    rep.errors.push(e.to_string());
                }
            }
        }
        if w.weight() % 2 == 0 {
            if let Ok(t) = distinct_transcendental_eigenvalues(&w) {
                rep.transcendental = Some(TranscendentalSection {
                    algebraic_dimension: t.algebraic_dimension,
                    transcendental_degree: t.transcendental_degree,
                    distinct: t.distinct,
                });
            }
        }
    }

    if s.primes {
        let r = enumerate_px(&w, opts.primes_bound);
        rep.prime_set = Some(PrimeSetSection {
            bound: r.bound,
            members: r.members,
            tested: r.tested,
            skipped: r.skipped.iter().map(|x| x.0).collect(),
            density: rat_str(&r.density_estimate),
        });
    }

    rep.conclusions = conclusions(&rep, input.hypothesis, w.weight());
    rep
}

fn conclusions(rep: &AnalysisReport, h: Hypothesis, m: u32) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(r) = &rep.regularity {
        match r.regular {
            Some(true) => {
                out.push(format!(
                    "Frobenius is regular: if the Tate conjecture holds for X^2 in codimension {m}, it holds for every power of X"
                ));
                match h {
                    Hypothesis::K3 | Hypothesis::Abelian => out.push(format!(
                        "the Tate conjecture for X^2 is granted for this input ({}), so it holds for every power of X",
                        if h == Hypothesis::K3 { "k3" } else { "abelian" }
                    )),
                    Hypothesis::None => {}
                }
            }
            Some(false) => out.push("Frobenius is not regular: no conclusion about powers of X".into()),
            None => out.push("regularity undecided within the search budget".into()),
        }
    }
    if let Some(p) = &rep.prime_set {
        if !p.members.is_empty() {
            out.push(format!(
                "for the {} listed primes l, l-adic homological equivalence is predicted to agree with numerical equivalence",
                p.members.len()
            ));
        }
    }
    out
}
