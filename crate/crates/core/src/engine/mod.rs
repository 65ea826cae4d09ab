//! Decision procedures for the structure and finiteness theorems, and
//! reproduction of the worked examples.
//!
//! Every procedure returns a [`Certificate`]: the hypotheses in the order
//! they are checked, each with the computed witness, and a conclusion.
//! Evaluation stops at the first failing hypothesis.

mod examples;
mod finite;
mod s1;
mod s2;

pub use examples::{appendix_polynomial, Check, Report};
pub use finite::FiniteTheorem;
pub use s1::SearchHit;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::abelian::{FinAbGroup, GroupShape};
use crate::extfield::{subfield_obstruction, ExtError, NumberFieldProfile};
use crate::lmfdbio::{FetchError, ProfileStore, Provenance};
use crate::par::Execution;
use crate::pgroups::{golod_shafarevich_infinite, GeneratorRank, ModularGroup, PGroupError};
use crate::quadfield::{Modulus, PrimeIdeal, QuadError, QuadField};
use crate::rayclass::RayError;

/// Primes up to this bound are compared when matching fields by splitting.
pub const SPLITTING_BOUND: u64 = 300;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("-p: {0} must be an odd prime")]
    NotOddPrime(u64),
    #[error("-p: theorem {theorem} needs p = 2, got {p}")]
    NotTwo { theorem: String, p: u64 },
    #[error("-d: {field} contains a primitive root of unity of order {p}")]
    RootsOfUnity { field: String, p: u64 },
    #[error("{flag}: prime {prime} lies above p = {p}")]
    WildPrime { flag: String, prime: String, p: u64 },
    #[error("{flag}: {msg}")]
    Usage { flag: String, msg: String },
    #[error("missing field data: {0}")]
    MissingProfile(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Ray(#[from] RayError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    PGroup(#[from] PGroupError),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl EngineError {
    /// 1 = usage, 2 = data or fixture problem, 3 = internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::NotOddPrime(_)
            | EngineError::NotTwo { .. }
            | EngineError::RootsOfUnity { .. }
            | EngineError::WildPrime { .. }
            | EngineError::Usage { .. }
            | EngineError::Quad(_) => 1,
            EngineError::Internal(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeRecord {
    pub label: String,
    pub norm: String,
    pub generator: String,
}

impl PrimeRecord {
    pub fn new(q: &PrimeIdeal) -> Self {
        PrimeRecord {
            label: q.label(),
            norm: q.norm_big().to_string(),
            generator: q.ideal.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub witness: Value,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Explicit presentation and order.
    Presentation,
    /// Finiteness (and powerfulness where proven), no presentation.
    Finite,
    HypothesesNotMet,
    /// Hypotheses hold but the order could not be pinned down.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conclusion {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<ModularGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub powerful: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_rank: Option<GeneratorRank>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failing: Option<String>,
    pub notes: Vec<String>,
}

impl Conclusion {
    fn new(status: Status) -> Self {
        Conclusion {
            status,
            order: None,
            presentation: None,
            group: None,
            powerful: None,
            generator_rank: None,
            first_failing: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub theorem: String,
    pub field: i64,
    pub p: u64,
    #[serde(rename = "S")]
    pub s: Vec<PrimeRecord>,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn first_failing(&self) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| !h.pass)
    }

    pub fn order(&self) -> Option<BigInt> {
        self.conclusion.order.as_ref().and_then(|o| o.parse().ok())
    }

    /// Plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s: Vec<String> = self
            .s
            .iter()
            .map(|q| format!("{} (norm {})", q.label, q.norm))
            .collect();
        out.push_str(&format!(
            "theorem {}: d = {}, p = {}, S = {{{}}}\n",
            self.theorem,
            self.field,
            self.p,
            s.join(", ")
        ));
        for h in &self.hypotheses {
            out.push_str(&format!(
                "  [{}] {}: {}\n",
                if h.pass { "ok" } else { "FAIL" },
                h.name,
                h.witness
            ));
        }
        let c = &self.conclusion;
        out.push_str(&format!("  conclusion: {}\n", status_text(c.status)));
        if let Some(f) = &c.first_failing {
            out.push_str(&format!("  first failing hypothesis: {f}\n"));
        }
        if let Some(o) = &c.order {
            out.push_str(&format!("  order: {o}\n"));
        }
        if let Some(pr) = &c.presentation {
            out.push_str(&format!("  presentation: {pr}\n"));
        }
        if let Some(p) = c.powerful {
            out.push_str(&format!("  powerful: {p}\n"));
        }
        if let Some(r) = &c.generator_rank {
            out.push_str(&format!(
                "  generator rank: {} (bound {})\n",
                r.exact, r.bound
            ));
        }
        for n in &c.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

pub fn status_text(s: Status) -> &'static str {
    match s {
        Status::Presentation => "presentation",
        Status::Finite => "finite",
        Status::HypothesesNotMet => "hypotheses not met",
        Status::Undetermined => "undetermined",
    }
}

/// Accumulates hypotheses, stopping at the first failure.
struct Checklist {
    items: Vec<Hypothesis>,
}

impl Checklist {
    fn new() -> Self {
        Checklist { items: Vec::new() }
    }

    /// Record a hypothesis; returns whether it passed.
    fn check(&mut self, name: &str, witness: Value, pass: bool) -> bool {
        self.items.push(Hypothesis {
            name: name.to_string(),
            witness,
            pass,
        });
        pass
    }

    fn failed(&self) -> Option<String> {
        self.items.iter().find(|h| !h.pass).map(|h| h.name.clone())
    }

    fn not_met(self, theorem: &str, k: &QuadField, p: u64, s: &[PrimeIdeal]) -> Certificate {
        let mut c = Conclusion::new(Status::HypothesesNotMet);
        c.first_failing = self.failed();
        Certificate {
            theorem: theorem.into(),
            field: k.d(),
            p,
            s: s.iter().map(PrimeRecord::new).collect(),
            hypotheses: self.items,
            conclusion: c,
        }
    }

    fn finish(
        self,
        theorem: &str,
        k: &QuadField,
        p: u64,
        s: &[PrimeIdeal],
        conclusion: Conclusion,
    ) -> Certificate {
        Certificate {
            theorem: theorem.into(),
            field: k.d(),
            p,
            s: s.iter().map(PrimeRecord::new).collect(),
            hypotheses: self.items,
            conclusion,
        }
    }
}

/// Invariants without trivial factors.
pub fn group_shape(g: &FinAbGroup) -> GroupShape {
    GroupShape(
        g.invariants()
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect(),
    )
}

/// The p-primary part as an invariant list.
pub fn p_part_shape(g: &FinAbGroup, p: u64) -> GroupShape {
    GroupShape::normalized(
        &g.p_part(p)
            .into_iter()
            .filter(|d| !d.is_one())
            .collect::<Vec<_>>(),
    )
}

fn shape_json(s: &GroupShape) -> Value {
    Value::String(s.to_string())
}

fn class_group_witness(cl: &crate::quadfield::ClassGroup, p_part: &GroupShape) -> Value {
    serde_json::json!({
        "class_number": cl.group().order().map(|h| h.to_string()),
        "class_group": shape_json(&group_shape(cl.group())),
        "p_part": shape_json(p_part),
    })
}

/// Resolve a modulus spec naming exactly one prime ideal with exponent 1.
pub fn parse_prime(k: &QuadField, spec: &str, flag: &str) -> Result<PrimeIdeal, EngineError> {
    let m = Modulus::parse(k, spec).map_err(|e| EngineError::Usage {
        flag: flag.into(),
        msg: e.to_string(),
    })?;
    match m.factors() {
        [(q, 1)] => Ok(q.clone()),
        _ => Err(EngineError::Usage {
            flag: flag.into(),
            msg: format!(
                "'{spec}' must name a single prime ideal (use ℓ.i for split primes), got {}",
                m.label()
            ),
        }),
    }
}

fn require_odd_prime(p: u64) -> Result<(), EngineError> {
    if p < 3 || !crate::arith::is_prime_u64(p) {
        return Err(EngineError::NotOddPrime(p));
    }
    Ok(())
}

fn require_no_roots_of_unity(k: &QuadField, p: u64) -> Result<(), EngineError> {
    if k.unit_torsion() as u64 % p == 0 {
        return Err(EngineError::RootsOfUnity { field: k.name(), p });
    }
    Ok(())
}

fn require_tame(q: &PrimeIdeal, p: u64, flag: &str) -> Result<(), EngineError> {
    if q.ell == p {
        return Err(EngineError::WildPrime {
            flag: flag.into(),
            prime: q.label(),
            p,
        });
    }
    Ok(())
}

/// The emitted group must satisfy its relations, have abelianization equal
/// to the p-part of the tame ray class group, and not be forced infinite.
fn certify_group(g: &ModularGroup, ray_p_part: &GroupShape) -> Result<(), EngineError> {
    if !g.verify() {
        return Err(EngineError::Internal(format!(
            "{} fails its relations",
            g.presentation()
        )));
    }
    let ab = g.realization().abelianization();
    if &ab != ray_p_part {
        return Err(EngineError::Internal(format!(
            "abelianization {ab} of {} differs from the ray class p-part {ray_p_part}",
            g.presentation()
        )));
    }
    // two generators, and a trivial Schur multiplier gives two relations
    if golod_shafarevich_infinite(2, 2) {
        return Err(EngineError::Internal(
            "Golod-Shafarevich contradicts finiteness".into(),
        ));
    }
    Ok(())
}

/// Theorem checker holding the field-data store.
pub struct Engine {
    store: ProfileStore,
    exec: Execution,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(ProfileStore::fixtures_only(), Execution::default())
    }
}

impl Engine {
    pub fn new(store: ProfileStore, exec: Execution) -> Self {
        Engine { store, exec }
    }

    pub fn store(&self) -> &ProfileStore {
        &self.store
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    /// Candidates labelled `deg.0.disc.i` for small i that pass `accept`.
    fn find_profile(
        &self,
        degree: usize,
        disc: &BigInt,
        what: &str,
        accept: impl Fn(&NumberFieldProfile) -> Result<bool, EngineError>,
    ) -> Result<(NumberFieldProfile, Provenance), EngineError> {
        let prefix = format!("{degree}.0.{disc}.");
        let mut found = Vec::new();
        let mut last_err = None;
        for i in 1..=8 {
            match self.store.fetch_label(&format!("{prefix}{i}")) {
                Ok(f) => {
                    if accept(&f.profile)? {
                        found.push((f.profile, f.provenance));
                    }
                }
                Err(FetchError::FixtureMiss(_)) | Err(FetchError::NotFound { .. }) => {}
                Err(e) => last_err = Some(e.to_string()),
            }
        }
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            0 => Err(EngineError::MissingProfile(format!(
                "no profile for {what} among labels {prefix}*{}",
                last_err.map(|e| format!(" ({e})")).unwrap_or_default()
            ))),
            _ => Err(EngineError::MissingProfile(format!(
                "{what} is ambiguous: {}",
                found
                    .iter()
                    .map(|(p, _)| p.label.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))),
        }
    }

    /// H_p(K) for a cyclic p-class group of order p: degree 2p, |D| = |d_K|^p.
    pub fn hilbert_p_profile(
        &self,
        k: &QuadField,
        p: u64,
    ) -> Result<(NumberFieldProfile, Provenance), EngineError> {
        let disc = BigInt::from(k.discriminant().unsigned_abs()).pow(p as u32);
        let kpoly = NumberFieldProfile::imaginary_quadratic(k).defining;
        self.find_profile(
            2 * p as usize,
            &disc,
            &format!("H_{p}(K) of {}", k.name()),
            |prof| Ok(subfield_obstruction(&kpoly, &prof.defining, SPLITTING_BOUND).is_none()),
        )
    }
}
