//! Identity records, their verification, and the built-in suites.

pub mod certification;
pub mod errata;
pub mod pipeline;

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pipeline::{mathcal_f, mw_series, PipelineResolver};

use crate::qproducts::{parse, Evaluator, QError};

pub const DEFAULT_ORDER: i64 = 600;

pub const SUITES: [&str; 7] = [
    "lemma-2",
    "lemma-3",
    "appendix",
    "corollary",
    "theorem1",
    "combinatorial",
    "certification",
];

const APPENDIX: &str = include_str!("../../data/appendix.json");
const COROLLARY: &str = include_str!("../../data/corollary.json");
const LEMMA2: &str = include_str!("../../data/lemma-2.json");
const LEMMA3: &str = include_str!("../../data/lemma-3.json");
const CERTIFICATION: &str = include_str!("../../data/certification.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub order: i64,
    #[serde(rename = "paperRef", default)]
    pub source: String,
    /// Ids of the errata applied to this record.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    #[serde(rename = "checkedOrder")]
    pub checked_order: i64,
    #[serde(rename = "firstMismatch", skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<String>,
    /// Set when evaluation stopped at the enumeration guard.
    #[serde(skip)]
    pub resource_limited: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("malformed identity file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Eval(#[from] QError),
}

/// Evaluator that knows the pipeline names, shared across calls.
pub fn evaluator() -> &'static Evaluator {
    static EV: OnceLock<Evaluator> = OnceLock::new();
    EV.get_or_init(|| Evaluator::with_resolver(Arc::new(PipelineResolver)))
}

/// Compares both sides exactly on `[min lo, order)`.
pub fn verify(rec: &IdentityRecord, order: Option<i64>) -> VerificationReport {
    let order = order.unwrap_or(rec.order);
    let fail = |reason: String, limited: bool| VerificationReport {
        id: rec.id.clone(),
        status: Status::Fail,
        checked_order: order,
        mismatch: None,
        reason: Some(reason),
        errata: rec.errata.clone(),
        resource_limited: limited,
    };
    let ev = evaluator();
    let sides = parse(&rec.lhs)
        .map_err(|e| format!("lhs: {e}"))
        .and_then(|l| parse(&rec.rhs).map(|r| (l, r)).map_err(|e| format!("rhs: {e}")));
    let (l, r) = match sides {
        Ok(x) => x,
        Err(e) => return fail(e, false),
    };
    let (ls, rs) = match (ev.eval(&l, order), ev.eval(&r, order)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) => return fail(format!("lhs: {e}"), matches!(e, QError::ResourceLimit { .. })),
        (_, Err(e)) => return fail(format!("rhs: {e}"), matches!(e, QError::ResourceLimit { .. })),
    };
    match ls.first_mismatch(&rs) {
        None => VerificationReport {
            id: rec.id.clone(),
            status: Status::Pass,
            checked_order: order,
            mismatch: None,
            reason: None,
            errata: rec.errata.clone(),
            resource_limited: false,
        },
        Some((n, a, b)) => VerificationReport {
            id: rec.id.clone(),
            status: Status::Fail,
            checked_order: order,
            mismatch: Some(Mismatch {
                exponent: n,
                lhs: a.to_string(),
                rhs: b.to_string(),
            }),
            reason: None,
            errata: rec.errata.clone(),
            resource_limited: false,
        },
    }
}

pub fn parse_records(json: &str) -> Result<Vec<IdentityRecord>, VerifyError> {
    serde_json::from_str(json).map_err(|e| VerifyError::Malformed(e.to_string()))
}

/// The named displays used for the `b = 1` certification.
pub fn certification_displays() -> &'static std::collections::BTreeMap<String, String> {
    static D: OnceLock<std::collections::BTreeMap<String, String>> = OnceLock::new();
    D.get_or_init(|| serde_json::from_str(CERTIFICATION).expect("built-in data"))
}

fn rec(id: &str, lhs: String, rhs: String, order: i64, source: &str) -> IdentityRecord {
    IdentityRecord {
        id: id.into(),
        lhs,
        rhs,
        order,
        source: source.into(),
        errata: Vec::new(),
    }
}

fn weighted_f6(f: impl Fn(i64) -> String) -> String {
    (1..=5).map(|b| format!("{b}*{}", f(b))).collect::<Vec<_>>().join(" + ")
}

fn theorem1_records() -> Vec<IdentityRecord> {
    let appendix = parse_records(APPENDIX).expect("built-in data");
    let f6 = |b: i64| {
        let id = format!("appendix.m6.b{b}");
        let r = appendix.iter().find(|r| r.id == id).expect("built-in data");
        format!("({})", r.rhs)
    };
    vec![
        rec(
            "theorem1.analytic",
            weighted_f6(|b| format!("dissect(F({b}),11,6)")),
            "0".into(),
            91,
            "Theorem, weighted sum at 11n+6 <= 1000",
        ),
        rec(
            "theorem1.appendix",
            weighted_f6(f6),
            "0".into(),
            DEFAULT_ORDER,
            "proof of the Theorem, f_6(1)+2f_6(2)+3f_6(3)+4f_6(4)+5f_6(5)=0",
        ),
        rec(
            "theorem1.enumeration",
            weighted_f6(|b| format!("dissect(mw({b}),11,6)")),
            "0".into(),
            6,
            "Theorem, weighted sum at 11n+6 <= 61 by enumeration",
        ),
    ]
}

fn combinatorial_records() -> Vec<IdentityRecord> {
    (1..=5)
        .map(|b| {
            rec(
                &format!("combinatorial.b{b}"),
                format!("F({b})"),
                format!("mw({b})"),
                46,
                "generating function of M_ω(b,11,n) - M_ω(11-b,11,n)",
            )
        })
        .chain((6..=10).map(|b| {
            rec(
                &format!("combinatorial.b{b}"),
                format!("F({b})"),
                format!("-F({})", 11 - b),
                DEFAULT_ORDER,
                "antisymmetry of the generating function",
            )
        }))
        .collect()
}

fn certification_records() -> Vec<IdentityRecord> {
    let d = certification_displays();
    let g = |k: &str| format!("({})", d[k]);
    vec![
        rec(
            "certification.mathcalF1",
            "F(1)".into(),
            g("mathcalF1"),
            DEFAULT_ORDER,
            "expansion of F(1) in products and X",
        ),
        rec(
            "certification.split",
            "F(1)".into(),
            format!("{} + {}", g("h_half"), g("h_threehalf")),
            DEFAULT_ORDER,
            "F(1) = h_{1/2}(1) + h_{3/2}(1)",
        ),
        rec(
            "certification.half",
            g("h_half"),
            g("g_half"),
            947,
            "h_{1/2}(1) = g_{1/2}(1)",
        ),
        rec(
            "certification.threehalf",
            g("h_threehalf"),
            g("g_threehalf"),
            1684,
            "h_{3/2}(1) = g_{3/2}(1)",
        ),
    ]
}

/// Which reading of the printed displays a suite is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reading {
    /// Printed text with the entries of [`errata::ERRATA`] applied.
    #[default]
    Corrected,
    /// Printed text verbatim.
    Printed,
}

/// Applies (or, for atoms, undoes) the errata relevant to `rec`.
pub fn with_reading(mut rec: IdentityRecord, reading: Reading) -> IdentityRecord {
    for e in errata::ERRATA.iter().filter(|e| errata::applies(e, &rec.id)) {
        match (e.kind, reading) {
            (errata::ErratumKind::Text, Reading::Corrected) => {
                rec.rhs = rec.rhs.replace(e.printed, e.corrected);
                rec.errata.push(e.id.into());
            }
            (errata::ErratumKind::Atom(name), Reading::Printed) => {
                let def = format!("({})", e.printed);
                rec.rhs = errata::replace_atom(&rec.rhs, name, &def);
                rec.lhs = errata::replace_atom(&rec.lhs, name, &def);
            }
            (errata::ErratumKind::Atom(_), Reading::Corrected) => rec.errata.push(e.id.into()),
            (errata::ErratumKind::Text, Reading::Printed) => {}
        }
    }
    rec
}

pub fn suite_records(name: &str) -> Result<Vec<IdentityRecord>, VerifyError> {
    suite_records_as(name, Reading::Corrected)
}

pub fn suite_records_as(name: &str, reading: Reading) -> Result<Vec<IdentityRecord>, VerifyError> {
    Ok(printed_records(name)?
        .into_iter()
        .map(|r| with_reading(r, reading))
        .collect())
}

fn printed_records(name: &str) -> Result<Vec<IdentityRecord>, VerifyError> {
    match name {
        "lemma-2" => parse_records(LEMMA2),
        "lemma-3" => parse_records(LEMMA3),
        "appendix" => parse_records(APPENDIX),
        "corollary" => parse_records(COROLLARY),
        "theorem1" => Ok(theorem1_records()),
        "combinatorial" => Ok(combinatorial_records()),
        "certification" => Ok(certification_records()),
        _ => Err(VerifyError::UnknownSuite(name.into())),
    }
}

/// Verifies records on `jobs` workers; reports come back in record order.
pub fn verify_all(records: &[IdentityRecord], order: Option<i64>, jobs: usize) -> Vec<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| records.par_iter().map(|r| verify(r, order)).collect())
}

pub fn run_suite(name: &str, order: Option<i64>, jobs: usize) -> Result<Vec<VerificationReport>, VerifyError> {
    Ok(verify_all(&suite_records(name)?, order, jobs))
}
