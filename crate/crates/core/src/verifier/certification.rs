//! Turning the weight-1/2 and weight-3/2 identities into generalized
//! eta-product identities on Γ1(121).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{suite_records, IdentityRecord};
use crate::modular::EtaIdentity;
use crate::qproducts::{linear_combination, parse, Monomial, QError, QExpr};

pub const LEVEL: u64 = 121;

/// `X(q^a; q^11)` for `1 <= a <= 5` as products plus a constant.
fn x_eta(a: u64) -> Result<QExpr, QError> {
    let id = format!("lemma2.xeta.{a}");
    let rec = suite_records("lemma-2")
        .expect("built-in data")
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| QError::Undefined(id.clone()))?;
    Ok(parse(&rec.rhs)?)
}

/// Replaces every `X(j,K)` with `K = 11 s`, `j = a s` by its product form.
pub fn eliminate_x(e: &QExpr) -> Result<QExpr, QError> {
    let mut err = None;
    let out = e.map(&mut |node| match node {
        QExpr::X(j, k) if k % 11 == 0 && j % (k / 11) == 0 => {
            let s = k / 11;
            let a = (j / s) % 11;
            let (a, neg) = if a > 5 { (11 - a, true) } else { (a, false) };
            if a == 0 {
                err = Some(QError::Undefined(format!("X({j},{k})")));
                return QExpr::int(0);
            }
            match x_eta(a) {
                Ok(x) => {
                    let x = if s == 1 { x } else { x.scale(s) };
                    if neg {
                        x.neg()
                    } else {
                        x
                    }
                }
                Err(e) => {
                    err = Some(e);
                    QExpr::int(0)
                }
            }
        }
        QExpr::X(j, k) => {
            err = Some(QError::Undefined(format!("no product form for X({j},{k})")));
            QExpr::X(j, k)
        }
        other => other,
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Merged terms of `lhs - rhs` after eliminating `X`.
pub fn monomial_terms(lhs: &str, rhs: &str) -> Result<Vec<(BigRational, Monomial)>, QError> {
    let e = parse(lhs)?.sub(parse(rhs)?);
    linear_combination(&eliminate_x(&e)?)
}

pub fn eta_identity_from_terms(name: &str, terms: &[(BigRational, Monomial)], level: u64) -> Result<EtaIdentity, QError> {
    let terms = terms
        .iter()
        .map(|(c, m)| Ok((c.clone(), m.to_generalized_eta(level)?)))
        .collect::<Result<Vec<_>, QError>>()?;
    Ok(EtaIdentity {
        name: name.into(),
        level,
        terms,
    })
}

/// `lhs - rhs` of a record as an identity between eta-products of `level`.
pub fn eta_identity(rec: &IdentityRecord, level: u64) -> Result<EtaIdentity, QError> {
    eta_identity_from_terms(&rec.id, &monomial_terms(&rec.lhs, &rec.rhs)?, level)
}

/// The printed `h = g` pairs for `b = 1`, weight 1/2 then weight 3/2.
pub fn build_b1_certification_inputs() -> (IdentityRecord, IdentityRecord) {
    let recs = suite_records("certification").expect("built-in data");
    let get = |id: &str| recs.iter().find(|r| r.id == id).cloned().expect("built-in data");
    (get("certification.half"), get("certification.threehalf"))
}

fn appendix_rhs(m: u32, b: i64) -> String {
    let id = format!("appendix.m{m}.b{b}");
    suite_records("appendix")
        .expect("built-in data")
        .into_iter()
        .find(|r| r.id == id)
        .map(|r| r.rhs)
        .expect("built-in data")
}

fn lemma_rhs(a: i64, j: u32) -> String {
    let id = format!("lemma3.s{j}.a{a}");
    suite_records("lemma-3")
        .expect("built-in data")
        .into_iter()
        .find(|r| r.id == id)
        .map(|r| r.rhs)
        .expect("built-in data")
}

/// `F(b)` written through the lemma displays, minus `Σ_m q^m f_m(b)(q^11)`
/// from the Appendix, as monomial terms grouped by weight.
pub fn weight_split(b: i64) -> Result<BTreeMap<BigRational, Vec<(BigRational, Monomial)>>, QError> {
    if !(1..=5).contains(&b) {
        return Err(QError::BadCall(format!("b = {b}")));
    }
    // every j = 2 display carries the same `- sigma(121)`, which cancels in the differences
    let d = |a: i64, j: u32| {
        let e = parse(&lemma_rhs(a, j)).expect("built-in data");
        format!("({})", drop_sigma(&e))
    };
    let lhs = format!(
        "(11/J(1))*({} - {}) - ({}/J(1))*({} - {})",
        d(b - 1, 2),
        d(b, 2),
        11 - b,
        d(b - 1, 1),
        d(b, 1)
    );
    let rhs = (0..11u32)
        .map(|m| {
            let scaled = scale_atoms(&appendix_rhs(m, b));
            format!("q^{m}*({scaled})")
        })
        .collect::<Vec<_>>()
        .join(" + ");
    let mut by_weight: BTreeMap<BigRational, Vec<(BigRational, Monomial)>> = BTreeMap::new();
    for (c, m) in monomial_terms(&lhs, &rhs)? {
        if !c.is_zero() {
            by_weight.entry(m.weight()).or_default().push((c, m));
        }
    }
    Ok(by_weight)
}

fn drop_sigma(e: &QExpr) -> QExpr {
    e.map(&mut |n| match n {
        QExpr::Sigma(_) => QExpr::int(0),
        other => other,
    })
}

/// Rewrites an Appendix right side in `q^11`.
fn scale_atoms(s: &str) -> String {
    let e = parse(s).expect("built-in data");
    e.map(&mut |n| match n {
        QExpr::BigT | QExpr::SmallT | QExpr::V(_) | QExpr::Y(_) => n.scale(11),
        other => other,
    })
    .to_string()
}

/// Weight-`1/2` and weight-`3/2` identities for `b` in `1..=5`, built from the
/// lemma displays and the Appendix.
pub fn identities_for(b: i64) -> Result<(EtaIdentity, EtaIdentity), QError> {
    let split = weight_split(b)?;
    let half = BigRational::new(1.into(), 2.into());
    let three = BigRational::new(3.into(), 2.into());
    if let Some(w) = split.keys().find(|w| **w != half && **w != three) {
        return Err(QError::BadCall(format!("weight {w} terms survive for b = {b}")));
    }
    let empty = Vec::new();
    Ok((
        eta_identity_from_terms(&format!("b{b}.half"), split.get(&half).unwrap_or(&empty), LEVEL)?,
        eta_identity_from_terms(&format!("b{b}.threehalf"), split.get(&three).unwrap_or(&empty), LEVEL)?,
    ))
}
