//! Cusps of Γ1(N), orders of generalized eta-products, Robins' criterion,
//! the bound B and Sturm-type certificates.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qproducts::{p2, GeneralizedEtaProduct, QError};
use crate::series::LaurentSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("constituent {index} is not a modular function on Γ1({level}): {reason}")]
    NotModular { index: usize, level: u64, reason: String },
    #[error("need coefficients through q^{needed} but only {available} were requested")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("identity has no term to normalize by")]
    Normalization,
    #[error("constituent level {found} differs from {expected}")]
    LevelMismatch { expected: u64, found: u64 },
    #[error(transparent)]
    Expansion(#[from] QError),
}

/// The cusp `a/c`; infinity is `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
    pub width: u64,
}

impl Cusp {
    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }
}

pub fn fan_width(n: u64, c: i64) -> u64 {
    let g = (c.unsigned_abs()).gcd(&n);
    if n == 4 && g == 2 {
        1
    } else {
        n / g
    }
}

/// Whether `a/c` and `a2/c2` are equivalent mod Γ1(N): some `n` in `0..N`
/// has `(a2, c2) ≡ ±(a + n c, c) (mod N)`.
pub fn equivalent(n: u64, (a, c): (i64, i64), (a2, c2): (i64, i64)) -> bool {
    let m = n as i64;
    let md = |x: i64| x.rem_euclid(m);
    (0..m).any(|k| {
        let (x, y) = (md(a + k * c), md(c));
        (md(a2) == x && md(c2) == y) || (md(-a2) == x && md(-c2) == y)
    })
}

/// A complete set of inequivalent cusps of Γ1(N).
///
/// The class of `a/c` is `±(c mod N, a mod gcd(c, N))`. Each class gets the
/// representative with the smallest nonnegative `c`, then the smallest
/// nonnegative `a` coprime to `c`; `∞ = 1/0` comes first.
pub fn cusp_set(n: u64) -> Vec<Cusp> {
    assert!(n >= 1, "level must be positive");
    let m = n as i64;
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut out = Vec::new();
    let key = |c: i64, a: i64| {
        let d = c.gcd(&m);
        (c.rem_euclid(m), a.rem_euclid(d))
    };
    for cbar in 0..m {
        let d = cbar.gcd(&m);
        for abar in 0..d {
            if abar.gcd(&d) != 1 {
                continue;
            }
            let k = key(cbar, abar);
            if seen.contains(&k) {
                continue;
            }
            let neg = key(-cbar, -abar);
            seen.insert(k);
            seen.insert(neg);
            out.push(representative(m, (cbar, abar), neg));
        }
    }
    out.sort_by_key(|s| (s.c, s.a));
    out
}

fn representative(m: i64, (c1, a1): (i64, i64), (c2, a2): (i64, i64)) -> Cusp {
    let pick = |c: i64, abar: i64| -> Option<(i64, i64)> {
        let d = c.gcd(&m);
        if c == 0 {
            // only ±1/0 has c = 0
            return (abar.rem_euclid(d) == 1 % d).then_some((0, 1));
        }
        let mut a = abar;
        while a.gcd(&c) != 1 {
            a += d;
        }
        Some((c, a))
    };
    let mut cands: Vec<(i64, i64)> = Vec::new();
    for (c, a) in [(c1, a1), (c2, a2)] {
        if let Some(x) = pick(c, a) {
            cands.push(x);
        } else if let Some(x) = pick(c + m, a) {
            cands.push(x);
        }
    }
    let (c, a) = cands.into_iter().min().expect("a representative exists");
    Cusp {
        a,
        c,
        width: fan_width(m as u64, c),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Outcome of Robins' two congruence conditions, with classical factors
/// `(q^δ;q^δ)_∞^c` read as `η_{δ,0}^{c/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularityReport {
    pub condition_i: bool,
    pub condition_ii: bool,
    /// The q-power left after writing every factor as an eta function must vanish.
    pub pure_eta_product: bool,
    pub sum_i: String,
    pub sum_ii: String,
}

impl ModularityReport {
    pub fn passes(&self) -> bool {
        self.condition_i && self.condition_ii && self.pure_eta_product
    }

    pub fn failure(&self) -> Option<String> {
        if !self.pure_eta_product {
            Some("leftover power of q".into())
        } else if !self.condition_i {
            Some(format!("condition (i): Σ δ P2(g/δ) r = {} is not 0 mod 2", self.sum_i))
        } else if !self.condition_ii {
            Some(format!("condition (ii): Σ (N/δ) P2(0) r = {} is not 0 mod 2", self.sum_ii))
        } else {
            None
        }
    }
}

fn even(x: &BigRational) -> bool {
    x.is_integer() && x.to_integer().is_even()
}

pub fn is_modular(f: &GeneralizedEtaProduct) -> ModularityReport {
    let n = f.level as i64;
    let sixth = rat(1, 6);
    let mut s1 = BigRational::zero();
    let mut s2 = BigRational::zero();
    for ((d, g), r) in &f.exponents {
        let d = *d as i64;
        s1 += ri(d) * p2(&rat(*g as i64, d)) * ri(*r);
        s2 += ri(n / d) * &sixth * ri(*r);
    }
    for (d, c) in &f.classical {
        let d = *d as i64;
        let half = rat(*c, 2);
        s1 += ri(d) * &sixth * &half;
        s2 += ri(n / d) * &sixth * &half;
    }
    ModularityReport {
        condition_i: even(&s1),
        condition_ii: even(&s2),
        pure_eta_product: f.residual_q_power().is_zero(),
        sum_i: s1.to_string(),
        sum_ii: s2.to_string(),
    }
}

/// Invariant order `ord(f; a/c)`; at `1/0` this is the leading exponent.
pub fn invariant_order(f: &GeneralizedEtaProduct, s: &Cusp) -> BigRational {
    let mut total = BigRational::zero();
    for ((d, g), r) in &f.exponents {
        let d = *d as i64;
        let e = d.gcd(&s.c);
        total += rat(e * e, 2 * d) * p2(&rat(s.a * *g as i64, e)) * ri(*r);
    }
    for (d, c) in &f.classical {
        let d = *d as i64;
        let e = d.gcd(&s.c);
        total += rat(e * e * c, 24 * d);
    }
    if s.is_infinity() {
        total += f.residual_q_power();
    }
    total
}

/// `Ord(f, s, Γ1(N))`: the invariant order times the fan width.
pub fn order_at_cusp(f: &GeneralizedEtaProduct, s: &Cusp) -> BigRational {
    invariant_order(f, s) * ri(s.width as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspBound {
    pub a: i64,
    pub c: i64,
    pub width: u64,
    #[serde(rename = "minOrd")]
    pub min_ord: String,
}

/// `B = Σ_{s≠∞} min({Ord(f_j, s)} ∪ {0})` together with the per-cusp minima.
pub fn compute_b(constituents: &[GeneralizedEtaProduct], n: u64) -> Result<(BigRational, Vec<CuspBound>), ModularError> {
    for (i, f) in constituents.iter().enumerate() {
        if f.level != n {
            return Err(ModularError::LevelMismatch { expected: n, found: f.level });
        }
        let rep = is_modular(f);
        if let Some(reason) = rep.failure() {
            return Err(ModularError::NotModular { index: i, level: n, reason });
        }
    }
    let cusps = cusp_set(n);
    let rows: Vec<CuspBound> = cusps
        .par_iter()
        .filter(|s| !s.is_infinity())
        .map(|s| {
            let m = constituents
                .iter()
                .map(|f| order_at_cusp(f, s))
                .fold(BigRational::zero(), |acc, o| if o < acc { o } else { acc });
            CuspBound {
                a: s.a,
                c: s.c,
                width: s.width,
                min_ord: m.to_string(),
            }
        })
        .collect();
    let mut b = BigRational::zero();
    for r in &rows {
        b += r.min_ord.parse::<BigRational>().expect("printed rational");
    }
    Ok((b, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertStatus {
    Certified,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub identity: String,
    pub level: u64,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "requiredOrder")]
    pub required_order: i64,
    #[serde(rename = "verifiedTo")]
    pub verified_to: i64,
    #[serde(rename = "perCusp")]
    pub per_cusp: Vec<CuspBound>,
    pub status: CertStatus,
    #[serde(rename = "constituentCount")]
    pub constituent_count: usize,
    #[serde(rename = "firstNonzero", skip_serializing_if = "Option::is_none")]
    pub first_nonzero: Option<i64>,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.status == CertStatus::Certified
    }
}

/// An identity `Σ α_j M_j = 0` between generalized eta-products of one level.
#[derive(Debug, Clone)]
pub struct EtaIdentity {
    pub name: String,
    pub level: u64,
    pub terms: Vec<(BigRational, GeneralizedEtaProduct)>,
}

fn quotient(a: &GeneralizedEtaProduct, b: &GeneralizedEtaProduct) -> GeneralizedEtaProduct {
    let mut out = a.clone();
    for (k, r) in &b.exponents {
        *out.exponents.entry(*k).or_insert(0) -= r;
    }
    out.exponents.retain(|_, r| *r != 0);
    for (k, c) in &b.classical {
        *out.classical.entry(*k).or_insert(0) -= c;
    }
    out.classical.retain(|_, c| *c != 0);
    out.q_prefactor_exp -= &b.q_prefactor_exp;
    out
}

impl EtaIdentity {
    /// `g = 1 + Σ_{j≠k} (α_j/α_k) M_j/M_k`, as coefficients and constituents.
    pub fn normalized(&self, k: usize) -> Result<(Vec<BigRational>, Vec<GeneralizedEtaProduct>), ModularError> {
        let (a0, m0) = self.terms.get(k).ok_or(ModularError::Normalization)?;
        if a0.is_zero() {
            return Err(ModularError::Normalization);
        }
        let mut coeffs = Vec::new();
        let mut fs = Vec::new();
        for (j, (a, m)) in self.terms.iter().enumerate() {
            if j == k {
                continue;
            }
            coeffs.push(a / a0);
            fs.push(quotient(m, m0));
        }
        Ok((coeffs, fs))
    }

    /// Index of the term with the lowest order at infinity; the first such term on ties.
    pub fn canonical_normalizer(&self) -> Result<usize, ModularError> {
        let inf = Cusp { a: 1, c: 0, width: 1 };
        let mut best: Option<(BigRational, usize)> = None;
        for (k, (a, m)) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let o = invariant_order(m, &inf);
            if best.as_ref().is_none_or(|(bo, _)| &o < bo) {
                best = Some((o, k));
            }
        }
        best.map(|x| x.1).ok_or(ModularError::Normalization)
    }

    pub fn bound(&self, k: usize) -> Result<BigRational, ModularError> {
        let (_, fs) = self.normalized(k)?;
        Ok(compute_b(&fs, self.level)?.0)
    }
}

/// Sum of `c_j f_j` expanded to `q^prec`, plus 1.
pub fn expand_normalized(coeffs: &[BigRational], fs: &[GeneralizedEtaProduct], prec: i64) -> Result<LaurentSeries, ModularError> {
    let parts: Result<Vec<LaurentSeries>, QError> = coeffs
        .par_iter()
        .zip(fs.par_iter())
        .map(|(c, f)| Ok(f.expand(prec)?.scalar_mul(c)))
        .collect();
    let parts = parts?;
    let mut acc = LaurentSeries::one(prec);
    for p in &parts {
        acc = acc.add(p);
    }
    Ok(acc.truncate(prec))
}

/// Sturm-type certification: normalizes by term `k`, computes B and checks
/// that `g` vanishes through `q^⌈-B⌉`.
pub fn certify(id: &EtaIdentity, k: usize, available: Option<i64>) -> Result<Certificate, ModularError> {
    let (coeffs, fs) = id.normalized(k)?;
    let (b, rows) = compute_b(&fs, id.level)?;
    let neg = -&b;
    let required = neg.ceil().to_integer().to_i64().expect("small bound") + 1;
    if let Some(av) = available {
        if av < required {
            return Err(ModularError::InsufficientPrecision { needed: required, available: av });
        }
    }
    let g = expand_normalized(&coeffs, &fs, required)?;
    let first = (g.lo()..g.prec()).find(|&n| !g.coeff_or_zero(n).is_zero());
    Ok(Certificate {
        identity: id.name.clone(),
        level: id.level,
        b: format!("{}/{}", b.numer(), b.denom()),
        required_order: required,
        verified_to: first.unwrap_or(required),
        per_cusp: rows,
        status: if first.is_none() { CertStatus::Certified } else { CertStatus::Failed },
        constituent_count: fs.len(),
        first_nonzero: first,
    })
}

/// `Σ_s Ord(f, s)` over every cusp.
pub fn valence_sum(f: &GeneralizedEtaProduct) -> BigRational {
    cusp_set(f.level)
        .iter()
        .map(|s| order_at_cusp(f, s))
        .fold(BigRational::zero(), |a, b| a + b)
}

