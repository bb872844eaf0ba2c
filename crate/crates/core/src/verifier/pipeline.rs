//! Named series used by identity records: `F(b)`, the bilateral sums and
//! the brute-force `M_ω` generating function.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;

use crate::lambert::{self, SSpec};
use crate::partitions::{self, PartitionStats};
use crate::qproducts::eval::{const_int, Evaluator, Resolver};
use crate::qproducts::products::euler_product;
use crate::qproducts::{QError, QExpr};
use crate::series::LaurentSeries;

fn f_cache() -> &'static Mutex<HashMap<i64, LaurentSeries>> {
    static C: OnceLock<Mutex<HashMap<i64, LaurentSeries>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// `Σ_n (M_ω(b,11,n) - M_ω(11-b,11,n)) q^n` from the bilateral-sum
/// representation, to `q^prec`.
pub fn mathcal_f(b: i64, prec: i64) -> Result<LaurentSeries, QError> {
    if !(1..=10).contains(&b) {
        return Err(QError::BadCall(format!("F({b}) needs 1 <= b <= 10")));
    }
    if let Some(s) = f_cache().lock().expect("cache lock").get(&b) {
        if s.prec() >= prec {
            return Ok(s.truncate(prec));
        }
    }
    let s2 = lambert::s_total(b - 1, 11, 1, 2, prec)?.sub(&lambert::s_total(b, 11, 1, 2, prec)?);
    let s1 = lambert::s_total(b - 1, 11, 1, 1, prec)?.sub(&lambert::s_total(b, 11, 1, 1, prec)?);
    let num = s2
        .scalar_mul(&BigRational::from_integer(11.into()))
        .sub(&s1.scalar_mul(&BigRational::from_integer((11 - b).into())));
    let f = num.div(&euler_product(1, prec))?.truncate(prec);
    f_cache().lock().expect("cache lock").insert(b, f.clone());
    Ok(f)
}

fn stats_cache() -> &'static Mutex<HashMap<u32, PartitionStats>> {
    static C: OnceLock<Mutex<HashMap<u32, PartitionStats>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Statistics of partitions of `n` modulo 11, memoized.
pub fn stats11(n: u32) -> Result<PartitionStats, partitions::PartitionError> {
    if let Some(s) = stats_cache().lock().expect("cache lock").get(&n) {
        return Ok(s.clone());
    }
    let s = partitions::stats_table(n, 11, false)?;
    stats_cache().lock().expect("cache lock").insert(n, s.clone());
    Ok(s)
}

/// `Σ_{n<prec} (M_ω(b,11,n) - M_ω(11-b,11,n)) q^n` by enumeration.
pub fn mw_series(b: i64, prec: i64) -> Result<LaurentSeries, QError> {
    if !(1..=10).contains(&b) {
        return Err(QError::BadCall(format!("mw({b}) needs 1 <= b <= 10")));
    }
    let top = (prec - 1).max(0);
    if top > partitions::ENUMERATION_GUARD as i64 {
        return Err(QError::ResourceLimit {
            what: format!("mw({b}) to order {prec}"),
            guard: partitions::ENUMERATION_GUARD,
        });
    }
    let mut c = Vec::with_capacity(prec.max(0) as usize);
    for n in 0..prec.max(0) {
        let st = stats11(n as u32).map_err(|e| QError::BadCall(e.to_string()))?;
        c.push(st.m_omega(b) as i64 - st.m_omega(11 - b) as i64);
    }
    Ok(LaurentSeries::from_i64s(0, &c))
}

/// Resolves `F(b)`, `mw(b)`, `S(m,a,k,l,j)`, `Ssum(a,k,l,j)` and `psum(a,k,j)`.
pub struct PipelineResolver;

fn ints(args: &[QExpr], n: usize, name: &str) -> Result<Vec<i64>, QError> {
    if args.len() != n {
        return Err(QError::BadCall(format!("{name} takes {n} arguments")));
    }
    args.iter().map(const_int).collect()
}

impl Resolver for PipelineResolver {
    fn call(&self, name: &str, args: &[QExpr], prec: i64, _ev: &Evaluator) -> Option<Result<LaurentSeries, QError>> {
        let r = match name {
            "F" => ints(args, 1, name).and_then(|v| mathcal_f(v[0], prec)),
            "mw" => ints(args, 1, name).and_then(|v| mw_series(v[0], prec)),
            "S" => ints(args, 5, name).and_then(|v| {
                let j = u32::try_from(v[4]).map_err(|_| QError::BadCall("j must be 1 or 2".into()))?;
                Ok(lambert::s_series(SSpec { m: v[0], a: v[1], k: v[2], l: v[3], j }, prec)?)
            }),
            "Ssum" => ints(args, 4, name).and_then(|v| {
                let j = u32::try_from(v[3]).map_err(|_| QError::BadCall("j must be 1 or 2".into()))?;
                Ok(lambert::s_total(v[0], v[1], v[2], j, prec)?)
            }),
            "psum" => ints(args, 3, name).and_then(|v| {
                let j = u32::try_from(v[2]).map_err(|_| QError::BadCall("j must be 1 or 2".into()))?;
                Ok(lambert::primed_sum(v[0], v[1], j, prec)?)
            }),
            _ => return None,
        };
        Some(r)
    }
}
