//! Evaluation of expressions to truncated series.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::eta::{GeneralizedEtaProduct, Monomial};
use super::expr::QExpr;
use super::parse::parse;
use super::QError;
use crate::lambert;
use crate::series::LaurentSeries;

/// Supplies values for `name(args)` calls the evaluator does not know.
pub trait Resolver: Send + Sync {
    fn call(
        &self,
        name: &str,
        args: &[QExpr],
        prec: i64,
        ev: &Evaluator,
    ) -> Option<Result<LaurentSeries, QError>>;
}

const T_DEF: &str = "J(2,11)^2*J(5,11)/(J(1,11)*J(4,11)^2)";
const SMALL_T_DEF: &str = "q*J(1,11)*J(4,11)/J(5,11)^2";
const V_DEFS: [&str; 11] = [
    "q*J(4,11)*J(11)^5/(J(2,11)^2*J(3,11))",
    "J(5,11)^2*J(11)^5/J(2,11)^4",
    "q*J(11)^5/J(2,11)^2",
    "q*J(4,11)*J(11)^5/(J(2,11)^2*J(5,11))",
    "q*J(1,11)*J(3,11)*J(4,11)*J(11)^5/(J(2,11)^4*J(5,11))",
    "J(3,11)*J(5,11)*J(11)^5/(J(1,11)*J(2,11)^2*J(4,11))",
    "J(3,11)*J(11)^5/(J(1,11)*J(2,11)^2)",
    "J(3,11)*J(4,11)*J(11)^5/(J(1,11)*J(2,11)^2*J(5,11))",
    "q*J(1,11)*J(5,11)*J(11)^5/(J(2,11)^2*J(3,11)*J(4,11))",
    "J(4,11)^2*J(11)^5/(J(2,11)^3*J(5,11))",
    "J(5,11)*J(11)^5/(J(2,11)^2*J(3,11))",
];
const Y_DEFS: [Option<&str>; 11] = [
    Some("J(11)^2/J(1,11)"),
    Some("J(5,11)*J(11)^2/(J(2,11)*J(3,11))"),
    Some("J(3,11)*J(11)^2/(J(1,11)*J(4,11))"),
    Some("J(2,11)*J(11)^2/(J(1,11)*J(3,11))"),
    Some("J(11)^2/J(2,11)"),
    Some("J(4,11)*J(11)^2/(J(2,11)*J(5,11))"),
    None,
    Some("J(11)^2/J(3,11)"),
    Some("q*J(1,11)*J(11)^2/(J(4,11)*J(5,11))"),
    Some("J(11)^2/J(4,11)"),
    Some("J(11)^2/J(5,11)"),
];

/// Definition of an appendix atom as an expression in `J` products.
pub fn appendix_definition(e: &QExpr) -> Result<QExpr, QError> {
    static DEFS: OnceLock<HashMap<String, QExpr>> = OnceLock::new();
    let defs = DEFS.get_or_init(|| {
        let mut m = HashMap::new();
        m.insert("T".to_string(), parse(T_DEF).expect("built-in"));
        m.insert("t".to_string(), parse(SMALL_T_DEF).expect("built-in"));
        for (i, d) in V_DEFS.iter().enumerate() {
            m.insert(format!("V{i}"), parse(d).expect("built-in"));
        }
        for (i, d) in Y_DEFS.iter().enumerate() {
            if let Some(d) = d {
                m.insert(format!("Y{i}"), parse(d).expect("built-in"));
            }
        }
        m
    });
    let key = e.to_string();
    defs.get(&key)
        .cloned()
        .ok_or_else(|| QError::Undefined(format!("{key} has no definition")))
}

/// `Some((c, m))` when `e` is `c` times a product monomial.
pub fn as_monomial(e: &QExpr) -> Result<Option<(BigRational, Monomial)>, QError> {
    use QExpr::*;
    Ok(match e {
        Const(c) => Some((c.clone(), Monomial::one())),
        Q => Some((BigRational::one(), Monomial::q_power(BigRational::one()))),
        Euler(a) => Some((BigRational::one(), Monomial::euler(*a))),
        Jab(a, b) => Some((BigRational::one(), Monomial::jab(*a, *b))),
        Eta(d, g) => Some((BigRational::one(), Monomial::eta(*d, *g))),
        BigT | SmallT | V(_) | Y(_) => as_monomial(&appendix_definition(e)?)?,
        Neg(a) => as_monomial(a)?.map(|(c, m)| (-c, m)),
        Mul(a, b) => match (as_monomial(a)?, as_monomial(b)?) {
            (Some((ca, ma)), Some((cb, mb))) => Some((ca * cb, ma.mul(&mb))),
            _ => None,
        },
        Div(a, b) => match (as_monomial(a)?, as_monomial(b)?) {
            (Some((ca, ma)), Some((cb, mb))) => {
                if cb.is_zero() {
                    return Err(QError::Series(crate::series::SeriesError::ZeroLeadingCoefficient {
                        prec: 0,
                    }));
                }
                Some((ca / cb, ma.div(&mb)))
            }
            _ => None,
        },
        Pow(a, n) => match as_monomial(a)? {
            Some((c, m)) => {
                if c.is_zero() && *n < 0 {
                    return Err(QError::Series(crate::series::SeriesError::ZeroLeadingCoefficient {
                        prec: 0,
                    }));
                }
                Some((pow_rat(&c, *n), m.pow(*n)))
            }
            None => None,
        },
        Scale(a, k) => as_monomial(a)?.map(|(c, m)| (c, m.scale(*k))),
        X(..) | H(..) | Sigma(_) | Call(..) | Add(..) | Sub(..) => None,
    })
}

fn pow_rat(c: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(c.clone(), n as usize)
    } else {
        num_traits::pow(c.recip(), n.unsigned_abs() as usize)
    }
}

/// Expands `e` into `Σ c_i m_i` with distinct monomials and nonzero `c_i`.
pub fn linear_combination(e: &QExpr) -> Result<Vec<(BigRational, Monomial)>, QError> {
    fn go(e: &QExpr) -> Result<BTreeMap<Monomial, BigRational>, QError> {
        use QExpr::*;
        if let Some((c, m)) = as_monomial(e)? {
            let mut out = BTreeMap::new();
            if !c.is_zero() {
                out.insert(m, c);
            }
            return Ok(out);
        }
        let merge = |mut a: BTreeMap<Monomial, BigRational>, b: BTreeMap<Monomial, BigRational>, sign: i64| {
            for (m, c) in b {
                let c = if sign < 0 { -c } else { c };
                let entry = a.entry(m).or_insert_with(BigRational::zero);
                *entry += c;
            }
            a.retain(|_, c| !c.is_zero());
            a
        };
        let product = |a: &BTreeMap<Monomial, BigRational>, b: &BTreeMap<Monomial, BigRational>| {
            let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
            for (ma, ca) in a {
                for (mb, cb) in b {
                    *out.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        Ok(match e {
            Add(a, b) => merge(go(a)?, go(b)?, 1),
            Sub(a, b) => merge(go(a)?, go(b)?, -1),
            Neg(a) => merge(BTreeMap::new(), go(a)?, -1),
            Mul(a, b) => product(&go(a)?, &go(b)?),
            Div(a, b) => match as_monomial(b)? {
                Some((c, m)) if !c.is_zero() => {
                    let inv: BTreeMap<Monomial, BigRational> = [(m.inv(), c.recip())].into();
                    product(&go(a)?, &inv)
                }
                _ => return Err(QError::NotMonomial(format!("division by {b}"))),
            },
            Pow(a, n) if *n >= 0 => {
                let base = go(a)?;
                let mut acc: BTreeMap<Monomial, BigRational> = [(Monomial::one(), BigRational::one())].into();
                for _ in 0..*n {
                    acc = product(&acc, &base);
                }
                acc
            }
            Scale(a, k) => go(a)?
                .into_iter()
                .map(|(m, c)| (m.scale(*k), c))
                .collect(),
            other => return Err(QError::NotMonomial(other.to_string())),
        })
    }
    Ok(go(e)?.into_iter().map(|(m, c)| (c, m)).collect())
}

/// Generalized-eta form of a pure product expression at level `n`.
pub fn to_generalized_eta(e: &QExpr, n: u64) -> Result<GeneralizedEtaProduct, QError> {
    match as_monomial(e)? {
        Some((c, m)) if c.is_one() => m.to_generalized_eta(n),
        _ => Err(QError::NotMonomial(e.to_string())),
    }
}

/// Expression evaluator with a shared cache of product and Lambert expansions.
#[derive(Default)]
pub struct Evaluator {
    resolver: Option<Arc<dyn Resolver>>,
    monomials: Mutex<HashMap<Monomial, LaurentSeries>>,
    atoms: Mutex<HashMap<QExpr, LaurentSeries>>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_resolver(resolver: Arc<dyn Resolver>) -> Self {
        Evaluator {
            resolver: Some(resolver),
            ..Self::default()
        }
    }

    /// Series of `e` known at least up to `q^prec`, truncated there.
    pub fn eval(&self, e: &QExpr, prec: i64) -> Result<LaurentSeries, QError> {
        let mut p = prec;
        for _ in 0..12 {
            let s = self.eval_at(e, p)?;
            if s.prec() >= prec {
                return Ok(s.truncate(prec));
            }
            p += (prec - s.prec()).max(1);
        }
        Err(QError::PrecisionLoss(prec))
    }

    pub fn eval_str(&self, src: &str, prec: i64) -> Result<LaurentSeries, QError> {
        self.eval(&parse(src)?, prec)
    }

    /// Expansion of a monomial, reusing any cached expansion that is long enough.
    pub fn monomial_series(&self, m: &Monomial, prec: i64) -> Result<LaurentSeries, QError> {
        if let Some(s) = self.monomials.lock().expect("cache lock").get(m) {
            if s.prec() >= prec {
                return Ok(s.truncate(prec));
            }
        }
        let s = m.series(prec)?;
        self.monomials
            .lock()
            .expect("cache lock")
            .insert(m.clone(), s.clone());
        Ok(s)
    }

    fn atom(&self, e: &QExpr, prec: i64) -> Result<LaurentSeries, QError> {
        if let Some(s) = self.atoms.lock().expect("cache lock").get(e) {
            if s.prec() >= prec {
                return Ok(s.truncate(prec));
            }
        }
        let s = match e {
            QExpr::X(j, k) => lambert::x_series(*j, *k, prec)?,
            QExpr::H(j, k) => lambert::h_series(*j, *k, prec)?,
            QExpr::Sigma(k) => lambert::sigma_series(*k, prec),
            _ => unreachable!("atom called on {e}"),
        };
        self.atoms
            .lock()
            .expect("cache lock")
            .insert(e.clone(), s.clone());
        Ok(s)
    }

    /// One evaluation pass at working precision `p`; the result may fall
    /// short of `p` when negative valuations are involved.
    pub fn eval_at(&self, e: &QExpr, p: i64) -> Result<LaurentSeries, QError> {
        use QExpr::*;
        if let Some((c, m)) = as_monomial(e)? {
            if c.is_zero() {
                return Ok(LaurentSeries::zero(p));
            }
            return Ok(self.monomial_series(&m, p)?.scalar_mul(&c));
        }
        Ok(match e {
            X(..) | H(..) | Sigma(_) => self.atom(e, p)?,
            Neg(a) => -&self.eval_at(a, p)?,
            Add(a, b) => self.eval_at(a, p)?.add(&self.eval_at(b, p)?),
            Sub(a, b) => self.eval_at(a, p)?.sub(&self.eval_at(b, p)?),
            Mul(a, b) => {
                let (x, y) = (self.eval_at(a, p)?, self.eval_at(b, p)?);
                x.mul(&y)
            }
            Div(a, b) => self.eval_at(a, p)?.div(&self.eval_at(b, p)?)?,
            Pow(a, n) => self.eval_at(a, p)?.pow(*n)?,
            Scale(a, k) => {
                let k = *k as i64;
                let inner = num_integer::Integer::div_ceil(&p, &k);
                self.eval_at(a, inner)?.scale_exponents(k)
            }
            Call(name, args) => self.call(name, args, p)?,
            _ => unreachable!("monomial atoms handled above"),
        })
    }

    fn call(&self, name: &str, args: &[QExpr], p: i64) -> Result<LaurentSeries, QError> {
        if name == "dissect" {
            if args.len() != 3 {
                return Err(QError::BadCall("dissect(expr, M, r) takes three arguments".into()));
            }
            let m = const_int(&args[1])?;
            let r = const_int(&args[2])?;
            if m < 1 || !(0..m).contains(&r) {
                return Err(QError::BadCall(format!("dissect modulus {m}, residue {r}")));
            }
            let inner = self.eval(&args[0], m * (p - 1).max(0) + r + 1)?;
            return Ok(inner.dissect(m, r));
        }
        if let Some(res) = &self.resolver {
            if let Some(out) = res.call(name, args, p, self) {
                return out;
            }
        }
        Err(QError::Undefined(format!("{name}(...)")))
    }
}

/// Integer value of a constant argument.
pub fn const_int(e: &QExpr) -> Result<i64, QError> {
    match e {
        QExpr::Const(c) if c.is_integer() => c
            .to_integer()
            .to_i64()
            .ok_or_else(|| QError::BadCall(format!("{e} is too large"))),
        QExpr::Neg(a) => Ok(-const_int(a)?),
        _ => Err(QError::BadCall(format!("expected an integer, found {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qproducts::products::{euler_product, jab};

    fn ev() -> Evaluator {
        Evaluator::new()
    }

    #[test]
    fn partition_numbers() {
        let s = ev().eval_str("1/J(1)", 10).unwrap();
        assert_eq!(s.to_i64_vec().unwrap(), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn appendix_atoms() {
        let e = ev();
        assert_eq!(e.eval_str("T", 5).unwrap().coeff(0).unwrap(), crate::ri(1));
        assert_eq!(e.eval_str("t", 5).unwrap().valuation(), Some(1));
        assert_eq!(e.eval_str("V6", 5).unwrap().coeff(0).unwrap(), crate::ri(1));
        assert!(matches!(e.eval_str("Y6", 5), Err(QError::Undefined(_))));
    }

    #[test]
    fn scale_matches_scale_exponents() {
        let e = ev();
        let a = e.eval_str("(T + t^2)@11", 300).unwrap();
        let b = e.eval_str("T + t^2", 28).unwrap().scale_exponents(11).truncate(300);
        assert_eq!(a, b);
        assert_eq!(e.eval_str("J(1)@11", 300).unwrap(), euler_product(11, 300));
    }

    #[test]
    fn negative_valuation_reaches_precision() {
        let s = ev().eval_str("q^-3*J(1) + t^-2", 50).unwrap();
        assert_eq!(s.prec(), 50);
        assert_eq!(s.lo(), -3);
    }

    #[test]
    fn non_integral_power_rejected() {
        assert!(matches!(ev().eval_str("eta(5,1) + 1", 10), Err(QError::NonIntegralPower(_))));
        // the same factor with its prefactor cancelled is fine
        let s = ev().eval_str("eta(5,1)/eta(5,1)*J(2,5)", 30).unwrap();
        assert_eq!(s, jab(2, 5, 30));
    }

    #[test]
    fn dissect_call() {
        let s = ev().eval_str("dissect(1/J(1),5,4)", 30).unwrap();
        for c in s.coefficients() {
            assert!((c.to_integer() % 5_i32).is_zero());
        }
    }

    #[test]
    fn linear_combination_merges() {
        let e = parse("(T + 1)^2 - T^2 - 2*T").unwrap();
        let lc = linear_combination(&e).unwrap();
        assert_eq!(lc, vec![(BigRational::one(), Monomial::one())]);
    }
}
