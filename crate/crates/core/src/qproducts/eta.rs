//! Monomials in theta-type products and their generalized-eta form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::products::{euler_product, theta};
use super::QError;
use crate::series::LaurentSeries;

/// Second periodic Bernoulli polynomial `{t}^2 - {t} + 1/6`.
pub fn p2(t: &BigRational) -> BigRational {
    let f = t - t.floor();
    &f * &f - &f + BigRational::new(1.into(), 6.into())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `q^qpow · Π [q^g; q^δ]_∞^r · Π (q^δ; q^δ)_∞^c`, where
/// `[q^g; q^δ]_∞ = (q^g;q^δ)_∞ (q^(δ-g);q^δ)_∞` is stored under `(δ, min(g, δ-g))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub qpow: BigRational,
    pub pairs: BTreeMap<(u64, u64), i64>,
    pub euler: BTreeMap<u64, i64>,
}

impl Default for Monomial {
    fn default() -> Self {
        Self::one()
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            qpow: BigRational::zero(),
            pairs: BTreeMap::new(),
            euler: BTreeMap::new(),
        }
    }

    pub fn q_power(e: BigRational) -> Self {
        Monomial {
            qpow: e,
            ..Self::one()
        }
    }

    /// `(q^a; q^a)_∞`.
    pub fn euler(a: u64) -> Self {
        let mut m = Self::one();
        m.euler.insert(a, 1);
        m
    }

    /// `[q^g; q^δ]_∞` for `δ ∤ g`.
    pub fn pair(delta: u64, g: u64) -> Self {
        let g = g % delta;
        assert!(g != 0, "pair needs δ ∤ g");
        let mut m = Self::one();
        m.pairs.insert((delta, g.min(delta - g)), 1);
        m
    }

    /// `J_{a,b}`.
    pub fn jab(a: u64, b: u64) -> Self {
        Self::pair(b, a).mul(&Self::euler(b))
    }

    /// `η_{δ,g} = q^((δ/2) P2(g/δ)) [q^g; q^δ]_∞`.
    pub fn eta(delta: u64, g: u64) -> Self {
        let mut m = Self::pair(delta, g);
        m.qpow = rat(delta as i64, 2) * p2(&rat(g as i64, delta as i64));
        m
    }

    pub fn is_one(&self) -> bool {
        self.qpow.is_zero() && self.pairs.is_empty() && self.euler.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.qpow += &other.qpow;
        for (k, e) in &other.pairs {
            *out.pairs.entry(*k).or_insert(0) += e;
        }
        for (k, e) in &other.euler {
            *out.euler.entry(*k).or_insert(0) += e;
        }
        out.pairs.retain(|_, e| *e != 0);
        out.euler.retain(|_, e| *e != 0);
        out
    }

    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return Self::one();
        }
        Monomial {
            qpow: &self.qpow * BigRational::from_integer(n.into()),
            pairs: self.pairs.iter().map(|(k, e)| (*k, e * n)).collect(),
            euler: self.euler.iter().map(|(k, e)| (*k, e * n)).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Substitutes `q -> q^k`.
    pub fn scale(&self, k: u64) -> Self {
        Monomial {
            qpow: &self.qpow * BigRational::from_integer(k.into()),
            pairs: self
                .pairs
                .iter()
                .map(|((d, g), e)| ((d * k, g * k), *e))
                .collect(),
            euler: self.euler.iter().map(|(d, e)| (d * k, *e)).collect(),
        }
    }

    /// Half the net exponent of the Euler-type factors.
    pub fn weight(&self) -> BigRational {
        rat(self.euler.values().sum::<i64>(), 2)
    }

    /// Lowest exponent of the expansion.
    pub fn valuation(&self) -> BigRational {
        self.qpow.clone()
    }

    /// All moduli `δ` occurring in the monomial.
    pub fn moduli(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .pairs
            .keys()
            .map(|k| k.0)
            .chain(self.euler.keys().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Expansion to precision `prec`; the q-power must be an integer.
    pub fn series(&self, prec: i64) -> Result<LaurentSeries, QError> {
        if !self.qpow.is_integer() {
            return Err(QError::NonIntegralPower(self.qpow.to_string()));
        }
        let shift: i64 = self
            .qpow
            .to_integer()
            .try_into()
            .map_err(|_| QError::NonIntegralPower(self.qpow.to_string()))?;
        let g = self
            .pairs
            .keys()
            .fold(0u64, |acc, (d, g)| acc.gcd(d).gcd(g));
        let g = self.euler.keys().fold(g, |acc, d| acc.gcd(d)).max(1);
        let want = prec - shift;
        if want <= 0 {
            return Ok(LaurentSeries::zero(prec));
        }
        let p = Integer::div_ceil(&want, &(g as i64));
        let mut net_euler: BTreeMap<u64, i64> = self.euler.iter().map(|(d, e)| (d / g, *e)).collect();
        let mut ups: Vec<(LaurentSeries, i64)> = Vec::new();
        let mut downs: Vec<(LaurentSeries, i64)> = Vec::new();
        for ((d, gg), e) in &self.pairs {
            *net_euler.entry(d / g).or_insert(0) -= e;
            let th = theta((gg / g) as i64, (d / g) as i64, p);
            if *e > 0 {
                ups.push((th, *e));
            } else {
                downs.push((th, -e));
            }
        }
        for (d, e) in net_euler {
            if e == 0 {
                continue;
            }
            let eu = euler_product(d, p);
            if e > 0 {
                ups.push((eu, e));
            } else {
                downs.push((eu, -e));
            }
        }
        let mut acc = LaurentSeries::one(p);
        for (s, e) in &ups {
            for _ in 0..*e {
                acc = acc.mul(s);
            }
        }
        for (s, e) in &downs {
            for _ in 0..*e {
                acc = acc.div(s).expect("theta factors start with 1");
            }
        }
        Ok(acc.scale_exponents(g as i64).shift(shift).truncate(prec))
    }

    /// Generalized-eta form at level `n`.
    pub fn to_generalized_eta(&self, n: u64) -> Result<GeneralizedEtaProduct, QError> {
        for d in self.moduli() {
            if n % d != 0 {
                return Err(QError::LevelMismatch { modulus: d, level: n });
            }
        }
        let mut pre = self.qpow.clone();
        for ((d, g), r) in &self.pairs {
            pre -= rat(*d as i64, 2) * p2(&rat(*g as i64, *d as i64)) * BigRational::from_integer((*r).into());
        }
        Ok(GeneralizedEtaProduct {
            level: n,
            exponents: self.pairs.clone(),
            classical: self.euler.clone(),
            q_prefactor_exp: pre,
        })
    }
}

/// `q^q_prefactor_exp · Π η_{δ,g}^r · Π (q^δ;q^δ)_∞^c` with every `δ | level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedEtaProduct {
    pub level: u64,
    pub exponents: BTreeMap<(u64, u64), i64>,
    pub classical: BTreeMap<u64, i64>,
    pub q_prefactor_exp: BigRational,
}

impl GeneralizedEtaProduct {
    /// Power of `q` left over once every classical factor is written as
    /// `η(δτ) = q^(δ/24) (q^δ;q^δ)_∞`.
    pub fn residual_q_power(&self) -> BigRational {
        let mut r = self.q_prefactor_exp.clone();
        for (d, c) in &self.classical {
            r -= rat(*d as i64 * c, 24);
        }
        r
    }

    pub fn weight(&self) -> BigRational {
        rat(self.classical.values().sum::<i64>(), 2)
    }

    pub fn to_monomial(&self) -> Monomial {
        let mut m = Monomial::q_power(self.q_prefactor_exp.clone());
        for ((d, g), r) in &self.exponents {
            m = m.mul(&Monomial::eta(*d, *g).pow(*r));
        }
        for (d, c) in &self.classical {
            m = m.mul(&Monomial::euler(*d).pow(*c));
        }
        m
    }

    /// Expansion built factor by factor from `Π_{m ≡ ±g (mod δ)} (1 - q^m)`
    /// with the eta prefactors, independent of the theta-sum path.
    pub fn expand(&self, prec: i64) -> Result<LaurentSeries, QError> {
        let mut total = self.q_prefactor_exp.clone();
        for ((d, g), r) in &self.exponents {
            total += rat(*d as i64, 2) * p2(&rat(*g as i64, *d as i64)) * BigRational::from_integer((*r).into());
        }
        if !total.is_integer() {
            return Err(QError::NonIntegralPower(total.to_string()));
        }
        let shift: i64 = total.to_integer().try_into().expect("small power");
        let p = (prec - shift).max(1);
        let mut c = vec![BigInt::zero(); p as usize];
        c[0] = BigInt::one();
        let apply = |m: u64, times: i64, c: &mut Vec<BigInt>| {
            let m = m as usize;
            if m >= c.len() {
                return;
            }
            for _ in 0..times.abs() {
                if times > 0 {
                    for i in (m..c.len()).rev() {
                        let t = c[i - m].clone();
                        c[i] -= t;
                    }
                } else {
                    for i in m..c.len() {
                        let t = c[i - m].clone();
                        c[i] += t;
                    }
                }
            }
        };
        for ((d, g), r) in &self.exponents {
            let mut m = *g;
            while (m as i64) < p {
                apply(m, *r, &mut c);
                m += d;
            }
            if 2 * g != *d {
                let mut m = d - g;
                while (m as i64) < p {
                    apply(m, *r, &mut c);
                    m += d;
                }
            }
        }
        for (d, e) in &self.classical {
            let mut m = *d;
            while (m as i64) < p {
                apply(m, *e, &mut c);
                m += d;
            }
        }
        Ok(LaurentSeries::from_integers(0, c).shift(shift).truncate(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qproducts::products::jab;

    #[test]
    fn p2_values() {
        assert_eq!(p2(&rat(0, 1)), rat(1, 6));
        assert_eq!(p2(&rat(1, 2)), rat(-1, 12));
        assert_eq!(p2(&rat(3, 2)), rat(-1, 12));
        assert_eq!(p2(&rat(-1, 3)), p2(&rat(2, 3)));
    }

    #[test]
    fn j11_121_prefactor() {
        let g = Monomial::jab(11, 121).to_generalized_eta(121).unwrap();
        assert_eq!(g.exponents.get(&(121, 11)), Some(&1));
        assert_eq!(g.classical.get(&121), Some(&1));
        assert_eq!(g.q_prefactor_exp, -rat(121, 2) * p2(&rat(11, 121)));
    }

    #[test]
    fn monomial_series_matches_products() {
        let m = Monomial::jab(2, 11).pow(2).div(&Monomial::jab(1, 11));
        let direct = jab(2, 11, 100)
            .mul(&jab(2, 11, 100))
            .div(&jab(1, 11, 100))
            .unwrap();
        assert_eq!(m.series(100).unwrap(), direct);
    }

    #[test]
    fn scaled_monomial() {
        let m = Monomial::jab(1, 11).scale(11);
        assert_eq!(m, Monomial::jab(11, 121));
        let s = m.series(300).unwrap();
        assert_eq!(s, Monomial::jab(1, 11).series(28).unwrap().scale_exponents(11).truncate(300));
    }

    #[test]
    fn level_mismatch() {
        assert!(matches!(
            Monomial::jab(1, 7).to_generalized_eta(121),
            Err(QError::LevelMismatch { modulus: 7, level: 121 })
        ));
    }

    #[test]
    fn eta_side_expansion_agrees() {
        let m = Monomial::q_power(rat(1, 1))
            .mul(&Monomial::jab(22, 121))
            .mul(&Monomial::euler(121).pow(3))
            .div(&Monomial::jab(11, 121).pow(2));
        let g = m.to_generalized_eta(121).unwrap();
        assert_eq!(g.exponents.get(&(121, 22)), Some(&1));
        assert_eq!(g.exponents.get(&(121, 11)), Some(&-2));
        assert_eq!(g.expand(300).unwrap(), m.series(300).unwrap());
    }
}
