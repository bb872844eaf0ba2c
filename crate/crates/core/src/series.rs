//! Truncated Laurent series in one variable `q` with exact rational coefficients.
//!
//! A [`LaurentSeries`] stores the coefficients of `q^lo, …, q^(prec-1)` as
//! integer numerators over one shared positive denominator. Coefficients at
//! exponents `>= prec` are unknown; every operation propagates that bound so
//! no result ever reports a coefficient that an operand could not determine.
//!
//! Multiplication and division skip zero coefficients of the sparser operand,
//! which makes products and quotients by theta-type series (pentagonal and
//! triple-product sums) cost `O(N * nnz)` instead of `O(N^2)`.

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has no nonzero coefficient below q^{prec}")]
    ZeroLeadingCoefficient { prec: i64 },
    #[error("coefficient of q^{n} lies outside the known range [{lo}, {prec})")]
    OutOfPrecision { n: i64, lo: i64, prec: i64 },
}

/// `Σ_{n=lo}^{prec-1} (num[n-lo] / den) q^n + O(q^prec)`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    lo: i64,
    prec: i64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl LaurentSeries {
    /// The zero series known up to (excluding) `q^prec`.
    pub fn zero(prec: i64) -> Self {
        let lo = min(0, prec - 1);
        LaurentSeries {
            lo,
            prec,
            num: vec![BigInt::zero(); (prec - lo) as usize],
            den: BigInt::one(),
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(BigRational::one(), 0, prec)
    }

    /// `c q^e + O(q^prec)`.
    pub fn monomial(c: BigRational, e: i64, prec: i64) -> Self {
        if e >= prec {
            return Self::zero(prec);
        }
        let mut num = vec![BigInt::zero(); (prec - e) as usize];
        num[0] = c.numer().clone();
        LaurentSeries {
            lo: e,
            prec,
            num,
            den: c.denom().clone(),
        }
        .normalized()
    }

    /// Integer coefficients for `q^lo, q^(lo+1), …`; precision is `lo + len`.
    pub fn from_integers(lo: i64, coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(lo);
        }
        LaurentSeries {
            lo,
            prec: lo + coeffs.len() as i64,
            num: coeffs,
            den: BigInt::one(),
        }
    }

    pub fn from_i64s(lo: i64, coeffs: &[i64]) -> Self {
        Self::from_integers(lo, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Rational coefficients for `q^lo, q^(lo+1), …`; precision is `lo + len`.
    pub fn from_rationals(lo: i64, coeffs: &[BigRational]) -> Self {
        if coeffs.is_empty() {
            return Self::zero(lo);
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        LaurentSeries {
            lo,
            prec: lo + coeffs.len() as i64,
            num,
            den,
        }
        .normalized()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Numerators of `q^lo, …, q^(prec-1)` over [`Self::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// Exact coefficient of `q^n`.
    pub fn coeff(&self, n: i64) -> Result<BigRational, SeriesError> {
        if n >= self.prec || n < self.lo {
            // Exponents below `lo` are known zeros only when the caller
            // treats `lo` as a valuation; we stay strict.
            return Err(SeriesError::OutOfPrecision {
                n,
                lo: self.lo,
                prec: self.prec,
            });
        }
        Ok(self.coeff_unchecked(n))
    }

    /// Coefficient of `q^n`, treating exponents below `lo` as zero.
    /// Panics if `n >= prec`.
    pub fn coeff_or_zero(&self, n: i64) -> BigRational {
        assert!(n < self.prec, "q^{n} is beyond the precision {}", self.prec);
        if n < self.lo {
            return BigRational::zero();
        }
        self.coeff_unchecked(n)
    }

    fn coeff_unchecked(&self, n: i64) -> BigRational {
        BigRational::new(self.num[(n - self.lo) as usize].clone(), self.den.clone())
    }

    /// All known coefficients, from `q^lo` upward.
    pub fn coefficients(&self) -> Vec<BigRational> {
        (self.lo..self.prec).map(|n| self.coeff_unchecked(n)).collect()
    }

    /// Lowest exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.num
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lo + i as i64)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    fn normalized(mut self) -> Self {
        if self.den.is_one() {
            return self;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
        self
    }

    /// Drops everything at or above `q^prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.lo {
            return Self::zero(prec);
        }
        LaurentSeries {
            lo: self.lo,
            prec,
            num: self.num[..(prec - self.lo) as usize].to_vec(),
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            lo: self.lo + k,
            prec: self.prec + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        let mut den = &self.den * c.denom();
        let mut num: Vec<BigInt> = self.num.iter().map(|x| x * c.numer()).collect();
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -&*x;
            }
        }
        LaurentSeries {
            lo: self.lo,
            prec: self.prec,
            num,
            den,
        }
        .normalized()
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let prec = min(self.prec, other.prec);
        let lo = min(min(self.lo, other.lo), prec - 1);
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let mut num = vec![BigInt::zero(); (prec - lo) as usize];
        for (i, c) in self.num.iter().enumerate() {
            let e = self.lo + i as i64;
            if e >= prec {
                break;
            }
            if !c.is_zero() {
                num[(e - lo) as usize] += c * &fa;
            }
        }
        for (i, c) in other.num.iter().enumerate() {
            let e = other.lo + i as i64;
            if e >= prec {
                break;
            }
            if !c.is_zero() {
                let t = c * &fb;
                if negate_other {
                    num[(e - lo) as usize] -= t;
                } else {
                    num[(e - lo) as usize] += t;
                }
            }
        }
        LaurentSeries { lo, prec, num, den }.normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    /// Truncated Cauchy product. Leading zeros of both factors are skipped, so
    /// the result starts at the sum of the valuations and is known up to
    /// `min(a.prec + v(b), b.prec + v(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let (va, vb) = match (self.valuation(), other.valuation()) {
            (Some(va), Some(vb)) => (va, vb),
            (None, vb) => {
                let vb = vb.unwrap_or(other.prec);
                return Self::zero(self.prec + vb);
            }
            (Some(va), None) => return Self::zero(other.prec + va),
        };
        let lo = va + vb;
        let prec = min(self.prec + vb, other.prec + va);
        let len = (prec - lo) as usize;
        let a = &self.num[(va - self.lo) as usize..];
        let b = &other.num[(vb - other.lo) as usize..];
        let out = convolve(a, b, len);
        LaurentSeries {
            lo,
            prec,
            num: out,
            den: &self.den * &other.den,
        }
        .normalized()
    }

    /// Multiplicative inverse; the result starts at `-v(a)`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        Self::one(self.prec.max(1)).div_impl(self, Some(0))
    }

    /// `self / divisor` by long division. Costs `O(len * nnz(divisor))`.
    pub fn div(&self, divisor: &Self) -> Result<Self, SeriesError> {
        self.div_impl(divisor, None)
    }

    fn div_impl(&self, divisor: &Self, unit_numerator: Option<i64>) -> Result<Self, SeriesError> {
        let v = divisor
            .valuation()
            .ok_or(SeriesError::ZeroLeadingCoefficient {
                prec: divisor.prec,
            })?;
        let rel_prec = divisor.prec - v;
        // Precision of the numerator. For an inversion the numerator is the
        // exact constant 1, so only the divisor limits the result.
        let (va, a_prec) = match unit_numerator {
            Some(_) => (0, i64::MAX),
            None => match self.valuation() {
                Some(va) => (va, self.prec),
                None => return Ok(Self::zero(self.prec - v)),
            },
        };
        let prec_rel = min(a_prec, va.saturating_add(rel_prec));
        let len = (prec_rel - va) as usize;
        let u = &divisor.num[(v - divisor.lo) as usize..];
        let a_num: Vec<BigInt> = match unit_numerator {
            Some(_) => {
                let mut x = vec![BigInt::zero(); len];
                x[0] = BigInt::one();
                x
            }
            None => {
                let start = (va - self.lo) as usize;
                self.num[start..start + len].to_vec()
            }
        };
        let a_den = if unit_numerator.is_some() {
            BigInt::one()
        } else {
            self.den.clone()
        };
        let support: Vec<(usize, &BigInt)> = u
            .iter()
            .enumerate()
            .skip(1)
            .take(len.saturating_sub(1))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let u0 = &u[0];
        // (A / a_den) / (U / d_den) = (A / U) * d_den / a_den
        let (quot, extra_den) = if u0.abs().is_one() {
            let neg = u0.is_negative();
            let mut b: Vec<BigInt> = Vec::with_capacity(len);
            for n in 0..len {
                let mut acc = a_num[n].clone();
                for &(k, uk) in &support {
                    if k > n {
                        break;
                    }
                    acc -= uk * &b[n - k];
                }
                if neg {
                    acc = -acc;
                }
                b.push(acc);
            }
            (b, BigInt::one())
        } else {
            // C_n = U0^n * A_n - Σ_k U_k U0^(k-1) C_{n-k};  quotient_n = C_n / U0^(n+1)
            let mut pow = vec![BigInt::one()];
            for i in 1..=len {
                let next = &pow[i - 1] * u0;
                pow.push(next);
            }
            let mut c: Vec<BigInt> = Vec::with_capacity(len);
            for n in 0..len {
                let mut acc = &a_num[n] * &pow[n];
                for &(k, uk) in &support {
                    if k > n {
                        break;
                    }
                    acc -= uk * &pow[k - 1] * &c[n - k];
                }
                c.push(acc);
            }
            // common denominator U0^len
            let mut out: Vec<BigInt> = c
                .into_iter()
                .enumerate()
                .map(|(n, x)| x * &pow[len - 1 - n])
                .collect();
            let mut d = pow[len].clone();
            if d.is_negative() {
                d = -d;
                for x in out.iter_mut() {
                    *x = -&*x;
                }
            }
            (out, d)
        };
        let num: Vec<BigInt> = quot.into_iter().map(|x| x * &divisor.den).collect();
        let den = a_den * extra_den;
        Ok(LaurentSeries {
            lo: va - v,
            prec: prec_rel - v,
            num,
            den,
        }
        .normalized())
    }

    /// Integer power; negative exponents go through [`Self::invert`].
    pub fn pow(&self, n: i64) -> Result<Self, SeriesError> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let prec = base.prec.max(1);
        let mut result = Self::one(prec);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result)
    }

    /// Substitutes `q -> q^k`.
    pub fn scale_exponents(&self, k: i64) -> Self {
        assert!(k >= 1, "scale factor must be positive");
        if k == 1 {
            return self.clone();
        }
        let len = ((self.prec - self.lo) * k) as usize;
        let mut num = vec![BigInt::zero(); len];
        for (i, c) in self.num.iter().enumerate() {
            num[i * k as usize] = c.clone();
        }
        LaurentSeries {
            lo: self.lo * k,
            prec: self.prec * k,
            num,
            den: self.den.clone(),
        }
    }

    /// `Σ_n c_{m n + r} q^n`: the residue class `r` modulo `m`, compressed.
    pub fn dissect(&self, m: i64, r: i64) -> Self {
        assert!(m >= 1 && (0..m).contains(&r), "need m >= 1 and 0 <= r < m");
        let n_lo = Integer::div_ceil(&(self.lo - r), &m);
        let n_hi = Integer::div_floor(&(self.prec - 1 - r), &m);
        let prec = n_hi + 1;
        if n_lo > n_hi {
            return Self::zero(prec);
        }
        let num = (n_lo..=n_hi)
            .map(|n| self.num[(m * n + r - self.lo) as usize].clone())
            .collect();
        LaurentSeries {
            lo: n_lo,
            prec,
            num,
            den: self.den.clone(),
        }
        .normalized()
    }

    /// First exponent below `min(self.prec, other.prec)` where the two
    /// series differ, with both coefficients.
    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, BigRational, BigRational)> {
        let prec = min(self.prec, other.prec);
        let lo = min(self.lo, other.lo);
        let zero = BigInt::zero();
        for n in lo..prec {
            let a = if n >= self.lo {
                &self.num[(n - self.lo) as usize]
            } else {
                &zero
            };
            let b = if n >= other.lo {
                &other.num[(n - other.lo) as usize]
            } else {
                &zero
            };
            if a * &other.den != b * &self.den {
                return Some((
                    n,
                    BigRational::new(a.clone(), self.den.clone()),
                    BigRational::new(b.clone(), other.den.clone()),
                ));
            }
        }
        None
    }

    /// Coefficients of `q^lo..q^(prec-1)` as small integers, if they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        if !self.den.is_one() {
            return None;
        }
        self.num.iter().map(|c| c.to_i64()).collect()
    }
}

/// `out[k] = Σ a[i] b[k-i]` for `k < len`, iterating over the sparser input.
fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let nz = |s: &[BigInt]| -> Vec<(usize, BigInt)> {
        s.iter()
            .take(len)
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    };
    let na = nz(a);
    let nb = nz(b);
    let (outer, inner) = if na.len() <= nb.len() { (na, b) } else { (nb, a) };
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in &outer {
        let room = len - i;
        for (j, y) in inner.iter().take(room).enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.first_mismatch(other).is_none()
    }
}

impl Eq for LaurentSeries {}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in self.lo..self.prec {
            let c = self.coeff_unchecked(n);
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match (n, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            lo: self.lo,
            prec: self.prec,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

/// Sum of many series with one pass of denominator alignment.
pub fn sum<'a, I>(terms: I, prec: i64) -> LaurentSeries
where
    I: IntoIterator<Item = &'a LaurentSeries>,
{
    let mut acc = LaurentSeries::zero(prec);
    for t in terms {
        acc = acc.add(t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        rat(n, 1)
    }

    fn geometric(prec: i64) -> LaurentSeries {
        LaurentSeries::from_i64s(0, &vec![1; prec as usize])
    }

    /// p(n) by Euler's pentagonal recurrence, independent of the series code.
    fn partitions_by_recurrence(n_max: usize) -> Vec<BigInt> {
        let mut p = vec![BigInt::zero(); n_max + 1];
        p[0] = BigInt::one();
        for n in 1..=n_max {
            let mut k: i64 = 1;
            let mut acc = BigInt::zero();
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > n {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                acc += &p[n - g1] * sign;
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= n {
                    acc += &p[n - g2] * sign;
                }
                k += 1;
            }
            p[n] = acc;
        }
        p
    }

    fn euler_naive(prec: i64) -> LaurentSeries {
        let mut s = LaurentSeries::one(prec);
        for k in 1..prec {
            let mut f = vec![0i64; prec as usize];
            f[0] = 1;
            f[k as usize] = -1;
            s = s.mul(&LaurentSeries::from_i64s(0, &f));
        }
        s
    }

    #[test]
    fn add_coefficientwise() {
        let a = LaurentSeries::from_i64s(0, &[1, 1, 0]);
        let b = LaurentSeries::from_i64s(0, &[-1, 0, 1]);
        let s = a.add(&b);
        assert_eq!(s.coefficients(), vec![int(0), int(1), int(1)]);
        assert_eq!(s.valuation(), Some(1));
    }

    #[test]
    fn add_zero_takes_min_precision() {
        let a = LaurentSeries::from_i64s(0, &[3, 4, 5, 6]);
        let z = LaurentSeries::zero(2);
        let s = a.add(&z);
        assert_eq!(s.prec(), 2);
        assert_eq!(s.coefficients(), vec![int(3), int(4)]);
    }

    #[test]
    fn laurent_support() {
        let a = LaurentSeries::monomial(int(1), -1, 5);
        let b = LaurentSeries::monomial(int(1), 1, 5);
        let s = a.add(&b);
        assert_eq!(s.lo(), -1);
        assert_eq!(s.coeff(-1).unwrap(), int(1));
        assert_eq!(s.coeff(0).unwrap(), int(0));
        assert_eq!(s.coeff(1).unwrap(), int(1));
    }

    #[test]
    fn mul_geometric_is_one() {
        let a = LaurentSeries::from_i64s(0, &{
            let mut v = vec![0; 20];
            v[0] = 1;
            v[1] = -1;
            v
        });
        let p = a.mul(&geometric(20));
        assert_eq!(p, LaurentSeries::one(20));
    }

    #[test]
    fn mul_monomials() {
        let a = LaurentSeries::monomial(int(1), -1, 10);
        let b = LaurentSeries::monomial(int(1), 3, 10);
        let p = a.mul(&b);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.coeff(2).unwrap(), int(1));
        // precision: min(10 + 3, 10 - 1)
        assert_eq!(p.prec(), 9);
    }

    #[test]
    fn euler_times_partitions_is_one() {
        let prec = 200;
        let p = partitions_by_recurrence(prec as usize - 1);
        let pgf = LaurentSeries::from_integers(0, p);
        let e = euler_naive(prec);
        assert_eq!(e.mul(&pgf), LaurentSeries::one(prec));
    }

    #[test]
    fn invert_geometric() {
        let mut f = vec![0; 30];
        f[0] = 1;
        f[1] = -1;
        let inv = LaurentSeries::from_i64s(0, &f).invert().unwrap();
        assert_eq!(inv, geometric(30));
    }

    #[test]
    fn invert_euler_gives_partition_numbers() {
        let inv = euler_naive(40).invert().unwrap();
        // enumerated: 4, 3+1, 2+2, 2+1+1, 1+1+1+1
        assert_eq!(inv.coeff(4).unwrap(), int(5));
        assert_eq!(inv.coeff(9).unwrap(), int(30));
        assert_eq!(inv.coeff(9).unwrap().to_integer() % 5, BigInt::zero());
        assert_eq!(inv.coeff(0).unwrap(), int(1));
        assert_eq!(inv.coeff(6).unwrap(), int(11));
    }

    #[test]
    fn invert_zero_fails() {
        let z = LaurentSeries::zero(10);
        assert_eq!(
            z.invert().unwrap_err(),
            SeriesError::ZeroLeadingCoefficient { prec: 10 }
        );
    }

    #[test]
    fn invert_with_leading_zeros_and_rational_lead() {
        // (3q^2 + q^3)^-1 = q^-2 / (3 (1 + q/3))
        let a = LaurentSeries::from_i64s(0, &[0, 0, 3, 1, 0, 0, 0, 0]);
        let inv = a.invert().unwrap();
        assert_eq!(inv.lo(), -2);
        assert_eq!(inv.coeff(-2).unwrap(), rat(1, 3));
        assert_eq!(inv.coeff(-1).unwrap(), rat(-1, 9));
        assert_eq!(inv.coeff(0).unwrap(), rat(1, 27));
        assert_eq!(a.mul(&inv), LaurentSeries::one(a.mul(&inv).prec()));
    }

    #[test]
    fn scale_and_dissect() {
        let a = LaurentSeries::from_i64s(0, &[1, 1]);
        let s = a.scale_exponents(11);
        assert_eq!(s.prec(), 22);
        assert_eq!(s.coeff(11).unwrap(), int(1));
        assert_eq!(s.coeff(1).unwrap(), int(0));
        let m = LaurentSeries::monomial(int(1), -1, 3).scale_exponents(11);
        assert_eq!(m.valuation(), Some(-11));

        let g = geometric(100);
        let d = g.dissect(11, 6);
        assert!(d.coefficients().iter().all(|c| c.is_one()));
        // 11 n + 6 <= 99  =>  n <= 8
        assert_eq!(d.prec(), 9);
    }

    #[test]
    fn dissection_reconstructs() {
        let a = LaurentSeries::from_i64s(-3, &(0..60).map(|i| (i * i) % 17 - 8).collect::<Vec<_>>());
        let mut acc = LaurentSeries::zero(a.prec());
        for r in 0..11 {
            let piece = a.dissect(11, r).scale_exponents(11).shift(r);
            acc = acc.add(&piece);
        }
        assert!(acc.first_mismatch(&a).is_none());
    }

    #[test]
    fn coeff_out_of_precision() {
        let a = LaurentSeries::from_i64s(0, &[1, 2, 3]);
        assert!(matches!(
            a.coeff(3),
            Err(SeriesError::OutOfPrecision { n: 3, .. })
        ));
        assert!(a.coeff(-1).is_err());
    }

    #[test]
    fn pow_negative() {
        let mut f = vec![0; 12];
        f[0] = 1;
        f[1] = -1;
        let a = LaurentSeries::from_i64s(0, &f);
        let inv2 = a.pow(-2).unwrap();
        for n in 0..12 {
            assert_eq!(inv2.coeff(n).unwrap(), int(n + 1));
        }
    }

    #[test]
    fn rational_coefficients_reduce() {
        let a = LaurentSeries::from_rationals(0, &[rat(1, 2), rat(1, 2)]);
        let b = a.add(&a);
        assert!(b.is_integral());
        assert_eq!(b.coeff(0).unwrap(), int(1));
    }
}
