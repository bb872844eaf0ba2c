//! Lambert-type series at specializations `a = q^j`.
//!
//! Every bilateral sum is truncated by bounding its quadratic exponent, so
//! the number of terms depends only on the requested precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::series::LaurentSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambertError {
    #[error("exponent {0} is divisible by the modulus {1}")]
    ZeroDenominator(i64, i64),
    #[error("quadratic exponent is not an integer for t = {0}")]
    NonIntegralExponent(i64),
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
}

/// Dense integer accumulator over `[lo, prec)`.
struct Acc {
    lo: i64,
    c: Vec<BigInt>,
}

impl Acc {
    fn new(lo: i64, prec: i64) -> Self {
        let lo = lo.min(prec - 1);
        Acc {
            lo,
            c: vec![BigInt::zero(); (prec - lo) as usize],
        }
    }

    fn prec(&self) -> i64 {
        self.lo + self.c.len() as i64
    }

    /// Adds `sign * q^start * (1 - q^step)^(-power)`.
    fn add_geometric(&mut self, sign: i64, start: i64, step: i64, power: u32) {
        debug_assert!(step > 0);
        let prec = self.prec();
        let mut e = start;
        let mut r: i64 = 0;
        while e < prec {
            let coef = match power {
                0 => {
                    if r > 0 {
                        break;
                    }
                    1
                }
                1 => 1,
                2 => r + 1,
                _ => unreachable!("powers 0, 1, 2 only"),
            };
            self.c[(e - self.lo) as usize] += sign * coef;
            e += step;
            r += 1;
        }
    }

    fn finish(self) -> LaurentSeries {
        LaurentSeries::from_integers(self.lo, self.c)
    }
}

/// `q^m/(1-q^m)` as `(sign, start, step)` with positive step.
fn geometric_part(m: i64) -> [(i64, i64, i64); 2] {
    if m > 0 {
        [(1, m, m), (0, 0, 1)]
    } else {
        // q^-M/(1-q^-M) = -1 - q^M/(1-q^M)
        [(-1, 0, 1), (-1, -m, -m)]
    }
}

/// `Σ_{n≥0} [q^(e+Kn)/(1-q^(e+Kn)) - q^(K(n+1)-e)/(1-q^(K(n+1)-e))]` for any
/// integer `e` not divisible by `K`; this is `X(q^e; q^K)`.
pub fn x_sum(e: i64, k: i64, prec: i64) -> Result<LaurentSeries, LambertError> {
    if k < 1 || e.rem_euclid(k) == 0 {
        return Err(LambertError::ZeroDenominator(e, k));
    }
    let mut acc = Acc::new(0, prec.max(1));
    let push = |acc: &mut Acc, sign: i64, m: i64| {
        for (s, start, step) in geometric_part(m) {
            if s == 0 {
                continue;
            }
            if start == 0 {
                acc.add_geometric(sign * s, 0, 1, 0);
            } else {
                acc.add_geometric(sign * s, start, step, 1);
            }
        }
    };
    let mut n = 0;
    loop {
        let m1 = e + k * n;
        let m2 = k * (n + 1) - e;
        if m1 >= prec && m2 >= prec {
            break;
        }
        if m1.abs() < prec || m1 < 0 {
            push(&mut acc, 1, m1);
        }
        if m2.abs() < prec || m2 < 0 {
            push(&mut acc, -1, m2);
        }
        n += 1;
    }
    Ok(acc.finish().truncate(prec))
}

/// `X(q^j; q^K)` for `0 < j < K`.
pub fn x_series(j: u64, k: u64, prec: i64) -> Result<LaurentSeries, LambertError> {
    if !(0 < j && j < k) {
        return Err(LambertError::InvalidSpec(format!("X({j},{k}) needs 0 < j < K")));
    }
    x_sum(j as i64, k as i64, prec)
}

/// `H(q^e; q^K) = Σ_{n∈Z} q^(e+Kn)/(1-q^(e+Kn))^2`, using that the summand
/// is invariant under `m -> -m`.
pub fn h_sum(e: i64, k: i64, prec: i64) -> Result<LaurentSeries, LambertError> {
    if k < 1 || e.rem_euclid(k) == 0 {
        return Err(LambertError::ZeroDenominator(e, k));
    }
    let r = e.rem_euclid(k);
    let mut acc = Acc::new(0, prec.max(1));
    // |e + Kn| runs over r, r+K, ... and K-r, 2K-r, ...
    for first in [r, k - r] {
        let mut m = first;
        while m < prec {
            acc.add_geometric(1, m, m, 2);
            m += k;
        }
    }
    Ok(acc.finish().truncate(prec))
}

pub fn h_series(j: u64, k: u64, prec: i64) -> Result<LaurentSeries, LambertError> {
    if !(0 < j && j < k) {
        return Err(LambertError::InvalidSpec(format!("H({j},{k}) needs 0 < j < K")));
    }
    h_sum(j as i64, k as i64, prec)
}

/// `Σ_{n≥1} q^(kn)/(1-q^(kn))^2`.
pub fn sigma_series(k: u64, prec: i64) -> LaurentSeries {
    assert!(k >= 1);
    let k = k as i64;
    let mut acc = Acc::new(0, prec.max(1));
    let mut m = k;
    while m < prec {
        acc.add_geometric(1, m, m, 2);
        m += k;
    }
    acc.finish().truncate(prec)
}

/// Parameters of `S_m(a,k,l,j)`: the sum over `t ≡ m (mod k)` of
/// `(-1)^t q^(t(lt+1)/2 + a t) / (1 - q^(k t))^j`, omitting `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SSpec {
    pub m: i64,
    pub a: i64,
    pub k: i64,
    pub l: i64,
    pub j: u32,
}

/// Smallest `T >= 0` with `l t^2/2 - (|a| + 1) |t| >= prec` for all `|t| >= T`.
fn quadratic_cutoff(l: i64, a: i64, prec: i64) -> i64 {
    let b = (a.abs() + 1) as f64;
    let l = l as f64;
    let p = prec.max(0) as f64;
    // T = (b + sqrt(b^2 + 2 l p)) / (l/2) / 2, rounded up with slack
    ((b + (b * b + 2.0 * l * p).sqrt()) / l).ceil() as i64 + 2
}

pub fn s_series(spec: SSpec, prec: i64) -> Result<LaurentSeries, LambertError> {
    let SSpec { m, a, k, l, j } = spec;
    if k < 1 || l < 1 || !(1..=2).contains(&j) || !(0..k).contains(&m) {
        return Err(LambertError::InvalidSpec(format!("{spec:?}")));
    }
    let cut = quadratic_cutoff(l, a, prec);
    let mut terms: Vec<(i64, i64, i64)> = Vec::new();
    let n_lo = Integer::div_floor(&(-cut - m), &k);
    let n_hi = Integer::div_ceil(&(cut - m), &k);
    for n in n_lo..=n_hi {
        let t = k * n + m;
        if t == 0 {
            continue;
        }
        let twice = t * (l * t + 1);
        if twice % 2 != 0 {
            return Err(LambertError::NonIntegralExponent(t));
        }
        let e = twice / 2 + a * t;
        let d = k * t;
        let sign = if t.rem_euclid(2) == 0 { 1 } else { -1 };
        let (sign, start, step) = if d > 0 {
            (sign, e, d)
        } else {
            // (1 - q^-M)^-j = (-1)^j q^(jM) (1 - q^M)^-j
            let jm = j as i64 * -d;
            (if j % 2 == 1 { -sign } else { sign }, e + jm, -d)
        };
        if start < prec {
            terms.push((sign, start, step));
        }
    }
    let lo = terms.iter().map(|t| t.1).min().unwrap_or(0).min(0);
    let mut acc = Acc::new(lo, prec);
    for (sign, start, step) in terms {
        acc.add_geometric(sign, start, step, j);
    }
    Ok(acc.finish())
}

/// `Σ_{m=0}^{k-1} S_m(a,k,l,j)`.
pub fn s_total(a: i64, k: i64, l: i64, j: u32, prec: i64) -> Result<LaurentSeries, LambertError> {
    let mut acc: Option<LaurentSeries> = None;
    for m in 0..k {
        let s = s_series(SSpec { m, a, k, l, j }, prec)?;
        acc = Some(match acc {
            None => s,
            Some(x) => x.add(&s),
        });
    }
    Ok(acc.unwrap_or_else(|| LaurentSeries::zero(prec)))
}

/// `Σ'_n (-1)^n q^(n(n+1)/2 + a n) / (1 - q^(k n))^j`, summed term by term.
pub fn primed_sum(a: i64, k: i64, j: u32, prec: i64) -> Result<LaurentSeries, LambertError> {
    if k < 1 || !(1..=2).contains(&j) {
        return Err(LambertError::InvalidSpec(format!("a={a}, k={k}, j={j}")));
    }
    let cut = quadratic_cutoff(1, a, prec) + 1;
    let mut pieces = Vec::new();
    for n in -cut..=cut {
        if n == 0 {
            continue;
        }
        let mut e = n * (n + 1) / 2 + a * n;
        let mut s = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        let step = k * n.abs();
        if n < 0 {
            e += j as i64 * step;
            if j % 2 == 1 {
                s = -s;
            }
        }
        if e < prec {
            pieces.push((s, e, step));
        }
    }
    let lo = pieces.iter().map(|p| p.1).min().unwrap_or(0).min(0);
    let mut acc = Acc::new(lo, prec);
    for (s, e, step) in pieces {
        acc.add_geometric(s, e, step, j);
    }
    Ok(acc.finish())
}

/// `Σ'_n (-1)^n q^(n(n+1)/2 + (b-1)n) (1 - q^n) / (1 - q^(11n))^j`, summed
/// term by term.
pub fn primed_weighted_sum(b: i64, j: u32, prec: i64) -> Result<LaurentSeries, LambertError> {
    if !(1..=10).contains(&b) || !(1..=2).contains(&j) {
        return Err(LambertError::InvalidSpec(format!("b={b}, j={j}")));
    }
    let cut = quadratic_cutoff(1, b, prec) + 1;
    let mut pieces: Vec<(i64, i64, i64)> = Vec::new();
    for n in -cut..=cut {
        if n == 0 {
            continue;
        }
        let e = n * (n + 1) / 2 + (b - 1) * n;
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut shift = 0;
        let mut s = sign;
        let step = 11 * n.abs();
        if n < 0 {
            shift = j as i64 * step;
            if j % 2 == 1 {
                s = -s;
            }
        }
        // numerator q^e - q^(e+n)
        for (ss, ee) in [(s, e + shift), (-s, e + n + shift)] {
            if ee < prec {
                pieces.push((ss, ee, step));
            }
        }
    }
    let lo = pieces.iter().map(|p| p.1).min().unwrap_or(0).min(0);
    let mut acc = Acc::new(lo, prec);
    for (s, e, step) in pieces {
        acc.add_geometric(s, e, step, j);
    }
    Ok(acc.finish())
}

/// Bilateral sum `sign Σ_k (-1)^k q^(K k(k+1)/2 + lin k + shift) / (1 - q^(den + K k))^power`.
/// With `primed`, the index where `den + K k = 0` is skipped; otherwise such
/// an index is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BilateralSum {
    pub base: i64,
    pub lin: i64,
    pub shift: i64,
    pub den: i64,
    pub power: u32,
    pub primed: bool,
    pub negate: bool,
}

impl BilateralSum {
    pub fn series(&self, prec: i64) -> Result<LaurentSeries, LambertError> {
        let kb = self.base;
        if kb < 1 || !(1..=2).contains(&self.power) {
            return Err(LambertError::InvalidSpec(format!("{self:?}")));
        }
        // exponent in k: (K/2) k^2 + (K/2 + lin) k + shift, plus power*|d| when d < 0
        let lin_total = kb / 2 + self.lin.abs() + self.den.abs() + 1;
        let cut = quadratic_cutoff(kb, lin_total, prec + self.shift.abs()) + 1;
        let mut terms = Vec::new();
        for k in -cut..=cut {
            let d = self.den + kb * k;
            if d == 0 {
                if self.primed {
                    continue;
                }
                return Err(LambertError::ZeroDenominator(self.den, kb));
            }
            let e = kb * k * (k + 1) / 2 + self.lin * k + self.shift;
            let mut sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            if self.negate {
                sign = -sign;
            }
            let (sign, start, step) = if d > 0 {
                (sign, e, d)
            } else {
                let jm = self.power as i64 * -d;
                (if self.power % 2 == 1 { -sign } else { sign }, e + jm, -d)
            };
            if start < prec {
                terms.push((sign, start, step));
            }
        }
        let lo = terms.iter().map(|t| t.1).min().unwrap_or(0).min(0);
        let mut acc = Acc::new(lo, prec);
        for (s, e, st) in terms {
            acc.add_geometric(s, e, st, self.power);
        }
        Ok(acc.finish())
    }
}

/// `𝒮_1(a_2, b_1) = X(a_2) - X(b_1)` with `a_2 = q^ea`, `b_1 = q^eb`, base `q^k`.
pub fn script_s1(ea: i64, eb: i64, k: i64, prec: i64) -> Result<LaurentSeries, LambertError> {
    Ok(x_sum(ea, k, prec)?.sub(&x_sum(eb, k, prec)?))
}

/// `𝒮_2(a_2, b_1) = -X(a_2) + X(b_1) - H(a_2) + H(b_1)`.
pub fn script_s2(ea: i64, eb: i64, k: i64, prec: i64) -> Result<LaurentSeries, LambertError> {
    let x = x_sum(eb, k, prec)?.sub(&x_sum(ea, k, prec)?);
    let h = h_sum(eb, k, prec)?.sub(&h_sum(ea, k, prec)?);
    Ok(x.add(&h))
}

/// Coefficients of `Σ_{n≥1} σ(n) q^n`, used by tests as a plain oracle.
pub fn divisor_sigma_series(prec: i64) -> LaurentSeries {
    let mut c = vec![BigInt::zero(); prec.max(1) as usize];
    for d in 1..prec {
        let mut m = d;
        while m < prec {
            c[m as usize] += d;
            m += d;
        }
    }
    LaurentSeries::from_integers(0, c)
}
