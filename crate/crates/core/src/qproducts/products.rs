//! Theta-type infinite products expanded through their sum sides.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::series::LaurentSeries;

/// `(q^a;q^a)_∞` to precision `prec`, from the pentagonal-number theorem.
pub fn euler_product(a: u64, prec: i64) -> LaurentSeries {
    assert!(a >= 1, "euler_product needs a >= 1");
    let a = a as i64;
    if prec <= 0 {
        return LaurentSeries::zero(prec);
    }
    let mut c = vec![BigInt::zero(); prec as usize];
    c[0] = BigInt::from(1);
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let e1 = a * k * (3 * k - 1) / 2;
        if e1 >= prec {
            break;
        }
        c[e1 as usize] += sign;
        let e2 = a * k * (3 * k + 1) / 2;
        if e2 < prec {
            c[e2 as usize] += sign;
        }
        k += 1;
    }
    LaurentSeries::from_integers(0, c)
}

/// `Σ_n (-1)^n q^(b n(n-1)/2 + a n)`, which by the triple product equals
/// `(q^a;q^b)_∞ (q^(b-a);q^b)_∞ (q^b;q^b)_∞` for every integer `a`.
/// When `a < 0` or `a > b` the product has finitely many factors with
/// negative exponents and the result is a Laurent series.
pub fn theta(a: i64, b: i64, prec: i64) -> LaurentSeries {
    assert!(b >= 1, "theta needs b >= 1");
    let e = |n: i64| b * n * (n - 1) / 2 + a * n;
    // E(n) is convex with its minimum near n = 1/2 - a/b.
    let centre = (b - 2 * a).div_euclid(2 * b);
    let mut terms: Vec<(i64, i64)> = Vec::new();
    for start in [centre, centre + 1] {
        let step = if start == centre { -1 } else { 1 };
        let mut n = start;
        loop {
            let x = e(n);
            if x >= prec && (n - centre).abs() > 1 {
                break;
            }
            if x < prec {
                terms.push((x, if n.rem_euclid(2) == 0 { 1 } else { -1 }));
            }
            n += step;
        }
    }
    let lo = terms.iter().map(|t| t.0).min().unwrap_or(0).min(0);
    let lo = lo.min(prec - 1);
    let mut c = vec![BigInt::zero(); (prec - lo) as usize];
    for (x, s) in terms {
        c[(x - lo) as usize] += s;
    }
    LaurentSeries::from_integers(lo, c)
}

/// `J_{a,b} = (q^a, q^(b-a), q^b; q^b)_∞` for `0 < a < b`.
pub fn jab(a: u64, b: u64, prec: i64) -> LaurentSeries {
    assert!(0 < a && a < b, "jab needs 0 < a < b");
    theta(a as i64, b as i64, prec)
}

/// `[q^j; q^k]_∞ = (q^j;q^k)_∞ (q^(k-j);q^k)_∞`. Any `j` not divisible by
/// `k` is accepted; outside `0 < j < k` the value is a Laurent series.
pub fn bracket(j: i64, k: u64, prec: i64) -> LaurentSeries {
    assert!(k >= 1 && j.rem_euclid(k as i64) != 0, "bracket needs k ∤ j");
    let k_i = k as i64;
    let lo_guess = theta(j, k_i, 1).lo().min(0);
    let num = theta(j, k_i, prec);
    let den = euler_product(k, prec - lo_guess);
    num.div(&den).expect("euler product has constant term 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(factors: &[(i64, i64)], prec: i64) -> LaurentSeries {
        // product of (1 - q^e) for each e = start + step*n, n >= 0, e < prec
        let mut s = LaurentSeries::one(prec);
        for &(start, step) in factors {
            let mut e = start;
            while e < prec {
                let mut f = vec![0i64; (prec) as usize];
                f[0] = 1;
                if e > 0 {
                    f[e as usize] -= 1;
                    s = s.mul(&LaurentSeries::from_i64s(0, &f));
                }
                e += step;
            }
        }
        s
    }

    #[test]
    fn pentagonal_matches_product() {
        assert_eq!(euler_product(1, 100), naive(&[(1, 1)], 100));
        assert_eq!(euler_product(3, 120), naive(&[(3, 3)], 120));
    }

    #[test]
    fn euler_eleven() {
        let e = euler_product(11, 40);
        assert_eq!(e.coeff(11).unwrap(), crate::ri(-1));
        assert_eq!(e.coeff(1).unwrap(), crate::ri(0));
    }

    #[test]
    fn theta_matches_product() {
        for b in 2..=12i64 {
            for a in 1..b {
                let lhs = theta(a, b, 150);
                let rhs = naive(&[(a, b), (b - a, b), (b, b)], 150);
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn j13_is_euler() {
        assert_eq!(jab(1, 3, 200), euler_product(1, 200));
    }

    #[test]
    fn bracket_constant_term() {
        let br = bracket(5, 11, 60);
        assert_eq!(br.coeff(0).unwrap(), crate::ri(1));
        assert_eq!(br.mul(&euler_product(11, 60)), jab(5, 11, 60));
    }

    #[test]
    fn bracket_quasi_periodic() {
        // [q^(j+k); q^k] = -q^(-j) [q^j; q^k]
        let a = bracket(14, 11, 80);
        let b = bracket(3, 11, 80).shift(-3);
        assert_eq!(a.prec(), 80);
        assert!(a.first_mismatch(&(-&b)).is_none());
    }
}
