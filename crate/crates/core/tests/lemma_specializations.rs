//! Two-parameter Lambert/theta lemmas specialized at parameters `q^e` over
//! base `q^K`, with both sides built from direct products and direct sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qdissect::lambert::{h_sum, x_sum};
use qdissect::LaurentSeries;

const MARGIN: i64 = 400;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn mono(c: i64, e: i64, p: i64) -> LaurentSeries {
    LaurentSeries::monomial(r(c), e, p)
}

/// `Π_{n≥0} (1 - q^(s + K n))` for `s > 0`.
fn pochhammer(s: i64, k: i64, p: i64) -> LaurentSeries {
    let mut c = vec![BigInt::zero(); p as usize];
    c[0] = BigInt::one();
    let mut m = s;
    while m < p {
        for i in (m as usize..c.len()).rev() {
            let t = c[i - m as usize].clone();
            c[i] -= t;
        }
        m += k;
    }
    LaurentSeries::from_integers(0, c)
}

fn euler(k: i64, p: i64) -> LaurentSeries {
    pochhammer(k, k, p)
}

/// `[q^e; q^K]_∞` via `[x q^(Km)] = (-1)^m x^(-m) q^(-K m(m-1)/2) [x]`.
fn bracket(e: i64, k: i64, p: i64) -> LaurentSeries {
    let rr = e.rem_euclid(k);
    assert!(rr != 0);
    let m = (e - rr) / k;
    let base = pochhammer(rr, k, p + MARGIN).mul(&pochhammer(k - rr, k, p + MARGIN));
    let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
    base.mul(&mono(sign, -rr * m - k * m * (m - 1) / 2, p + MARGIN))
}

/// `1/(1 - q^d)^j` as a series in `q`, flipping to `q^-d` when `d < 0`.
fn inv_geom(d: i64, j: u32, p: i64) -> LaurentSeries {
    assert!(d != 0);
    let (d2, pre) = if d > 0 {
        (d, mono(1, 0, p + MARGIN))
    } else {
        let s = if j % 2 == 0 { 1 } else { -1 };
        (-d, mono(s, -(j as i64) * d, p + MARGIN))
    };
    let base = LaurentSeries::one(p + MARGIN).sub(&mono(1, d2, p + MARGIN));
    let mut out = pre;
    for _ in 0..j {
        out = out.div(&base).unwrap();
    }
    out
}

/// `Σ_k (-1)^k q^(K k(k+1)/2 + lin k + shift) / (1 - q^(den + K k))^j`,
/// skipping `den + K k = 0` when `primed`.
fn bil(k: i64, lin: i64, shift: i64, den: i64, j: u32, primed: bool, p: i64) -> LaurentSeries {
    let start = |n: i64| {
        let d = den + k * n;
        k * n * (n + 1) / 2 + lin * n + shift + if d < 0 { -(j as i64) * d } else { 0 }
    };
    let mut acc = LaurentSeries::zero(p + MARGIN);
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        loop {
            let s = start(n);
            if s >= p + MARGIN && start(n + dir) > s {
                break;
            }
            let d = den + k * n;
            if d == 0 {
                assert!(primed, "zero denominator at k = {n}");
            } else {
                let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
                let e = k * n * (n + 1) / 2 + lin * n + shift;
                acc = acc.add(&mono(sign, e, p + MARGIN).mul(&inv_geom(d, j, p)));
            }
            n += dir;
        }
    }
    acc
}

fn x(e: i64, k: i64, p: i64) -> LaurentSeries {
    x_sum(e, k, p + MARGIN).unwrap()
}

fn h(e: i64, k: i64, p: i64) -> LaurentSeries {
    h_sum(e, k, p + MARGIN).unwrap()
}

fn sigma(k: i64, p: i64) -> LaurentSeries {
    let mut acc = LaurentSeries::zero(p + MARGIN);
    let mut m = k;
    while m < p + MARGIN {
        acc = acc.add(&mono(1, m, p + MARGIN).mul(&inv_geom(m, 2, p)));
        m += k;
    }
    acc
}

fn assert_same(name: &str, lhs: &LaurentSeries, rhs: &LaurentSeries, p: i64) {
    assert!(lhs.prec() >= p && rhs.prec() >= p, "{name}: precision {} / {}", lhs.prec(), rhs.prec());
    let (l, rr) = (lhs.truncate(p), rhs.truncate(p));
    if let Some((n, a, b)) = l.first_mismatch(&rr) {
        panic!("{name}: q^{n}: {a} vs {b}");
    }
}

const P: i64 = 300;

const CASES: &[(i64, i64, i64, i64, i64, i64)] = &[
    // (K, a1, a2, b1, b2, b3)
    (11, 4, 5, 2, 3, 7),
    (11, 1, 6, 3, 5, 9),
    (11, -2, 3, 1, 4, 2),
    (121, 44, -77, 88, 33, 22),
    (121, 11, 55, 22, -44, 66),
];

#[test]
fn l21_single_pole() {
    for &(k, _, _, b1, ..) in CASES {
        let lhs = euler(k, P + MARGIN).pow(2).unwrap().div(&bracket(b1, k, P)).unwrap();
        let rhs = bil(k, 0, 0, b1, 1, false, P);
        assert_same(&format!("L-2-1 K={k} b1={b1}"), &lhs, &rhs, P);
    }
}

#[test]
fn l22_two_poles() {
    for &(k, a1, _, b1, b2, _) in CASES {
        let lhs = bracket(a1, k, P)
            .mul(&euler(k, P + MARGIN).pow(2).unwrap())
            .div(&bracket(b1, k, P).mul(&bracket(b2, k, P)))
            .unwrap();
        let part = |u: i64, v: i64| {
            bracket(a1 - u, k, P)
                .div(&bracket(v - u, k, P))
                .unwrap()
                .mul(&bil(k, a1 - v, 0, u, 1, false, P))
        };
        let rhs = part(b1, b2).add(&part(b2, b1));
        assert_same(&format!("L-2-2 K={k}"), &lhs, &rhs, P);
    }
}

#[test]
fn l23_x_difference() {
    for &(k, a1, _, b1, ..) in CASES {
        let ratio = bracket(a1, k, P).div(&bracket(b1, k, P)).unwrap();
        let lhs = ratio.mul(&x(a1, k, P).sub(&x(b1, k, P)));
        let rhs = bracket(a1 - b1, k, P)
            .div(&bracket(-b1, k, P))
            .unwrap()
            .mul(&bil(k, a1, 0, b1, 1, false, P))
            .add(&ratio.mul(&bil(k, a1 - b1, 0, 0, 1, true, P)));
        assert_same(&format!("L-2-3 K={k}"), &lhs, &rhs, P);
    }
}

#[test]
fn l31_double_poles() {
    for &(k, _, _, b1, b2, _) in CASES {
        let j4 = euler(k, P + MARGIN).pow(4).unwrap();
        let lhs = j4.div(&bracket(b1, k, P).mul(&bracket(b2, k, P))).unwrap();
        let part = |u: i64, v: i64| {
            bracket(-u, k, P)
                .div(&bracket(v - u, k, P))
                .unwrap()
                .mul(&bil(k, k - v, u, u, 2, false, P))
                .scalar_mul(&r(-1))
        };
        let rhs = part(b1, b2).add(&part(b2, b1));
        assert_same(&format!("L-3-1 K={k}"), &lhs, &rhs, P);
    }
}

#[test]
fn l32_x_times_quotient() {
    for &(k, _, _, b1, ..) in CASES {
        let lhs = euler(k, P + MARGIN)
            .pow(2)
            .unwrap()
            .div(&bracket(b1, k, P))
            .unwrap()
            .mul(&x(b1, k, P));
        let rhs = bil(k, k, b1, b1, 2, false, P);
        assert_same(&format!("L-3-2 K={k}"), &lhs, &rhs, P);
    }
}

#[test]
fn l33_three_poles() {
    for &(k, _, a2, b1, b2, b3) in CASES {
        let lhs = euler(k, P + MARGIN)
            .pow(4)
            .unwrap()
            .mul(&bracket(a2, k, P))
            .div(&bracket(b1, k, P).mul(&bracket(b2, k, P)).mul(&bracket(b3, k, P)))
            .unwrap();
        let part = |u: i64, v: i64, w: i64| {
            bracket(-u, k, P)
                .mul(&bracket(a2 - u, k, P))
                .div(&bracket(v - u, k, P).mul(&bracket(w - u, k, P)))
                .unwrap()
                .mul(&bil(k, a2 + k - v - w, u, u, 2, false, P))
                .scalar_mul(&r(-1))
        };
        let rhs = part(b1, b2, b3).add(&part(b2, b1, b3)).add(&part(b3, b1, b2));
        assert_same(&format!("L-3-3 K={k}"), &lhs, &rhs, P);
    }
}

#[test]
fn l34_x_combination() {
    for &(k, _, a2, b1, b2, _) in CASES {
        let part = |u: i64, v: i64| {
            bracket(a2 - u, k, P)
                .div(&bracket(v - u, k, P))
                .unwrap()
                .mul(&bil(k, a2 - v + k, u, u, 2, false, P))
        };
        let lhs = part(b1, b2).add(&part(b2, b1));
        let rhs = euler(k, P + MARGIN)
            .pow(2)
            .unwrap()
            .mul(&bracket(a2, k, P))
            .div(&bracket(b1, k, P).mul(&bracket(b2, k, P)))
            .unwrap()
            .mul(&x(a2, k, P).sub(&x(b1, k, P)).sub(&x(b2, k, P)))
            .scalar_mul(&r(-1));
        assert_same(&format!("L-3-4 K={k}"), &lhs, &rhs, P);
    }
}

/// Both sides of L-3-5 with the constant sum entering the brace as `c · Σ q^(Kn)/(1-q^(Kn))^2`.
fn l35_sides(k: i64, a2: i64, b1: i64, c: i64) -> (LaurentSeries, LaurentSeries) {
    let ratio = bracket(a2, k, P).div(&bracket(b1, k, P)).unwrap();
    let lhs = ratio.mul(&bil(k, a2 + k - b1, 0, 0, 2, true, P)).add(
        &bracket(a2 - b1, k, P)
            .div(&bracket(-b1, k, P))
            .unwrap()
            .mul(&bil(k, a2 + k, b1, b1, 2, false, P)),
    );
    let s1 = x(a2, k, P).sub(&x(b1, k, P));
    let s2 = x(b1, k, P).sub(&x(a2, k, P)).add(&h(b1, k, P)).sub(&h(a2, k, P));
    let brace = sigma(k, P)
        .scalar_mul(&r(c))
        .add(&s1.mul(&s1.add(&LaurentSeries::one(P + MARGIN).scalar_mul(&r(2)))))
        .add(&s2);
    let rhs = ratio.mul(&brace).scalar_mul(&BigRational::new((-1).into(), 2.into()));
    (lhs, rhs)
}

#[test]
fn l35_primed_double_pole() {
    for &(k, _, a2, b1, ..) in CASES {
        let (lhs, rhs) = l35_sides(k, a2, b1, 2);
        assert_same(&format!("L-3-5 K={k}"), &lhs, &rhs, P);
    }
}

#[test]
fn l35_printed_sign_fails_at_first_constant_term() {
    // printed with -2 Σ q^n/(1-q^n)^2; the first disagreement is at q^K
    for &(k, _, a2, b1, ..) in CASES {
        let (lhs, rhs) = l35_sides(k, a2, b1, -2);
        let (n, _, _) = lhs.truncate(P).first_mismatch(&rhs.truncate(P)).expect("printed sign differs");
        let ratio = bracket(a2, k, P).div(&bracket(b1, k, P)).unwrap();
        assert_eq!(n, k + ratio.valuation().unwrap(), "K={k}");
    }
}
