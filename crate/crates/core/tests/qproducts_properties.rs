use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qdissect::qproducts::{jab, parse, Evaluator, GeneralizedEtaProduct, Monomial, QExpr};
use qdissect::verifier::{suite_records, SUITES};
use qdissect::LaurentSeries;

/// `Π (1 - q^m)` over the given factors, expanded naively.
fn naive_product(factors: impl Iterator<Item = i64>, prec: i64) -> LaurentSeries {
    let mut c = vec![BigInt::zero(); prec as usize];
    c[0] = BigInt::one();
    for m in factors {
        let m = m as usize;
        for i in (m..c.len()).rev() {
            let t = c[i - m].clone();
            c[i] -= t;
        }
    }
    LaurentSeries::from_integers(0, c)
}

fn naive_jab(a: u64, b: u64, prec: i64) -> LaurentSeries {
    let (a, b) = (a as i64, b as i64);
    let ms = (0..)
        .map(move |n| [a + b * n, b - a + b * n, b + b * n])
        .take_while(move |t| t[0].min(t[1]) < prec)
        .flatten()
        .filter(move |m| *m < prec);
    naive_product(ms, prec)
}

#[test]
fn triple_product_all_small_moduli() {
    for b in 2..=12u64 {
        for a in 1..b {
            assert_eq!(jab(a, b, 400), naive_jab(a, b, 400), "J({a},{b})");
        }
    }
    for (a, b) in [(1, 11), (5, 11), (11, 121), (33, 121), (55, 121), (7, 121)] {
        assert_eq!(jab(a, b, 400), naive_jab(a, b, 400), "J({a},{b})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triple_product_random(b in 2u64..130, a_frac in 0.0f64..1.0, prec in 1i64..500) {
        let a = 1 + ((b - 1) as f64 * a_frac) as u64 % (b - 1);
        prop_assert_eq!(jab(a, b, prec), naive_jab(a, b, prec));
    }
}

#[test]
fn parse_print_round_trip_on_corpus() {
    let mut count = 0;
    for s in SUITES {
        for rec in suite_records(s).unwrap() {
            for side in [&rec.lhs, &rec.rhs] {
                let e = parse(side).unwrap();
                let printed = e.to_string();
                assert_eq!(parse(&printed).unwrap(), e, "{}: {printed}", rec.id);
                count += 1;
            }
        }
    }
    assert!(count >= 2 * (55 + 5 + 23 + 44), "{count}");
}

fn atom() -> impl Strategy<Value = QExpr> {
    prop_oneof![
        (1u64..6).prop_map(QExpr::Euler),
        (2u64..12).prop_flat_map(|b| (1..b).prop_map(move |a| QExpr::Jab(a, b))),
        Just(QExpr::Q),
        Just(QExpr::BigT),
        Just(QExpr::SmallT),
        (-5i64..6, 1i64..4).prop_map(|(n, d)| QExpr::rational(n, d)),
    ]
}

fn expr() -> impl Strategy<Value = QExpr> {
    atom().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
            (inner.clone(), 0i64..3).prop_map(|(a, n)| a.pow(n)),
            (inner.clone(), 2u64..4).prop_map(|(a, k)| a.scale(k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scaling_commutes_with_evaluation(e in expr(), k in 1u64..6) {
        let ev = Evaluator::new();
        let p = 60;
        let direct = ev.eval(&e.clone().scale(k), p).unwrap();
        let inner = ev.eval(&e, (p + k as i64 - 1) / k as i64).unwrap();
        prop_assert_eq!(direct, inner.scale_exponents(k as i64).truncate(p));
    }

    #[test]
    fn printing_round_trips(e in expr()) {
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn eta_form_round_trip(
        pairs in prop::collection::vec((0usize..2, 1u64..61, -3i64..4), 0..5),
        classical in prop::collection::vec((0usize..3, -3i64..4), 0..3),
    ) {
        let deltas = [11u64, 121];
        let mut m = Monomial::one();
        for (d, g, r) in pairs {
            let d = deltas[d];
            let g = 1 + g % (d - 1);
            m = m.mul(&Monomial::eta(d, g).pow(r));
        }
        for (d, c) in classical {
            m = m.mul(&Monomial::euler([1u64, 11, 121][d]).pow(c));
        }
        let g: GeneralizedEtaProduct = m.to_generalized_eta(121).unwrap();
        prop_assert_eq!(g.to_monomial(), m.clone());
        if m.qpow.is_integer() {
            prop_assert_eq!(g.expand(250).unwrap(), m.series(250).unwrap());
        } else {
            prop_assert!(g.expand(250).is_err());
        }
    }
}

#[test]
fn appendix_atoms_have_expected_leading_terms() {
    let ev = Evaluator::new();
    let t = ev.eval_str("t", 3).unwrap();
    assert_eq!(t.coeff_or_zero(0), BigRational::zero());
    assert_eq!(t.coeff(1).unwrap(), BigRational::one());
    let p = ev.eval_str("1/J(1)", 10).unwrap();
    let expect: Vec<i64> = vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30];
    assert_eq!(p.to_i64_vec().unwrap(), expect);
}

#[test]
fn parse_errors_point_at_the_column() {
    let err = parse("J(1,").unwrap_err();
    assert_eq!(err.column, 5);
    assert!(err.caret("J(1,").ends_with("    ^"));
}
