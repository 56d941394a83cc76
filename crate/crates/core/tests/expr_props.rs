use gafrac::expr::{diff, parse, Expr};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("u".to_string()),
        (0.5f64..3.0).prop_map(|c| format!("{c:.4}")),
    ]
}

fn expression() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l} + {r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l} - {r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l} * {r})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("({l} / {r})")),
            (inner.clone(), prop::sample::select(vec![-2.0, -1.0, -0.5, 0.5, 2.0, 3.0]))
                .prop_map(|(b, e)| format!("({b})^({e})")),
            inner.clone().prop_map(|e| format!("ln({e})")),
            inner.clone().prop_map(|e| format!("-exp({e} / 5)")),
        ]
    })
}

fn moderate(e: &Expr, u: f64) -> bool {
    e.eval(u).is_ok_and(|v| v.abs() < 1e6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_matches_central_difference(src in expression(), u in 0.5f64..3.0) {
        let e = parse(&src).unwrap();
        let h = 1e-6 * u.abs().max(1.0);
        prop_assume!(moderate(&e, u - h) && moderate(&e, u) && moderate(&e, u + h));
        let fd = (e.eval(u + h).unwrap() - e.eval(u - h).unwrap()) / (2.0 * h);
        let Ok(exact) = diff(&e).eval(u) else { return Err(TestCaseError::fail("derivative failed where f is finite")) };
        prop_assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(1.0), "{src} at {u}: {exact} vs {fd}");
    }

    #[test]
    fn printing_reparses_to_the_same_tree(src in expression()) {
        let e = parse(&src).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(&again, &e);
        let d = diff(&e);
        prop_assert_eq!(parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn evaluation_is_deterministic(src in expression(), u in 0.1f64..10.0) {
        let e = parse(&src).unwrap();
        match (e.eval(u), e.eval(u)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.to_bits(), y.to_bits()),
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }
}

#[test]
fn domain_errors() {
    assert!(parse("ln(u)").unwrap().eval(-1.0).is_err());
    assert!(parse("u^-1").unwrap().eval(0.0).is_err());
}
