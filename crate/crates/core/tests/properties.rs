use erfkit::approx::Approximant;
use erfkit::exact::{format_rational, parse_rational, Rational, RationalPolynomial};
use erfkit::oracle::erf_ref;
use erfkit::spline::build_spline;
use erfkit::sqrt::build_sqrt;
use erfkit::transition::{sweep, GridSpec, ReferenceGrid};
use erfkit::PrecisionContext;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = RationalPolynomial> {
    prop::collection::vec((-50i64..50, 1i64..20), 0..6)
        .prop_map(|v| RationalPolynomial::new(v.into_iter().map(|(n, d)| Rational::from((n, d))).collect()))
}

fn rat() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..500).prop_map(|(n, d)| Rational::from((n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_evaluates_pointwise(p in poly(), q in poly(), x in rat()) {
        let prod = &p * &q;
        prop_assert_eq!(prod.eval_rational(&x), p.eval_rational(&x) * q.eval_rational(&x));
    }

    #[test]
    fn derivative_undoes_antiderivative(p in poly()) {
        prop_assert_eq!(p.antiderivative().derivative(), p);
    }

    #[test]
    fn rational_text_roundtrips(x in rat()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn approximants_are_odd(n in 0usize..10, xi in 1u32..4000) {
        let ctx = PrecisionContext::default();
        let x = ctx.float(xi) / 1000u32;
        let neg = -x.clone();
        let s = build_spline(n);
        prop_assert_eq!(s.eval(&x, &ctx).unwrap(), -s.eval(&neg, &ctx).unwrap());
        let q = build_sqrt(n);
        prop_assert_eq!(q.eval(&x, &ctx).unwrap(), -q.eval(&neg, &ctx).unwrap());
    }

    #[test]
    fn spline_values_bounded_near_oracle(n in 2usize..12, xi in 1u32..1500) {
        let ctx = PrecisionContext::default();
        let x = ctx.float(xi) / 1000u32;
        let a = build_spline(n).eval(&x, &ctx).unwrap();
        let e = erf_ref(&x, &ctx).unwrap();
        prop_assert!(((a / e) - 1u32).abs() < 0.06);
    }
}

#[test]
fn sweep_is_deterministic_and_partition_invariant() {
    let ctx = PrecisionContext::default();
    let spec = GridSpec::from_f64(0.0, 4.0, 800, &ctx).unwrap();
    let grid = ReferenceGrid::erf(spec, &ctx).unwrap();
    let s = build_spline(3);
    let a = sweep(&s, &grid).unwrap();
    let b = sweep(&s, &grid).unwrap();
    assert_eq!(a.re_b, b.re_b);
    assert_eq!(a.argmax, b.argmax);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| sweep(&s, &grid).unwrap());
    assert_eq!(a.re_b, c.re_b);
}

#[test]
fn higher_spline_orders_tighten_small_interval_bound() {
    let ctx = PrecisionContext::default();
    let grid = ReferenceGrid::erf(GridSpec::from_f64(0.0, 1.0, 400, &ctx).unwrap(), &ctx).unwrap();
    let mut prev = None;
    for n in 0..8 {
        let r = sweep(&build_spline(n), &grid).unwrap().re_b;
        if let Some(p) = prev {
            assert!(r < p, "order {n}");
        }
        prev = Some(r);
    }
}
