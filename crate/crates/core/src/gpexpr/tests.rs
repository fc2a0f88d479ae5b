use super::*;
use crate::exactreal::multiquadratic_field;
use proptest::prelude::*;

fn parse(src: &str) -> Expr {
    parse_expr(src, &ParseContext::default()).unwrap()
}

fn ints(e: &Expr, range: std::ops::Range<i64>) -> Vec<i64> {
    range.map(|n| e.eval_i64(n).unwrap().as_integer().unwrap().try_into().unwrap()).collect()
}

const RUNNING: &str = "floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))";

#[test]
fn running_example_values() {
    let g = parse(RUNNING);
    assert_eq!(g.height(), 3);
    let f = multiquadratic_field(&[2, 3]).unwrap();
    assert_eq!(g.eval_i64(0).unwrap().as_integer().unwrap(), 0.into());
    assert_eq!(g.eval_i64(1).unwrap().as_integer().unwrap(), 0.into());
    if let Expr::Floor(inner) = &g {
        let v = inner.eval_i64(1).unwrap();
        assert_eq!(v.field(), Some(&f));
    }
    // float oracle away from the boundaries
    for n in 0..60i64 {
        let x = (2f64).sqrt() * n as f64 * ((3f64).sqrt() * n as f64).floor();
        let fr = x - x.floor();
        if (fr - 0.5).abs() > 1e-6 && fr > 1e-6 {
            let want = (2.0 * fr).floor() as i64;
            assert_eq!(ints(&g, n..n + 1)[0], want, "n = {n}");
        }
    }
}

#[test]
fn sturmian_difference_form() {
    let e = parse("floor(n*1/2*(sqrt(5)-1)) - floor((n-1)*1/2*(sqrt(5)-1))");
    assert_eq!(ints(&e, 0..10), vec![1, 0, 1, 0, 1, 1, 0, 1, 0, 1]);
}

#[test]
fn parametric_parse() {
    let e = parse("floor(a1*n + a2)");
    assert_eq!(e.index_set().into_iter().collect::<Vec<_>>(), vec![1, 2]);
    assert!(matches!(e.eval_i64(0), Err(Error::MissingParam(1))));
}

#[test]
fn syntax_errors_report_position() {
    let err = parse_expr("floor(n +", &ParseContext::default()).unwrap_err();
    assert!(matches!(err, Error::Syntax { position: 9, .. }));
    let err = parse_expr("n $ 2", &ParseContext::default()).unwrap_err();
    assert!(matches!(err, Error::Syntax { position: 2, .. }));
    assert!(matches!(parse_expr("foo*n", &ParseContext::default()), Err(Error::UnknownConstant(_))));
}

#[test]
fn field_mismatch_on_foreign_constant() {
    let mut ctx = ParseContext::default();
    let k = multiquadratic_field(&[7]).unwrap();
    ctx.constants.insert("c".into(), RealValue::from(k.generator()));
    assert!(matches!(parse_expr("sqrt(2)*c", &ctx), Err(Error::FieldMismatch)));
    assert!(parse_expr("c*n", &ctx).is_ok());
}

#[test]
fn format_examples() {
    assert_eq!(format_expr(&Expr::floor(Expr::Var)), "floor(n)");
    assert_eq!(format_expr(&Expr::Add(vec![Expr::int(1), Expr::Var])), "1 + n");
    assert_eq!(format_expr(&parse("n - (1 - n)*2")), "n - (1 - n)*2");
}

const CORPUS: &[&str] = &[
    RUNNING,
    "n^2 + 1",
    "floor(sqrt(2)*n)",
    "floor(sqrt(2)*n*floor(sqrt(3)*n) + sqrt(5)*n^2)",
    "floor(n*phi) - floor((n-1)*phi)",
    "1 - floor(2*frac((sqrt(2)*n + a1)*floor(sqrt(3)*n + a2) + a3*n + a4))",
    "dist(sqrt(2)*n)*dist(sqrt(3)*n)*n - 1/10",
    "ceil(-1/2*n + 1/3) + nint(n*1/3)",
    "-(n - 2)^3 * --n",
    "frac(phi*n^2)",
    "(1/2)^2 + 3/4*n",
    "floor(pi*n)",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let e = parse(src);
        let again = parse(&format_expr(&e));
        assert_eq!(e, again, "{src} -> {}", format_expr(&e));
    }
}

#[test]
fn heights() {
    assert_eq!(parse("n^2 + 1").height(), 0);
    assert_eq!(parse("floor(sqrt(2)*n)").height(), 1);
    assert_eq!(parse("floor(sqrt(2)*n*floor(sqrt(3)*n) + sqrt(5)*n^2)").height(), 2);
    assert_eq!(parse("dist(n)").height(), 2);
}

#[test]
fn floor_expansions_agree() {
    for src in ["frac(sqrt(2)*n - 1/3)", "ceil(1/3*phi*n)", "nint(sqrt(3)*n + 1/2)", "dist(sqrt(2)*n)", "dist(1/4*n)"] {
        let e = parse(src);
        let x = e.expand_to_floor();
        for n in -100..=100i64 {
            let a = e.eval_i64(n).unwrap();
            let b = x.eval_i64(n).unwrap();
            assert_eq!(a.sub(&b).unwrap().sign().unwrap(), 0, "{src} at {n}");
        }
    }
}

#[test]
fn normal_form_examples() {
    let snf = sum_normal_form(&parse("n^2")).unwrap();
    assert_eq!(snf.shape(), (1, vec![0]));

    let snf = sum_normal_form(&parse("floor(sqrt(2)*n)*floor(sqrt(3)*n) + n")).unwrap();
    assert_eq!(snf.shape(), (2, vec![2, 0]));
    assert_eq!(snf.terms[0].floors, vec![parse("sqrt(2)*n"), parse("sqrt(3)*n")]);

    let e = parse("floor(sqrt(2)*n*floor(sqrt(3)*n))");
    let snf = sum_normal_form(&e).unwrap();
    assert_eq!(snf.shape(), (1, vec![1]));
    assert_eq!(snf.terms[0].floors[0].height(), 1);
    for n in 0..=50i64 {
        let d = e.eval_i64(n).unwrap().sub(&snf.eval(&n.into()).unwrap()).unwrap();
        assert_eq!(d.sign().unwrap(), 0);
    }
}

#[test]
fn normal_form_corpus() {
    for src in CORPUS {
        let e = parse(src);
        if e.is_parametric() || src.contains("pi") {
            continue;
        }
        let snf = sum_normal_form(&e).unwrap();
        let h = e.height();
        for t in &snf.terms {
            for f in &t.floors {
                assert!(f.height() < h, "{src}: {f} has height {} ≥ {h}", f.height());
            }
        }
        let rebuilt = snf.to_expr();
        for n in 0..=120i64 {
            let d = e.eval_i64(n).unwrap().sub(&snf.eval(&n.into()).unwrap()).unwrap();
            assert_eq!(d.sign().unwrap(), 0, "{src} at {n}");
            let d = e.eval_i64(n).unwrap().sub(&rebuilt.eval_i64(n).unwrap()).unwrap();
            assert_eq!(d.sign().unwrap(), 0, "{src} rebuilt at {n}");
        }
    }
}

#[test]
fn binding() {
    let e = parse("floor(a1*n)");
    let k = multiquadratic_field(&[2]).unwrap();
    let s2 = RealValue::from(crate::exactreal::sqrt_const(&k, 2).unwrap());
    let b = bind_params(&e, &Assignment::from([(1, s2)])).unwrap();
    let direct = parse("floor(sqrt(2)*n)");
    assert_eq!(ints(&b, 0..40), ints(&direct, 0..40));
    let two = parse("floor(a1*n + a2)");
    assert!(matches!(bind_params(&two, &Assignment::from([(1, RealValue::from(1))])), Err(Error::MissingParam(2))));
}

const TEMPLATE: &str = "1 - floor(2*frac((sqrt(2)*n + a1)*floor(sqrt(3)*n + a2) + a3*n + a4))";
const BASE: &str = "1 - floor(2*frac(sqrt(2)*n*floor(sqrt(3)*n)))";

fn par_gp_assignment(m: i64) -> Assignment {
    let k = multiquadratic_field(&[2, 3]).unwrap();
    let s2 = RealValue::from(crate::exactreal::sqrt_const(&k, 2).unwrap());
    let s3 = RealValue::from(crate::exactreal::sqrt_const(&k, 3).unwrap());
    let mv = RealValue::from(m);
    let alpha = s2.mul(&mv).unwrap().frac().unwrap();
    let beta = s3.mul(&mv).unwrap().frac().unwrap();
    let b = RealValue::from(s3.mul(&mv).unwrap().floor().unwrap());
    let gamma = s2.mul(&b).unwrap().frac().unwrap();
    let delta = alpha.mul(&b).unwrap().frac().unwrap();
    Assignment::from([(1, alpha), (2, beta), (3, gamma), (4, delta)])
}

#[test]
fn shift_check_par_gp() {
    let t = parse(TEMPLATE);
    let g = parse(BASE);
    for m in [0i64, 1, 2, 7] {
        assert!(shift_check(&t, &g, m, &par_gp_assignment(m), 201).unwrap(), "m = {m}");
    }
    let zero = Assignment::from([(1, RealValue::zero()), (2, RealValue::zero()), (3, RealValue::zero()), (4, RealValue::zero())]);
    assert!(shift_check(&t, &g, 0, &zero, 200).unwrap());
    let mut wrong = par_gp_assignment(1);
    let g3 = wrong[&3].add(&RealValue::rational(1, 2)).unwrap();
    wrong.insert(3, g3);
    assert!(!shift_check(&t, &g, 1, &wrong, 200).unwrap());
}

#[test]
fn bound_template_formats_and_reparses() {
    let t = parse(TEMPLATE);
    let b = bind_params(&t, &par_gp_assignment(3)).unwrap();
    let again = parse(&format_expr(&b));
    assert_eq!(ints(&b, 0..60), ints(&again, 0..60));
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        (0i64..20).prop_map(Expr::int),
        (1i64..9, 2i64..9).prop_map(|(p, q)| Expr::labeled(format!("{p}/{q}"), RealValue::rational(p, q))),
        (1u32..4).prop_map(Expr::Param),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Mul),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), 1u32..4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            inner.clone().prop_map(Expr::floor),
            inner.clone().prop_map(Expr::frac),
            inner.clone().prop_map(|e| Expr::Ceil(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Nint(Box::new(e))),
            inner.prop_map(|e| Expr::Dist(Box::new(e))),
        ]
    })
}

/// Nested sums/products with a single child or nested same-kind children
/// are not produced by the parser.
fn parser_shaped(e: &Expr) -> bool {
    match e {
        Expr::Add(v) => v.len() >= 2 && v.iter().all(|c| !matches!(c, Expr::Add(_)) && parser_shaped(c)),
        Expr::Mul(v) => v.len() >= 2 && v.iter().all(|c| !matches!(c, Expr::Mul(_)) && parser_shaped(c)),
        _ => e.children().into_iter().all(parser_shaped),
    }
}

proptest! {
    #[test]
    fn format_parse_round_trip(e in arb_expr()) {
        prop_assume!(parser_shaped(&e));
        let text = format_expr(&e);
        let back = parse_expr(&text, &ParseContext::default()).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
    }

    #[test]
    fn height_laws(a in arb_expr(), b in arb_expr()) {
        let sum = Expr::Add(vec![a.clone(), b.clone()]);
        prop_assert!(sum.height() <= a.height().max(b.height()));
        prop_assert_eq!(Expr::floor(a.clone()).height(), a.height() + 1);
    }
}
