use bracketwords::analysis::{complexity_of, counting_and_discrepancy, recurrence_function, Recurrence};
use bracketwords::gpexpr::{parse_expr, sum_normal_form};
use bracketwords::pisot::make_pisot_unit;
use bracketwords::sclab::{direct_prefix, reconstruct_prefix};
use bracketwords::words::WordCatalog;
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn defined_word_matches_its_expression() {
    let mut cat = WordCatalog::with_defaults();
    cat.load("word beatty = expr(floor(sqrt(2)*(n+1)) - floor(sqrt(2)*n), {1: a, 2: b})\n").unwrap();
    let w = cat.get("beatty").unwrap();
    let src = "floor(sqrt(2)*(n+1)) - floor(sqrt(2)*n)";
    let e = parse_expr(src, &cat.context_for(src).unwrap()).unwrap();
    let p = w.prefix(300).unwrap();
    for (n, &s) in p.iter().enumerate() {
        let v = e.eval_i64(n as i64).unwrap().as_integer().unwrap();
        assert_eq!(w.alphabet().label(s), if v == BigInt::from(1) { "a" } else { "b" });
    }
    // a Sturmian word in disguise
    let prof = complexity_of(&w.prefix(20_000).unwrap(), &[1, 5, 40]);
    assert_eq!(prof.table, vec![(1, 2), (5, 6), (40, 41)]);
}

#[test]
fn normal_form_agrees_with_expression() {
    let src = "floor(sqrt(2)*n)*(3 + floor(sqrt(3)*n)) - 2*frac(sqrt(6)*n)";
    let cat = WordCatalog::with_defaults();
    let e = parse_expr(src, &cat.context_for(src).unwrap()).unwrap();
    let nf = sum_normal_form(&e).unwrap();
    for n in -20..=20i64 {
        let a = e.eval_i64(n).unwrap();
        let b = nf.eval(&BigInt::from(n)).unwrap();
        assert_eq!(a.cmp_exact(&b).unwrap(), std::cmp::Ordering::Equal, "n = {n}");
    }
}

#[test]
fn pisot_word_agrees_with_membership() {
    let u = make_pisot_unit(2, -1).unwrap();
    let w = u.power_word().prefix(2_000).unwrap();
    for (n, &s) in w.iter().enumerate() {
        assert_eq!(s == 1, u.contains(n as i64).unwrap(), "n = {n}");
    }
    assert!(w.iter().filter(|&&s| s == 1).count() >= 5);
}

#[test]
fn catalog_measurements_are_consistent() {
    let cat = WordCatalog::with_defaults();
    let fib = cat.resolve("fib_sturmian").unwrap();
    let r = counting_and_discrepancy(&fib, 1, &[10, 100, 1000], 10_000).unwrap();
    assert!(r.samples.iter().all(|s| s.discrepancy < 2.0));
    assert_eq!(r.samples[2].count, fib.prefix(1000).unwrap().iter().filter(|&&s| s == 1).count() as u64);
    match recurrence_function(&fib, &[0, 0], 50_000).unwrap() {
        Recurrence::Unbounded { .. } => {}
        other => panic!("00 is not a factor of the Fibonacci word: {other:?}"),
    }
}

#[test]
fn reconstructed_prefix_matches_direct_floor() {
    let h = vec![(0..12).collect::<Vec<i64>>(), (0..12).map(|n| n * n / 5).collect()];
    for alpha in [vec![q(1, 3), q(-2, 7)], vec![q(5, 11), q(1, 13)], vec![q(0, 1), q(1, 2)]] {
        let rec = reconstruct_prefix(&h, &alpha, &q(1, 1)).unwrap();
        assert!(rec.matches());
        let direct = direct_prefix(&h, &alpha).unwrap();
        let expect: Vec<BigInt> = (0..12)
            .map(|n| {
                let v = &alpha[0] * q(h[0][n], 1) + &alpha[1] * q(h[1][n], 1);
                v.floor().to_integer()
            })
            .collect();
        assert_eq!(direct, expect);
    }
}
