use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::exactreal::{multiquadratic_field, sqrt_const, RealValue};
use crate::gpexpr::{parse_expr, ParseContext};

fn catalog() -> WordCatalog {
    WordCatalog::with_defaults()
}

fn bits(w: &Word, n: usize) -> String {
    w.render_auto(n).unwrap()
}

fn expr(src: &str) -> crate::gpexpr::Expr {
    parse_expr(src, &ParseContext::default()).unwrap()
}

fn sqrt(k: u64) -> RealValue {
    RealValue::from(sqrt_const(&multiquadratic_field(&[k]).unwrap(), k).unwrap())
}

/// Brute-force count of distinct factors of length `n` in `s`.
fn factors(s: &[Sym], n: usize) -> usize {
    let mut set = std::collections::HashSet::new();
    for w in s.windows(n) {
        set.insert(w.to_vec());
    }
    set.len()
}

#[test]
fn fibonacci_word_prefix() {
    let w = catalog().get("fib_sturmian").unwrap().clone();
    assert_eq!(bits(&w, 56), "10101101011011010110101101101011011010110101101101011010");
}

#[test]
fn golden_square_prefix() {
    let w = catalog().get("golden_square").unwrap().clone();
    assert_eq!(bits(&w, 55), "1000101001111011101110111010011111011101111000111110111");
}

#[test]
fn fibonacci_set_prefix() {
    let w = catalog().get("fib_set").unwrap().clone();
    let p = bits(&w, 16);
    assert_eq!(p, "1111010010000100");
    // the commonly printed string agrees up to index 10
    assert_eq!(&p[..11], &"1111010010010001"[..11]);
}

#[test]
fn tribonacci_set_members() {
    let w = catalog().get("tribonacci_set").unwrap().clone();
    let p = w.prefix(45).unwrap();
    let members: Vec<usize> = (0..45).filter(|&i| p[i] == 1).collect();
    assert_eq!(members, vec![0, 1, 2, 4, 7, 13, 24, 44]);
}

#[test]
fn expression_words() {
    let c = catalog();
    assert_eq!(bits(c.get("one_zero").unwrap(), 8), "10000000");
    // {√2n} < 1/2 iff `a`; n = 4 gives {5.657} > 1/2
    assert_eq!(bits(c.get("frac_half").unwrap(), 8), "aababaab");
    let bad = word_from_expr(expr("floor(2*frac(sqrt(2)*n))"), Coding::new(vec![(RealValue::from(0), "a".into())])).unwrap();
    match bad.prefix(5) {
        Err(Error::UncodedValue { n, .. }) => assert_eq!(n, 2),
        other => panic!("expected UncodedValue, got {other:?}"),
    }
}

#[test]
fn zero_indicator_matches_formula() {
    let w = zero_indicator(expr("frac(sqrt(2)*n)"));
    assert_eq!(bits(&w, 6), "100000");
    let g = "floor(sqrt(3)*n) - 1";
    let direct = zero_indicator(expr(g));
    let formula = expr(&format!("floor(1 - 1/2*frac({g}) - 1/2*frac(sqrt(2)*({g})))"));
    let d = direct.prefix(501).unwrap();
    for n in 0..=500u64 {
        let v = formula.eval(&BigInt::from(n)).unwrap();
        assert_eq!(BigInt::from(d[n as usize]), v.as_integer().unwrap(), "n = {n}");
    }
}

#[test]
fn sturmian_routes_agree() {
    let c = catalog();
    let w = c.get("fib_sturmian").unwrap();
    let rot =
        interval_indicator(expr("frac(1/2*(sqrt(5)-1)*n)"), IntervalSet::parse("[0, 1/2*(sqrt(5)-1))", &ParseContext::default()).unwrap());
    assert_eq!(w.prefix(1001).unwrap(), rot.prefix(1001).unwrap());
    let ceil = c.get("fib_sturmian_ceil").unwrap();
    let (a, b) = (w.prefix(5000).unwrap(), ceil.prefix(5000).unwrap());
    // nα+β hits an integer only at n = 0, which swaps the symbols at 0 and 1
    let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
    assert_eq!(diff, vec![0, 1]);
    // with β = 1/3 no integer is hit and the variants coincide
    let alpha = sqrt(5).sub(&RealValue::from(1)).unwrap().mul(&RealValue::rational(1, 2)).unwrap();
    let f = sturmian(alpha.clone(), RealValue::rational(1, 3), SturmianVariant::Floor).unwrap();
    let g = sturmian(alpha, RealValue::rational(1, 3), SturmianVariant::Ceil).unwrap();
    assert_eq!(f.prefix(5000).unwrap(), g.prefix(5000).unwrap());
}

#[test]
fn sturmian_complexity_small() {
    let w = catalog().get("fib_sturmian").unwrap().prefix(20000).unwrap();
    for n in 1..=40 {
        assert_eq!(factors(&w, n), n + 1);
    }
}

#[test]
fn product_and_projection() {
    let c = catalog();
    let a = c.get("fib_sturmian").unwrap();
    let b = c.get("silver_sturmian").unwrap();
    let p = product_word(a, b);
    assert_eq!(p.alphabet().len(), 4);
    let left = project_word(&p, a.alphabet(), b.alphabet(), 0).unwrap();
    let right = project_word(&p, a.alphabet(), b.alphabet(), 1).unwrap();
    assert_eq!(left.prefix(3000).unwrap(), a.prefix(3000).unwrap());
    assert_eq!(right.prefix(3000).unwrap(), b.prefix(3000).unwrap());
    let with_const = product_word(a, &constant_word("x"));
    assert_eq!(with_const.prefix(500).unwrap(), a.prefix(500).unwrap());
    let s = p.prefix(20000).unwrap();
    for n in 1..=12 {
        assert_eq!(factors(&s, n), (n + 1) * (n + 1));
    }
}

#[test]
fn subsequence_two_routes() {
    let a = catalog().get("fib_sturmian").unwrap().clone();
    let sub = subsequence_word(&a, expr("2*n")).unwrap();
    let direct = expr("floor(2*n*1/2*(sqrt(5)-1)) - floor((2*n-1)*1/2*(sqrt(5)-1))");
    let s = sub.prefix(301).unwrap();
    for n in 0..=300u64 {
        assert_eq!(BigInt::from(s[n as usize]), direct.eval(&BigInt::from(n)).unwrap().as_integer().unwrap());
    }
    let neg = subsequence_word(&a, expr("n - 3")).unwrap();
    assert!(matches!(neg.prefix(2), Err(Error::NegativeIndex { n: 0, .. })));
}

#[test]
fn rearrangements() {
    let a = catalog().get("fib_sturmian").unwrap().clone();
    let ap = a.prefix(200).unwrap();
    let d = rearrange_word(&a, Rearrange::Dilute { a: 2, pad: "◇".into() }).unwrap();
    assert_eq!(d.render(6, "").unwrap(), "1◇0◇1◇");
    let pr = rearrange_word(&a, Rearrange::Progression { a: 3, b: 2 }).unwrap();
    let pp = pr.prefix(50).unwrap();
    for n in 0..50 {
        assert_eq!(pp[n], ap[3 * n + 2]);
    }
    let bp = rearrange_word(&a, Rearrange::BlockPermute { a: 3, pi: vec![2, 0, 1] }).unwrap();
    let bpp = bp.prefix(60).unwrap();
    for n in 0..60usize {
        assert_eq!(bpp[n], ap[n / 3 + [2, 0, 1][n % 3]]);
    }
    assert!(rearrange_word(&a, Rearrange::BlockPermute { a: 2, pi: vec![0, 2] }).is_err());
    assert!(rearrange_word(&a, Rearrange::Dilute { a: 2, pad: "1".into() }).is_err());
}

#[test]
fn block_and_morphism() {
    let a = catalog().get("fib_sturmian").unwrap().clone();
    let b = block_word(&a, 2).unwrap();
    assert_eq!(b.render(3, " ").unwrap(), "10 10 11");
    let ap = a.prefix(40000).unwrap();
    let bp = b.prefix(20000).unwrap();
    for n in 1..=20 {
        assert!(factors(&bp, n) <= factors(&ap, 2 * n));
    }
    let tm = morphism_word(&a, vec![vec![0, 1], vec![1, 0]], Alphabet::binary()).unwrap();
    assert_eq!(bits(&tm, 8), "10011001");
    assert!(matches!(morphism_word(&a, vec![vec![0], vec![1, 0]], Alphabet::binary()), Err(Error::NonUniformMorphism)));
}

#[test]
fn case_and_code() {
    let c = catalog();
    let a = c.get("fib_sturmian").unwrap().clone();
    let s = c.get("silver_sturmian").unwrap().clone();
    let not_s = code_word(&s, &[1, 0], Alphabet::binary()).unwrap();
    let same = case_word(&[s.clone(), not_s], &[a.clone(), a.clone()]).unwrap();
    assert_eq!(same.prefix(2000).unwrap(), a.prefix(2000).unwrap());
    let bad = case_word(&[s.clone(), a.clone()], &[a.clone(), a.clone()]).unwrap();
    assert!(matches!(bad.prefix(100), Err(Error::PartitionViolation(_))));
    let id = code_word(&a, &[0, 1], Alphabet::binary()).unwrap();
    assert_eq!(id.prefix(300).unwrap(), a.prefix(300).unwrap());
    let relabel = code_word_labels(&a, &[("0".into(), "x".into()), ("1".into(), "y".into())]).unwrap();
    assert_eq!(bits(&relabel, 4), "yxyx");
}

#[test]
fn growth_lambda_fast_path_is_exact() {
    let w = growth_lambda(&BigRational::new(1.into(), 2.into())).unwrap();
    let p = w.prefix(3000).unwrap();
    assert_eq!(p[0], 0);
    assert_eq!(p[1], 1);
    let phi = RealValue::from(crate::exactreal::phi_const(&crate::exactreal::golden_field()).unwrap());
    for n in 1..3000u64 {
        let d = phi.mul(&RealValue::from(n as i64)).unwrap().dist().unwrap();
        let lhs = d.pow(2).unwrap().mul(&RealValue::from(n as i64)).unwrap();
        let expect = lhs.cmp_exact(&RealValue::from(1)).unwrap() != std::cmp::Ordering::Greater;
        assert_eq!(p[n as usize] == 1, expect, "n = {n}");
    }
}

#[test]
fn power_digit_fast_path_is_exact() {
    let w = power_digit(sqrt(2), 2).unwrap();
    let e = expr("floor(10*frac(sqrt(2)*n^2))");
    let p = w.prefix(400).unwrap();
    for n in 0..400u64 {
        assert_eq!(BigInt::from(p[n as usize]), e.eval(&BigInt::from(n)).unwrap().as_integer().unwrap());
    }
}

#[test]
fn heisenberg_matches_expression() {
    let w = catalog().get("heisenberg_23").unwrap().clone();
    let e = expr("floor(10*frac(n*sqrt(3)*frac(n*sqrt(2)) - 1/2*n^2*sqrt(2)*sqrt(3)))");
    let p = w.prefix(60).unwrap();
    for n in 0..60u64 {
        assert_eq!(BigInt::from(p[n as usize]), e.eval(&BigInt::from(n)).unwrap().as_integer().unwrap());
    }
}

#[test]
fn littlewood_origin_and_members() {
    let w = catalog().get("littlewood_23").unwrap().clone();
    let p = w.prefix(200).unwrap();
    assert_eq!(p[0], 0);
    let e = expr("n*dist(sqrt(2)*n)*dist(sqrt(3)*n)");
    for n in 1..200u64 {
        let v = e.eval(&BigInt::from(n)).unwrap();
        let inside = v.cmp_exact(&RealValue::rational(1, 10)).unwrap() == std::cmp::Ordering::Less;
        assert_eq!(p[n as usize] == 1, inside);
    }
    assert!(p.contains(&1));
}

#[test]
fn sparse_sets() {
    let w = catalog().get("super_sparse").unwrap().clone();
    let p = w.prefix(300).unwrap();
    let m: Vec<usize> = (0..300).filter(|&i| p[i] == 1).collect();
    assert_eq!(m, vec![2, 4, 16, 256]);
    assert!(w.at(65536).unwrap() == 1);
    let dense = sparse(SparseSpec::Terms(vec![2.into(), 100.into(), 101.into()]), &default_min_ratio());
    assert!(matches!(dense, Err(Error::HypothesisViolated { index: 2, .. })));
    let ok = sparse(SparseSpec::Terms(vec![2.into(), 5.into(), 40.into()]), &default_min_ratio()).unwrap();
    assert_eq!(bits(&ok, 6), "001001");
}

#[test]
fn tracked_sparse_tracks_target() {
    // f(n) = 1 + log2(n+1), tabulated
    let table: Vec<BigRational> =
        (0..5000u64).map(|n| BigRational::from_integer(BigInt::from(1 + (64 - (n + 1).leading_zeros() as u64 - 1)))).collect();
    let w = tracked_sparse(table.clone(), 2).unwrap();
    let p = w.prefix(5000).unwrap();
    let mut count = 0i64;
    for n in 0..5000usize {
        let f = table[n].to_integer().to_string().parse::<i64>().unwrap();
        assert!((count - f).abs() <= 3, "n = {n}: count {count}, f {f}");
        count += p[n] as i64;
    }
    let bad = vec![BigRational::from_integer(1.into()), BigRational::from_integer(1.into()), BigRational::from_integer(9.into())];
    assert!(tracked_sparse(bad, 1).is_err());
}

#[test]
fn recset_validation() {
    assert!(recset(vec![-1, 2], vec![0, 1]).is_err());
    assert!(recset(vec![0, 0], vec![0, 1]).is_err());
    let periodic = recset(vec![0, 1], vec![3, 5]).unwrap();
    assert_eq!(bits(&periodic, 7), "0001010");
}

#[test]
fn interval_indicator_trivial() {
    let w = interval_indicator(expr("n"), IntervalSet::parse("(-inf, inf)", &ParseContext::default()).unwrap());
    assert!(w.prefix(100).unwrap().iter().all(|&x| x == 1));
}

#[test]
fn definitions_with_field_lines() {
    let src = "\
field K : x^2 - x - 1 in [1, 2]
const tau = theta - 1
word t = sturmian(tau, 0)
word t2 = t | progression(2, 0) | code(0: a, 1: b)
word mixed = product(t, periodic(x, y)) | block(2)
";
    let c = load_definitions(src).unwrap();
    assert_eq!(bits(c.get("t").unwrap(), 56), "10101101011011010110101101101011011010110101101101011010");
    assert_eq!(bits(c.get("t2").unwrap(), 5), "bbbaa");
    assert_eq!(c.get("mixed").unwrap().alphabet().len(), 16);
    assert!(matches!(load_definitions("word x = nosuch"), Err(Error::UnknownName(_))));
    match load_definitions("\n\nword = broken") {
        Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prefixes_are_stable(kind in 0usize..6, n in 0usize..400, m in 0usize..400) {
        let c = catalog();
        let name = ["fib_sturmian", "golden_square", "fib_set", "sturmian_product", "growth_half", "power_digit_sqrt2"][kind];
        let fresh = c.build(c.definition(name).unwrap()).unwrap();
        let (lo, hi) = (n.min(m), n.max(m));
        let long = fresh.prefix(hi).unwrap();
        let short = fresh.prefix(lo).unwrap();
        prop_assert_eq!(&long[..lo], &short[..]);
        let again = c.build(c.definition(name).unwrap()).unwrap();
        prop_assert_eq!(again.prefix(hi).unwrap(), long.clone());
        for (i, &s) in long.iter().enumerate().take(50) {
            prop_assert_eq!(fresh.at(i as u64).unwrap(), s);
            prop_assert!((s as usize) < fresh.alphabet().len());
        }
    }
}
