use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use super::*;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn tribonacci() -> CubicPisotUnit {
    make_pisot_unit(1, 1).unwrap()
}

/// `⌊β^i⌉ ≤ bound` from floating-point powers, refusing near-ties.
fn float_powers(beta: f64, bound: f64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 1.0f64;
    while p <= bound {
        let f = p - p.floor();
        assert!((f - 0.5).abs() > 1e-6);
        out.push(p.round() as i64);
        p *= beta;
    }
    out
}

#[test]
fn shipped_units() {
    let t = tribonacci();
    assert_eq!(*t.discriminant(), big(-44));
    assert!((t.beta().to_f64() - 1.839_286_755_214_161).abs() < 1e-12);
    let u = make_pisot_unit(2, -1).unwrap();
    assert_eq!(*u.discriminant(), big(-23));
    assert!((u.beta().to_f64() - 1.754_877_666_246_693).abs() < 1e-12);
    let v = make_pisot_unit(1, 0).unwrap();
    assert_eq!(*v.discriminant(), big(-31));
    assert!((v.beta().to_f64() - 1.465_571_231_876_768).abs() < 1e-12);
    assert!(t.is_fundamental());
    assert!(v.is_fundamental());
    // β = ρ² with ρ the root of x³ − x − 1
    assert_eq!(u.root_of(), Some((2, 0, 1)));
}

#[test]
fn rejected_polynomials() {
    assert!(matches!(make_pisot_unit(-1, 1), Err(Error::Reducible(_))));
    assert!(matches!(make_pisot_unit(1, 3), Err(Error::Reducible(_))));
    assert!(matches!(make_pisot_unit(0, -1), Err(Error::NotPisot(_))));
    assert!(matches!(make_pisot_unit(-3, 4), Err(Error::NotPisot(_))));
}

#[test]
fn conjugate_data() {
    let t = tribonacci();
    let beta = t.beta();
    // β·αᾱ = 1 and β + (α + ᾱ) = a
    assert!(beta.mul(&t.conjugate_modulus_sq()).unwrap().as_rational().unwrap().is_one());
    assert_eq!(beta.add(&t.conjugate_sum()).unwrap().as_rational(), Some(BigRational::from_integer(big(1))));
}

#[test]
fn trace_sequence_values() {
    let t = tribonacci();
    let want: Vec<BigInt> = [3, 1, 3, 7, 11, 21, 39, 71, 131].iter().map(|&x| big(x)).collect();
    assert_eq!(t.trace_sequence(9), want);
    assert_eq!(
        t.trace_sequence(20),
        t.field().power_traces(3).into_iter().chain(t.trace_sequence(20).into_iter().skip(3)).collect::<Vec<_>>()
    );
    for i in 4..=40 {
        assert_eq!(t.trace_sequence(41)[i as usize], t.round_power(i).unwrap());
    }
}

#[test]
fn ghh_at_power() {
    let t = tribonacci();
    let d = t.solve_ghh(&big(21)).unwrap();
    assert_eq!(d.g, t.beta().pow(5));
    assert_eq!(d.trace_reconstruction(), BigRational::from_integer(big(21)));
    assert!(d.norm().is_one());
    let e = t.solve_ghh(&big(20)).unwrap();
    assert!((0..12).all(|i| e.g != t.beta().pow(i)));
}

#[test]
fn u_matches_closed_form() {
    for (a, b) in [(1i64, 1i64), (2, -1), (1, 0)] {
        let p = make_pisot_unit(a, b).unwrap();
        let (ai, bi) = (big(a), big(b));
        let disc = BigRational::from_integer(discriminant(a, b));
        let c0 = -2 * ai.pow(3) + ai.pow(2) * bi.pow(2) - 10 * &ai * &bi + 4 * bi.pow(3) - 9;
        let c1 = ai.pow(3) * &bi - ai.pow(2) + 4 * &ai * bi.pow(2) + 6 * &bi;
        let c2 = -ai.pow(2) * &bi + 3 * &ai - 4 * bi.pow(2);
        for n in [-50i64, -7, 0, 1, 5, 21, 100, 777, 12345] {
            let d = p.solve_ghh(&big(n)).unwrap();
            let u = BigRational::from_integer(&c0 * n + &c1 * &d.round_beta + &c2 * &d.round_beta2) / &disc;
            assert_eq!(d.coords()[0], u, "(a, b) = ({a}, {b}), n = {n}");
        }
    }
}

#[test]
fn tribonacci_membership() {
    let t = tribonacci();
    for n in [1, 2, 3, 6, 11, 21, 39, 71] {
        assert!(t.contains(n).unwrap(), "n = {n}");
    }
    for n in [0, -1, 4, 20, 40, 70, 72] {
        assert!(!t.contains(n).unwrap(), "n = {n}");
    }
    assert_eq!(t.exception_table()[..8], [1, 2, 3, 6, 11, 21, 39, 71]);
}

#[test]
fn membership_against_float_powers() {
    for (a, b) in [(1i64, 1i64), (2, -1), (1, 0)] {
        let p = make_pisot_unit(a, b).unwrap();
        let want = float_powers(p.beta().to_f64(), 20_000.0);
        let w = p.power_word().prefix(20_001).unwrap();
        let got: Vec<i64> = (0..w.len()).filter(|&i| w[i] == 1).map(|i| i as i64).collect();
        let mut want = want;
        want.dedup();
        assert_eq!(got, want, "(a, b) = ({a}, {b})");
    }
}

#[test]
fn algebraic_test_beyond_table() {
    // the algebraic conditions alone already agree with the table above 100
    let t = tribonacci();
    for n in 100..=EXCEPTION_BOUND {
        assert_eq!(t.algebraic_test(&big(n)).unwrap(), t.exception_table().contains(&n), "n = {n}");
    }
}

#[test]
fn non_fundamental_filter() {
    // without the exponent filter, rounded odd powers of ρ would pass
    let u = make_pisot_unit(2, -1).unwrap();
    let rho = make_pisot_unit(0, 1).unwrap();
    let odd = rho.round_power(31).unwrap();
    assert!(!u.membership_test(&odd).unwrap());
    assert!(rho.membership_test(&odd).unwrap());
    let even = rho.round_power(32).unwrap();
    assert!(u.membership_test(&even).unwrap());
}

#[test]
fn integral_basis_override() {
    let t = tribonacci();
    let one = BigRational::one;
    let z = || BigRational::from_integer(big(0));
    let id = [[one(), z(), z()], [z(), one(), z()], [z(), z(), one()]];
    let t2 = t.clone().with_integral_basis(id).unwrap();
    assert!(t2.contains(71).unwrap());
    let half = BigRational::new(big(1), big(2));
    let bad = [[half, z(), z()], [z(), one(), z()], [z(), z(), one()]];
    assert!(t.clone().with_integral_basis(bad).is_err());
    let coarse = [[BigRational::from_integer(big(2)), z(), z()], [z(), one(), z()], [z(), z(), one()]];
    assert!(t.with_integral_basis(coarse).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_reconstruction_is_n(n in -10_000i64..=10_000) {
        let t = tribonacci();
        let d = t.solve_ghh(&big(n)).unwrap();
        prop_assert_eq!(d.trace_reconstruction(), BigRational::from_integer(big(n)));
        let s = d.conjugate_sum().add(&d.g).unwrap();
        prop_assert_eq!(s.as_rational(), Some(BigRational::from_integer(big(n))));
    }

    #[test]
    fn norm_is_multiplicative(n in 1i64..5000, m in 1i64..5000) {
        let t = tribonacci();
        let (g, h) = (t.solve_ghh(&big(n)).unwrap().g, t.solve_ghh(&big(m)).unwrap().g);
        prop_assert_eq!(g.norm() * h.norm(), g.mul(&h).unwrap().norm());
    }
}
