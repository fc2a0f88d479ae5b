use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use super::*;
use crate::exactreal::{multiquadratic_field, sqrt_const, RealValue};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rv(n: i64, d: i64) -> RealValue {
    RealValue::rational(n, d)
}

fn sqrt_in(field: &[u64], k: u64) -> RealValue {
    RealValue::from(sqrt_const(&multiquadratic_field(field).unwrap(), k).unwrap())
}

fn sqrt3_floor(n: i64) -> i64 {
    // ⌊√3 n⌋ = ⌊√(3n²)⌋
    (3 * n * n).sqrt()
}

#[test]
fn span_examples() {
    let l = span_lattice(2, &[vec![1, -1]]).unwrap();
    assert_eq!(l.rank(), 1);
    assert!(l.contains(&[-7, 7]) && !l.contains(&[1, 1]));
    let m = span_lattice(2, &[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
    assert_eq!(m.basis(), &[vec![1, 1], vec![0, 2]]);
    assert_eq!(m.index(), Some(2));
    assert!(m.contains(&[3, 5]) && !m.contains(&[1, 2]));
    let z = span_lattice(3, &[]).unwrap();
    assert_eq!(z.rank(), 0);
    assert!(z.contains(&[0, 0, 0]) && !z.contains(&[0, 1, 0]));
    assert_eq!(m.points_in_box(2).len(), 5);
}

#[test]
fn relation_examples() {
    let r = enumerate_relations(&[rv(1, 1)], &rv(1, 2), 3).unwrap();
    assert_eq!(r.members, vec![vec![0]]);
    let r = enumerate_relations(&[rv(1, 1), rv(1, 1)], &rv(1, 2), 2).unwrap();
    assert_eq!(r.members, vec![vec![-1, 1], vec![0, 0], vec![1, -1]]);
    let s2 = sqrt_in(&[2], 2);
    let r = enumerate_relations(&[rv(1, 1), s2], &rv(1, 10), 10).unwrap();
    let float: Vec<Vec<i64>> = (-9..10i64)
        .flat_map(|a| (-9..10i64).map(move |b| vec![a, b]))
        .filter(|m| {
            let v = (m[0] as f64 + m[1] as f64 * 2f64.sqrt()).abs();
            assert!((v - 0.1).abs() > 1e-9);
            v < 0.1
        })
        .collect();
    assert_eq!(r.members, float);
    assert!(r.contains(&[0, 0]) && r.members.len() > 1);
}

#[test]
fn lattice_approx_examples() {
    let (l, c) = lattice_approx(&[rv(1, 1), rv(1, 1)], &rv(1, 2), 2).unwrap();
    assert_eq!(l, span_lattice(2, &[vec![1, -1]]).unwrap());
    assert!(c.first_inclusion);
    assert_eq!(c.lattice_points, 3);
    assert_eq!(c.c_hat, 0.0);
    let f = [2, 3];
    let alpha = [rv(1, 1), sqrt_in(&f, 2), sqrt_in(&f, 3)];
    let (l, c) = lattice_approx(&alpha, &rv(1, 1_000_000), 8).unwrap();
    assert_eq!(l.rank(), 0);
    assert_eq!((c.relations, c.lattice_points), (1, 1));
    let (l, c) = lattice_approx(&[rv(1, 1), rv(100_001, 100_000)], &rv(1, 10_000), 4).unwrap();
    assert!(l.contains(&[1, -1]));
    assert!(c.first_inclusion && c.c_hat.is_finite());
}

#[test]
fn lattice_grows_with_eps() {
    let f = [2, 3];
    let alpha = [rv(1, 1), sqrt_in(&f, 2), sqrt_in(&f, 3)];
    let mut prev = IntLattice::zero(3);
    for k in (1..=6).rev() {
        let eps = rv(1, 10i64.pow(k));
        let (l, c) = lattice_approx(&alpha, &eps, 6).unwrap();
        assert!(c.first_inclusion);
        assert!(prev.is_sublattice_of(&l));
        prev = l;
    }
    assert!(prev.rank() > 0);
}

#[test]
fn cut_examples() {
    let collinear = halfspace_cuts(&[vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
    assert_eq!(collinear.cuts, vec![0b000, 0b001, 0b011, 0b100, 0b110, 0b111]);
    assert_eq!(collinear.harding_bound(), 8);
    let one = halfspace_cuts(&[vec![3, 4]]).unwrap();
    assert_eq!((one.len(), one.harding_bound()), (2, 2));
    let square = halfspace_cuts(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
    assert_eq!((square.len(), square.harding_bound()), (14, 14));
    // triangle with an interior point: {interior} and its complement are not cuts
    let tri = halfspace_cuts(&[vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1]]).unwrap();
    assert_eq!(tri.len(), 14);
    assert!(!tri.cuts.contains(&0b1000) && !tri.cuts.contains(&0b0111));
    // a planar set in space has the same cuts as in the plane
    let flat: Vec<Vec<i64>> = [[0, 0], [4, 1], [1, 3], [2, 2], [5, 5]].iter().map(|p| vec![p[0], p[1]]).collect();
    let lifted: Vec<Vec<i64>> = flat.iter().map(|p| vec![p[0], p[1], 7]).collect();
    assert_eq!(halfspace_cuts(&flat).unwrap().cuts, halfspace_cuts(&lifted).unwrap().cuts);
    let line: Vec<Vec<i64>> = (0..9).map(|i| vec![i * i]).collect();
    assert_eq!(halfspace_cuts(&line).unwrap().len(), 18);
}

#[test]
fn half_lattice_pairs_at_desk_scale() {
    for r in 1..=2i64 {
        let pts: Vec<Vec<i64>> = (-r..=r).flat_map(|x| (-r..=r).map(move |y| vec![x, y])).collect();
        let c = half_lattice_pairs(&pts).unwrap();
        assert_eq!(c.m, pts.len());
        assert!(c.ratio <= 10.0, "{c:?}");
        assert!(c.pairs >= c.lattice_sets);
    }
}

#[test]
fn prefix_count_examples() {
    let r = prefix_count_experiment(&[vec![1]], 1, &q(1, 4)).unwrap();
    assert_eq!((r.grid_points, r.distinct), (8, 2));
    // breakpoints of ⌊αn⌋, n < 10, are the fractions k/m with m ≤ 9 in [−1, 1)
    let lin: Vec<i64> = (0..10).collect();
    let farey = prefix_count_experiment(std::slice::from_ref(&lin), 1, &q(1, 2520)).unwrap();
    assert_eq!(farey.distinct, 56);
    let mut last = 0;
    for den in [1, 2, 6, 60, 2520] {
        let c = prefix_count_experiment(std::slice::from_ref(&lin), 1, &q(1, den)).unwrap().distinct;
        assert!(c >= last);
        last = c;
    }
    assert!(prefix_count_experiment(&[lin], 1, &q(3, 4)).is_err());
}

#[test]
fn reconstruction_matches_direct() {
    let h = vec![(0..16).collect::<Vec<i64>>(), (0..16).map(sqrt3_floor).collect()];
    let rep = reconstruction_experiment(&h, 1, 9, 7, &BigRational::from_integer(1.into())).unwrap();
    assert_eq!(rep.matched, rep.samples, "{:?}", rep.failures);
    assert!(rep.cases[1] > 0);
}

#[test]
fn sqrt3_floor_oracle() {
    let s3 = sqrt_in(&[3], 3);
    for n in 0..40 {
        assert_eq!(BigInt::from(sqrt3_floor(n)), s3.mul(&RealValue::from(n)).unwrap().floor().unwrap());
    }
}

fn gcd_minors(v: &[Vec<i64>]) -> i64 {
    let mut g = 0i64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            g = g.gcd(&(v[i][0] * v[j][1] - v[i][1] * v[j][0]));
        }
    }
    g
}

fn general_position(p: &[Vec<i64>]) -> bool {
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            if p[i] == p[j] {
                return false;
            }
            for k in j + 1..n {
                let cross = (p[j][0] - p[i][0]) * (p[k][1] - p[i][1]) - (p[j][1] - p[i][1]) * (p[k][0] - p[i][0]);
                if cross == 0 {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hnf_is_canonical(v in proptest::collection::vec(proptest::collection::vec(-9i64..10, 2), 0..5)) {
        let l = span_lattice(2, &v).unwrap();
        prop_assert_eq!(&span_lattice(2, l.basis()).unwrap(), &l);
        for x in &v {
            prop_assert!(l.contains(x));
        }
        let g = gcd_minors(&v);
        if g != 0 {
            prop_assert_eq!(l.index(), Some(g.unsigned_abs() as u128));
        }
        let pts = l.points_in_box(6);
        let brute: Vec<Vec<i64>> = (-5..6).flat_map(|a| (-5..6).map(move |b| vec![a, b])).filter(|p| l.contains(p)).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        prop_assert_eq!(sorted, brute);
    }

    #[test]
    fn relations_match_brute_force(a in -30i64..30, b in 1i64..12, c in -30i64..30, e in 1i64..40, n in 1i64..7) {
        let alpha = [rv(1, 1), rv(a, b), rv(c, 7)];
        let eps = rv(e, 40);
        let r = enumerate_relations(&alpha, &eps, n).unwrap();
        let al = [q(1, 1), q(a, b), q(c, 7)];
        let mut brute = Vec::new();
        for x in -(n - 1)..n { for y in -(n - 1)..n { for z in -(n - 1)..n {
            let v = &al[0] * q(x, 1) + &al[1] * q(y, 1) + &al[2] * q(z, 1);
            if v.abs() < q(e, 40) { brute.push(vec![x, y, z]); }
        }}}
        prop_assert_eq!(&r.members, &brute);
        for m in &r.members {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            prop_assert!(r.contains(&neg));
        }
        let (l, cert) = lattice_approx(&alpha, &eps, n).unwrap();
        prop_assert!(cert.first_inclusion);
        prop_assert_eq!(cert.lattice_points, l.points_in_box(n).len());
    }

    #[test]
    fn cover_count_in_general_position(p in proptest::collection::vec(proptest::collection::vec(-20i64..21, 2), 1..9)) {
        let cuts = halfspace_cuts(&p).unwrap();
        prop_assert!(cuts.within_bound());
        if general_position(&p) {
            prop_assert_eq!(cuts.len() as u128, harding_bound(p.len(), 2));
        }
        // complements of cuts are cuts
        let all = (1u64 << p.len()) - 1;
        for &c in &cuts.cuts {
            prop_assert!(cuts.cuts.binary_search(&(all ^ c)).is_ok());
        }
    }
}
