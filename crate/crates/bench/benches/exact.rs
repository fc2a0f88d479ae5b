use bracketwords::exactreal::{multiquadratic_field, sqrt_const, RealValue};
use bracketwords::gpexpr::{infer_field, parse_expr, ParseContext};
use bracketwords::pisot::make_pisot_unit;
use bracketwords::sclab::{halfspace_cuts, lattice_approx};
use bracketwords_bench::square_grid;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

fn floor_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval");
    for src in ["floor(phi*n)", "floor(sqrt(2)*n*floor(sqrt(3)*n))", "floor(10*frac(sqrt(2)*n^2))"] {
        let ctx = ParseContext { field: infer_field(src).unwrap(), ..ParseContext::default() };
        let e = parse_expr(src, &ctx).unwrap();
        for n in [10i64, 1_000_000, 1_000_000_000_000] {
            group.bench_with_input(BenchmarkId::new(src, n), &n, |b, &n| b.iter(|| e.eval_i64(n).unwrap()));
        }
    }
    group.finish();
}

fn pisot(c: &mut Criterion) {
    let mut group = c.benchmark_group("pisot");
    let u = make_pisot_unit(1, 1).unwrap();
    let member = u.round_power(59).unwrap();
    let other = &member + BigInt::from(1);
    group.bench_function("member_i59", |b| b.iter(|| u.membership_test(&member).unwrap()));
    group.bench_function("non_member_i59", |b| b.iter(|| u.membership_test(&other).unwrap()));
    group.bench_function("unit_1_1", |b| b.iter(|| make_pisot_unit(1, 1).unwrap()));
    group.finish();
}

fn lattice(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice");
    group.sample_size(10);
    let field = multiquadratic_field(&[2, 3]).unwrap();
    let alpha = [RealValue::from(1), RealValue::from(sqrt_const(&field, 2).unwrap()), RealValue::from(sqrt_const(&field, 3).unwrap())];
    let eps = RealValue::rational(1, 1000);
    for n in [8i64, 16] {
        group
            .bench_with_input(BenchmarkId::new("approx_1_sqrt2_sqrt3", n), &n, |b, &n| b.iter(|| lattice_approx(&alpha, &eps, n).unwrap()));
    }
    for r in [1i64, 2] {
        let pts = square_grid(r);
        group.bench_with_input(BenchmarkId::new("cuts_square_grid", pts.len()), &pts, |b, pts| b.iter(|| halfspace_cuts(pts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, floor_eval, pisot, lattice);
criterion_main!(benches);
