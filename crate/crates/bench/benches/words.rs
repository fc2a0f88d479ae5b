use bracketwords::analysis::{complexity_of, subword_complexity};
use bracketwords_bench::catalog_word;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn prefixes(c: &mut Criterion) {
    let mut group = c.benchmark_group("prefix");
    for name in ["fib_sturmian", "golden_square", "power_digit_sqrt2", "heisenberg_23"] {
        for len in [1_000usize, 10_000] {
            group.throughput(Throughput::Elements(len as u64));
            group.bench_with_input(BenchmarkId::new(name, len), &len, |b, &len| {
                // fresh word each time so the prefix cache does not hide the work
                b.iter(|| catalog_word(name).prefix(len).unwrap());
            });
        }
    }
    group.finish();
}

fn complexity(c: &mut Criterion) {
    let mut group = c.benchmark_group("complexity");
    group.sample_size(10);
    let ns: Vec<usize> = (1..=50).collect();
    for len in [10_000usize, 100_000] {
        let s = catalog_word("sturmian_product").prefix(len).unwrap();
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(BenchmarkId::new("sturmian_product", len), &s, |b, s| b.iter(|| complexity_of(s, &ns)));
    }
    let w = catalog_word("fib_sturmian");
    group.bench_function("fib_sturmian/cached_100000", |b| b.iter(|| subword_complexity(&w, &ns, 100_000).unwrap()));
    group.finish();
}

criterion_group!(benches, prefixes, complexity);
criterion_main!(benches);
