use criterion::{black_box, criterion_group, criterion_main, Criterion};
use taxiseed_core::{arith, oracle, scan, witness};

fn bench_arith(c: &mut Criterion) {
    c.bench_function("seed_quantities m=1000", |b| {
        b.iter(|| arith::seed_quantities(black_box(1000)))
    });
    c.bench_function("seed_three_ways m=5000", |b| {
        b.iter(|| arith::seed_three_ways(black_box(5000)))
    });
}

fn bench_oracle(c: &mut Criterion) {
    c.bench_function("count_representations 1729 as 2 cubes", |b| {
        b.iter(|| oracle::count_representations(black_box(1729), 2, 3, u64::MAX).unwrap())
    });
    c.bench_function("taxicab T(9,3,2)", |b| {
        b.iter(|| oracle::taxicab(9, 3, 2, 200, oracle::RepsPolicy::FirstT).unwrap())
    });
    c.bench_function("drops m=3 t=2", |b| {
        b.iter(|| oracle::drops(3, 2, 12, 2000, 3).unwrap())
    });
}

fn bench_witness(c: &mut Criterion) {
    c.bench_function("lemma21 m=5 t=4", |b| {
        b.iter(|| witness::lemma21_construction(black_box(5), black_box(4)).unwrap())
    });
    c.bench_function("thm51 m=64 t=5", |b| {
        b.iter(|| witness::thm51_construction(black_box(64), black_box(5)).unwrap())
    });
}

fn bench_scan(c: &mut Criterion) {
    c.bench_function("scan 1..=256 single worker", |b| {
        b.iter(|| {
            scan::scan_range(&scan::ScanConfig::new(1, 256, 1))
                .map(|r| r.unwrap().m)
                .last()
        })
    });
}

criterion_group!(benches, bench_arith, bench_oracle, bench_witness, bench_scan);
criterion_main!(benches);
