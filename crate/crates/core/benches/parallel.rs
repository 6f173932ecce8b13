use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tautjac::lie::{verify_bracket, BracketKind};
use tautjac::{Exec, FourierMap, LieContext, RelationIdeal};

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn bracket_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("bracket_sweep_xx");
    group.sample_size(10);
    let ctx = LieContext::new(5, 8).unwrap();
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::new(name, "g5_w8_k4"), |b| {
            b.iter(|| verify_bracket(BracketKind::XX, 4, &ctx, exec))
        });
    }
    group.finish();
}

fn ideal_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("ideal_build");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::new(name, "g7_cap10"), |b| {
            b.iter(|| RelationIdeal::build_with(7, 10, exec).unwrap())
        });
    }
    group.finish();
}

fn fourier_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier_conjugation");
    group.sample_size(10);
    let map = FourierMap::new(RelationIdeal::build(4, 7).unwrap());
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::new(name, "g4_order3"), |b| {
            b.iter(|| map.verify_conjugation_all(3, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bracket_sweep, ideal_build, fourier_check);
criterion_main!(benches);
