use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use strata_core::{enumerate_bicolored, enumerate_stable_graphs, exec, rt, Anchor, DegreeRule};

fn modes() -> [(&'static str, bool); 2] {
    [("sequential", false), ("parallel", true)]
}

fn stable_graphs(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_stable_graphs");
    group.sample_size(10);
    for (name, on) in modes() {
        group.bench_function(BenchmarkId::new(name, "g2n3"), |b| {
            exec::set_parallel(on);
            b.iter(|| enumerate_stable_graphs(2, 3, 2).unwrap().len())
        });
    }
    group.finish();
}

fn bicolored(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_bicolored");
    group.sample_size(10);
    for (name, on) in modes() {
        group.bench_function(BenchmarkId::new(name, "g3z211"), |b| {
            exec::set_parallel(on);
            b.iter(|| enumerate_bicolored(3, &[2, 1, 1], Anchor::Down(1), DegreeRule::Hodge).unwrap().len())
        });
    }
    group.finish();
}

fn alpha(c: &mut Criterion) {
    let mut group = c.benchmark_group("alpha_rt");
    group.sample_size(10);
    for (name, on) in modes() {
        group.bench_function(BenchmarkId::new(name, "g3z1222"), |b| {
            exec::set_parallel(on);
            b.iter(|| rt::alpha_rt(3, &[1, 2, 2, 2]).unwrap().xi_degree())
        });
    }
    group.finish();
}

criterion_group!(benches, stable_graphs, bicolored, alpha);
criterion_main!(benches);
