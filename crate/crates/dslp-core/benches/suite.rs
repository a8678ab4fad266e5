use criterion::{criterion_group, criterion_main, Criterion};
use dslp_core::ineq::{run_suite, run_suite_seq, TheoremId};

fn suite_benches(c: &mut Criterion) {
    let ids = [
        TheoremId::T3_1_I,
        TheoremId::T3_8_I,
        TheoremId::T3_12_I,
        TheoremId::L4_2,
    ];
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| run_suite(&ids, 40, 7, 1e-8));
    });
    group.bench_function("sequential", |b| {
        b.iter(|| run_suite_seq(&ids, 40, 7, 1e-8));
    });
    group.finish();
}

criterion_group!(benches, suite_benches);
criterion_main!(benches);
