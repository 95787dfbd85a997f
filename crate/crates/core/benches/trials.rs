use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symcut_core::exec::Execution;
use symcut_core::matnum::{self, AlgebraTag, Tolerances};

fn suites(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::new("lagrangian_n4", label), &exec, |b, &exec| {
            b.iter(|| matnum::verify_lagrangian_fibers(4, 100, 1, &tol, exec))
        });
        group.bench_with_input(BenchmarkId::new("round_trip_n3", label), &exec, |b, &exec| {
            b.iter(|| matnum::verify_round_trips(3, 200, 1, &tol, exec))
        });
        group.bench_with_input(BenchmarkId::new("fiber_orbit_su2", label), &exec, |b, &exec| {
            b.iter(|| matnum::verify_fiber_is_orbit(AlgebraTag::SpecialUnitary, 100, 1, &tol, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
