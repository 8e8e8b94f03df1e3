//! Sequential vs parallel sweep throughput.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spinres_core::model::PhysParams;
use spinres_core::sweep::{
    run_sweep_with_workers, Axis, Conventions, Observable, SweepParam, SweepSpec,
};

fn probe_sweep_spec(points: usize) -> (SweepSpec, PhysParams) {
    let p = PhysParams::default_profile();
    let spec = SweepSpec {
        axes: vec![Axis {
            param: SweepParam::DeltaP,
            min: 0.98 * p.omega_m,
            max: 1.02 * p.omega_m,
            count: points,
        }],
        observables: vec![Observable::Eta1, Observable::Eta2, Observable::Steady],
        probe_detuning: None,
        conventions: Conventions::figure(),
    };
    (spec, p)
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("probe_sweep");
    for points in [501usize, 2001] {
        let (spec, p) = probe_sweep_spec(points);
        group.bench_with_input(BenchmarkId::new("sequential", points), &points, |b, _| {
            b.iter(|| run_sweep_with_workers(&spec, &p, Some(1)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", points), &points, |b, _| {
            b.iter(|| run_sweep_with_workers(&spec, &p, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
