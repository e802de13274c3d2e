use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use qca_bench::{packet, params, LENGTHS};
use qca_core::{
    evolve_momentum, evolve_position, montecarlo_survey, step, transform, BoundVariant,
    DiscriminationInput,
};

fn bench_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("step");
    for &len in LENGTHS {
        let st = packet(len);
        g.throughput(Throughput::Elements(len as u64));
        g.bench_with_input(BenchmarkId::from_parameter(len), &st.field, |b, f| {
            b.iter(|| step(black_box(f), params()))
        });
    }
    g.finish();
}

fn bench_backends(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolve_t100");
    for &len in LENGTHS {
        let st = packet(len);
        g.bench_with_input(BenchmarkId::new("position", len), &st.field, |b, f| {
            b.iter(|| evolve_position(black_box(f), params(), 100))
        });
        g.bench_with_input(BenchmarkId::new("momentum", len), &st.spectrum, |b, s| {
            b.iter(|| evolve_momentum(black_box(s), params(), 100.0).unwrap())
        });
    }
    g.finish();
}

fn bench_transform(c: &mut Criterion) {
    let mut g = c.benchmark_group("transform");
    for &len in LENGTHS {
        let st = packet(len);
        g.bench_with_input(BenchmarkId::new("forward", len), &st.field, |b, f| {
            b.iter(|| transform(black_box(f)))
        });
        g.bench_with_input(BenchmarkId::new("inverse", len), &st.spectrum, |b, s| {
            b.iter(|| black_box(s).inverse())
        });
    }
    g.finish();
}

fn bench_montecarlo(c: &mut Criterion) {
    let input = DiscriminationInput::new(0.3, 0.8, 2, 30.0).unwrap();
    c.bench_function("montecarlo_10k", |b| {
        b.iter(|| {
            montecarlo_survey(black_box(&input), BoundVariant::SingleBeta, 10_000, 42, 4).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_step,
    bench_backends,
    bench_transform,
    bench_montecarlo
);
criterion_main!(benches);
