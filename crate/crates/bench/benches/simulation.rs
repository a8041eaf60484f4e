//! Throughput of statevector simulation, oracle audits, and measurement.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use qclique_bench::{complete, ring, two_triangles};
use qclique_core::{build_grover, build_oracle, measure_inputs, phase_flip_set, run};

fn grover_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_grover");
    group.sample_size(20);
    let cases = [
        ("two_triangles_k3_11q", build_grover(&two_triangles(), 3, None).unwrap()),
        ("complete5_k3_14q", build_grover(&complete(5), 3, None).unwrap()),
        ("ring8_k3_14q", build_grover(&ring(8), 3, None).unwrap()),
    ];
    for (name, circuit) in &cases {
        group.bench_function(*name, |b| b.iter(|| run(black_box(circuit)).unwrap()));
    }
    group.finish();
}

fn oracle_audit(c: &mut Criterion) {
    let mut group = c.benchmark_group("phase_flip_set");
    group.sample_size(20);
    let cases = [
        ("two_triangles_k3", build_oracle(&two_triangles(), 3).unwrap()),
        ("complete5_k3", build_oracle(&complete(5), 3).unwrap()),
    ];
    for (name, oracle) in &cases {
        group.bench_function(*name, |b| b.iter(|| phase_flip_set(black_box(oracle)).unwrap()));
    }
    group.finish();
}

fn measurement(c: &mut Criterion) {
    let state = run(&build_grover(&two_triangles(), 3, None).unwrap()).unwrap();
    c.bench_function("measure_inputs/two_triangles_1024_shots", |b| {
        b.iter(|| measure_inputs(black_box(&state), Some(1024), 7))
    });
}

criterion_group!(benches, grover_run, oracle_audit, measurement);
criterion_main!(benches);
