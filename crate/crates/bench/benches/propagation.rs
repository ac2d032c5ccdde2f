use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qtree_bench::{matching_step, random_bits};
use qtree_core::spin::{basis_covariance, basis_expectations};
use qtree_core::{
    adjoint_rotation, propagate_covariance, propagate_expectations, GeneratorSet, QubitTree,
};
use std::hint::black_box;

fn rotation(c: &mut Criterion) {
    let mut group = c.benchmark_group("adjoint_rotation");
    group.sample_size(20);
    for levels in [6u32, 8, 10] {
        let tree = QubitTree::cf_binary(levels).unwrap();
        let gs = GeneratorSet::from_tree(&tree);
        let h = matching_step(&gs, 32, levels as u64);
        group.bench_with_input(BenchmarkId::from_parameter(gs.len()), &h, |b, h| {
            b.iter(|| adjoint_rotation(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn propagation(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagate_step");
    group.sample_size(10);
    for levels in [6u32, 8, 10] {
        let tree = QubitTree::cf_binary(levels).unwrap();
        let gs = GeneratorSet::from_tree(&tree);
        let bits = &random_bits(tree.node_count(), 1, 7)[0];
        let v = basis_expectations(&gs, bits).unwrap();
        let m = basis_covariance(&gs, bits).unwrap();
        let r = adjoint_rotation(&matching_step(&gs, 32, 11)).unwrap();
        group.bench_with_input(BenchmarkId::new("expectations", gs.len()), &v, |b, v| {
            b.iter(|| propagate_expectations(&r, black_box(v)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("covariance", gs.len()), &m, |b, m| {
            b.iter(|| propagate_covariance(&r, black_box(m)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, rotation, propagation);
criterion_main!(benches);
