use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qtree_bench::random_bits;
use qtree_core::{bk_standard, ladder_binary_xy, GeneratorSet, QubitTree};
use std::hint::black_box;

fn generators(c: &mut Criterion) {
    let mut group = c.benchmark_group("generators");
    for levels in [4u32, 7, 10] {
        let tree = QubitTree::cf_binary(levels).unwrap();
        group.bench_with_input(
            BenchmarkId::new("from_tree", tree.node_count()),
            &tree,
            |b, t| b.iter(|| GeneratorSet::from_tree(black_box(t))),
        );
    }
    let gs = GeneratorSet::from_tree(&QubitTree::cf_binary(7).unwrap());
    group.bench_function("validate/127", |b| b.iter(|| black_box(&gs).validate()));
    group.finish();
}

fn bravyi_kitaev(c: &mut Criterion) {
    let mut group = c.benchmark_group("bk_standard");
    for m in [8usize, 64, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| bk_standard(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn occupation(c: &mut Criterion) {
    let mut group = c.benchmark_group("occupation_round_trip");
    let binary = ladder_binary_xy(&QubitTree::cf_binary(10).unwrap()).unwrap();
    let bk = bk_standard(1024).unwrap();
    for (name, occ) in [
        ("cf-binary:10", binary.occupation()),
        ("bk:1024", bk.encoding().occupation()),
    ] {
        let inputs = random_bits(occ.len(), 64, 3);
        group.bench_function(name, |b| {
            b.iter(|| {
                for n in &inputs {
                    black_box(occ.inverse(&occ.forward(n).unwrap()).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, generators, bravyi_kitaev, occupation);
criterion_main!(benches);
