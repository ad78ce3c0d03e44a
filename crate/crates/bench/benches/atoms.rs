use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zerosum_bench::{diagonal_inputs, glued_inputs};
use zerosum_core::bounds::dominance_scan;
use zerosum_core::{build_poset, enumerate_atoms, is_minimal_fast, is_minimal_oracle};

fn minimality(c: &mut Criterion) {
    let atoms = diagonal_inputs(9);
    let glued = glued_inputs(9);
    let mut group = c.benchmark_group("minimality");
    group.bench_function("fast/atoms", |b| {
        b.iter(|| {
            atoms
                .iter()
                .filter(|s| is_minimal_fast(black_box(s)).unwrap().is_minimal)
                .count()
        })
    });
    group.bench_function("fast/glued", |b| {
        b.iter(|| {
            glued
                .iter()
                .filter(|s| is_minimal_fast(black_box(s)).unwrap().is_minimal)
                .count()
        })
    });
    let short: Vec<_> = atoms.iter().filter(|s| s.len() <= 14).cloned().collect();
    group.bench_function("oracle/atoms", |b| {
        b.iter(|| {
            short
                .iter()
                .filter(|s| is_minimal_oracle(black_box(s)).unwrap().is_minimal)
                .count()
        })
    });
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_atoms");
    group.sample_size(10);
    for n in [4u32, 5, 6, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_atoms(n).unwrap().len())
        });
    }
    group.finish();
}

fn poset(c: &mut Criterion) {
    let atoms = enumerate_atoms(6).unwrap();
    c.bench_function("build_poset/6", |b| {
        b.iter(|| build_poset(black_box(&atoms)).unwrap().edges.len())
    });
    c.bench_function("dominance_scan/6", |b| {
        b.iter(|| dominance_scan(black_box(&atoms)).unwrap().atoms_checked)
    });
}

criterion_group!(benches, minimality, enumeration, poset);
criterion_main!(benches);
