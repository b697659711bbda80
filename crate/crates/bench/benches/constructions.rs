use aag_core::growth::growth_table;
use aag_core::lattice::{cover_unit_simplex, lattice_cover};
use aag_core::verify::{exact_kappa, verify_composition_level, verify_finite};
use aag_core::witness::{witness_finite, witness_semilinear_free};
use aag_core::{ElementSet, GroupElement, GroupSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn plane_set() -> (GroupSpec, Vec<GroupElement>) {
    let g = GroupSpec::free_abelian(2);
    let a = vec![
        GroupElement::free(vec![0, 0]),
        GroupElement::free(vec![3, 1]),
        GroupElement::free(vec![-1, 4]),
    ];
    (g, a)
}

fn covers(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice_cover");
    for k in 1..=3usize {
        group.bench_with_input(BenchmarkId::new("k", k), &k, |b, &k| {
            b.iter(|| lattice_cover(black_box(k), 2, 2 * k as u64 + 5).unwrap())
        });
    }
    group.finish();
    c.bench_function("cover_unit_simplex k=3 r=3", |b| {
        b.iter(|| cover_unit_simplex(black_box(3), 3).unwrap())
    });
}

fn witnesses(c: &mut Criterion) {
    let (g, a) = plane_set();
    c.bench_function("witness_finite k=3 r=2 h=9", |b| {
        b.iter(|| witness_finite(&g, black_box(&a), 2, 9).unwrap())
    });
    let w = witness_finite(&g, &a, 2, 9).unwrap();
    c.bench_function("verify_finite k=3 r=2 h=9", |b| {
        b.iter(|| verify_finite(&g, black_box(&a), &w).unwrap())
    });
    let vs = witness_semilinear_free(3, &[1, 1, 1], 3, 11).unwrap();
    c.bench_function("composition level k=3 r=3 h=11", |b| {
        b.iter(|| verify_composition_level(3, 3, 11, black_box(&vs)).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let g = GroupSpec::integers();
    let a: ElementSet = [0, 1, 3].into_iter().map(|x| GroupElement::free(vec![x])).collect();
    let big = g.iterated_sumset(&a, 10).unwrap();
    let small = g.iterated_sumset(&a, 5).unwrap();
    c.bench_function("exact_kappa |S1|=31", |b| {
        b.iter(|| exact_kappa(&g, black_box(&big), &small, 40).unwrap())
    });
    let (g2, a2) = plane_set();
    c.bench_function("growth_table H=64", |b| {
        b.iter(|| growth_table(&g2, black_box(&a2), 64).unwrap())
    });
}

criterion_group!(benches, covers, witnesses, oracles);
criterion_main!(benches);
