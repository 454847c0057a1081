use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fsb_core::{
    arc_genus, aut_group, build_complex, random_unimodular, reduce_to_standard, reduced_homology,
    smith_normal_form, ComplexKind, FormedSpace, RingSpec,
};

fn bench_snf(c: &mut Criterion) {
    let a = random_unimodular(12, RingSpec::Z, 7, 60);
    c.bench_function("snf_12x12_unimodular", |bch| {
        bch.iter(|| smith_normal_form(black_box(&a)))
    });
}

fn bench_classify(c: &mut Criterion) {
    let a = fsb_core::random_formed_space(RingSpec::Z, 8, 11);
    c.bench_function("reduce_to_standard_rank_8", |bch| {
        bch.iter(|| reduce_to_standard(black_box(&a)).unwrap())
    });
}

fn bench_arc_genus(c: &mut Criterion) {
    let a = FormedSpace::x_power(RingSpec::Z, 8);
    c.bench_function("arc_genus_x8", |bch| {
        bch.iter(|| arc_genus(black_box(&a)).unwrap())
    });
}

fn bench_complex_build(c: &mut Criterion) {
    let a = FormedSpace::x_power(RingSpec::zmod(2), 6);
    c.bench_function("build_destabilization_complex_x6_dim2", |bch| {
        bch.iter(|| build_complex(black_box(&a), ComplexKind::D, 2).unwrap())
    });
}

fn bench_homology(c: &mut Criterion) {
    let a = FormedSpace::x_power(RingSpec::zmod(2), 6);
    let cx = build_complex(&a, ComplexKind::D, 2).unwrap();
    c.bench_function("reduced_homology_x6_through_degree_1", |bch| {
        bch.iter(|| reduced_homology(black_box(&cx), 1).unwrap())
    });
}

fn bench_aut(c: &mut Criterion) {
    let a = FormedSpace::x_power(RingSpec::zmod(2), 5);
    c.bench_function("aut_group_x5_enumerated", |bch| {
        bch.iter(|| aut_group(black_box(&a), 1_000).unwrap())
    });
}

criterion_group!(
    benches,
    bench_snf,
    bench_classify,
    bench_arc_genus,
    bench_complex_build,
    bench_homology,
    bench_aut
);
criterion_main!(benches);
