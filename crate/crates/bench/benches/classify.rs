use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dihedral_core::classifier::{classify, classify_via_strata, MonodromyClass};
use dihedral_core::surfaces::{enumerate_surfaces, search_witness, EnumerationBounds, SearchBounds};
use dihedral_core::{AngleDistribution, Rational};

fn dist(genus: u32, turns: &[(i128, i128)]) -> AngleDistribution {
    let turns: Vec<Rational> = turns.iter().map(|&(n, d)| Rational::new(n, d)).collect();
    AngleDistribution::from_turns(genus, &turns).unwrap()
}

fn classifier(c: &mut Criterion) {
    let sphere = dist(0, &[(3, 2), (3, 2), (3, 2), (3, 4), (3, 4)]);
    let torus = dist(1, &[(5, 2), (3, 2), (1, 3)]);
    c.bench_function("classify/sphere-strict", |b| {
        b.iter(|| classify(black_box(&sphere), MonodromyClass::StrictDihedral))
    });
    c.bench_function("classify/torus-any", |b| {
        b.iter(|| classify(black_box(&torus), MonodromyClass::DihedralAny))
    });
    c.bench_function("reduction/sphere-strict", |b| {
        b.iter(|| classify_via_strata(black_box(&sphere), MonodromyClass::StrictDihedral))
    });
}

fn surfaces(c: &mut Criterion) {
    let basic = dist(0, &[(1, 2), (1, 2), (3, 4)]);
    let bounds = SearchBounds::default();
    c.bench_function("search/basic", |b| {
        b.iter(|| search_witness(black_box(&basic), MonodromyClass::StrictDihedral, &bounds).unwrap())
    });
    let hopeless = dist(0, &[(3, 2), (3, 2), (3, 2), (3, 4), (3, 4)]);
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("exhaust", |b| {
        b.iter(|| search_witness(black_box(&hopeless), MonodromyClass::StrictDihedral, &bounds).unwrap())
    });
    group.finish();

    let census = EnumerationBounds {
        max_segments: 4,
        lengths: vec![Rational::from_integer(1), Rational::from_integer(2)],
        circumferences: None,
    };
    c.bench_function("enumerate/4-segments", |b| {
        b.iter(|| enumerate_surfaces(black_box(&census)).unwrap())
    });
}

criterion_group!(benches, classifier, surfaces);
criterion_main!(benches);
