use std::hint::black_box;
use std::sync::Arc;

use contactkit::algebra::{reduced_poly, truncated_poly};
use contactkit::bracket::{contact_k_bracket, is_contact, CheckBudget};
use contactkit::exactlin::{rref, Field, Matrix};
use contactkit::spaces::{der, kminus};
use contactkit::tensorext::{mz_counterexample, theorem2_experiment, CartanKind};
use criterion::{criterion_group, criterion_main, Criterion};

fn dense_rref(c: &mut Criterion) {
    for (name, f) in [("rref 40x40 Q", Field::Rationals), ("rref 40x40 F_101", Field::prime(101).unwrap())] {
        // deterministic, full-rank-ish integer pattern
        let rows: Vec<Vec<i64>> = (0..40)
            .map(|i| (0..40).map(|j| ((i * 7 + j * 13 + i * j) % 11) as i64 - 5).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = Matrix::from_i64(f, &refs);
        c.bench_function(name, |b| b.iter(|| rref(black_box(&m))));
    }
}

fn spaces(c: &mut Criterion) {
    let o2 = Arc::new(reduced_poly(3, 2).unwrap());
    c.bench_function("kminus O2 p=3", |b| b.iter(|| kminus(black_box(&o2)).unwrap().dim()));
    let a = Arc::new(truncated_poly(Field::Rationals, &[3, 2]).unwrap());
    c.bench_function("der K[x,y]/(x3,y2)", |b| b.iter(|| der(black_box(&a)).unwrap().dim()));
}

fn checks(c: &mut Criterion) {
    let o3 = Arc::new(reduced_poly(3, 3).unwrap());
    let k = contact_k_bracket(&o3).unwrap();
    let budget = CheckBudget::default();
    c.bench_function("is_contact K3 exhaustive", |b| b.iter(|| is_contact(black_box(&k), &budget).violations));
}

fn pipelines(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipelines");
    g.sample_size(10);
    g.bench_function("mz counterexample", |b| b.iter(|| mz_counterexample(Field::Rationals).unwrap().reproduced()));
    let budget = CheckBudget {
        samples: 10_000,
        ..CheckBudget::default()
    };
    g.bench_function("theorem2 W1,K3 (1e4 samples)", |b| {
        b.iter(|| theorem2_experiment(3, CartanKind::W1, CartanKind::K3, &budget).unwrap().reproduced())
    });
    g.finish();
}

criterion_group!(benches, dense_rref, spaces, checks, pipelines);
criterion_main!(benches);
