use std::hint::black_box;

use amen_core::exec::Execution;
use amen_core::groups::{
    ball, family_generate, generator_words, Family, FamilyMember, FreeGroup, GroupAction, Lattice,
    Point,
};
use amen_core::linalg::{LabeledSubspace, PrimeField, Rationals};
use amen_core::matroid::SubspaceMatroid;
use amen_core::profile::iso_set_exact;
use amen_core::steiner::{estimate_steiner_with, SteinerConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn steiner(c: &mut Criterion) {
    let mut group = c.benchmark_group("steiner");
    group.sample_size(10);
    let g2 = PrimeField::new(2).unwrap();
    let FamilyMember::Span(span) = family_generate(Family::LampSpan, 4, &g2).unwrap() else {
        unreachable!()
    };
    let lamp = SubspaceMatroid::new(span);
    let labels: Vec<Point> = (1..=8).map(Point::Int).collect();
    let rows = (0..4)
        .map(|i| (0..8).map(|j| rational_entry(i, j)).collect())
        .collect();
    let dense = SubspaceMatroid::new(LabeledSubspace::from_rows(Rationals, labels, rows).unwrap());
    for (name, exec) in MODES {
        let cfg = SteinerConfig::new(20_000, 1)
            .without_vertices()
            .with_execution(exec);
        group.bench_with_input(BenchmarkId::new("lamp-span-4", name), &cfg, |b, cfg| {
            b.iter(|| estimate_steiner_with(black_box(&lamp), cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("q-8x4", name), &cfg, |b, cfg| {
            b.iter(|| estimate_steiner_with(black_box(&dense), cfg).unwrap())
        });
    }
    group.finish();
}

fn rational_entry(i: i64, j: i64) -> amen_core::rational::Rational {
    amen_core::rational::from_int((i * 3 + j * j) % 5 - 2)
}

fn profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("iso_set_exact");
    group.sample_size(10);
    let f2 = FreeGroup::new(2).unwrap();
    let free_window = ball(&f2, &f2.base_point(), 2, 64).unwrap();
    let z = Lattice::integers();
    let z_window: Vec<Point> = (-10..=10).map(Point::Int).collect();
    let cases: [(&str, &dyn GroupAction, &[Point], usize); 2] = [
        ("free2-ball2", &f2, &free_window, 6),
        ("z-21", &z, &z_window, 12),
    ];
    for (case, action, window, v_max) in cases {
        let s = generator_words(action);
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(case, name), |b| {
                b.iter(|| iso_set_exact(action, black_box(window), &s, v_max, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, steiner, profile);
criterion_main!(benches);
