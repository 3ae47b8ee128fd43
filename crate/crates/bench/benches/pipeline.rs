use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use skelcollar_core::bundles::{collar_line_iso, h0_twist, BundleTransition};
use skelcollar_core::duality::{duality_report, SquareOptions};
use skelcollar_core::skeleton::skeleton;
use skelcollar_core::exact::rat;
use skelcollar_core::LaurentPoly;

fn skeleton_bench(c: &mut Criterion) {
    c.bench_function("skeleton n=6", |b| b.iter(|| skeleton(black_box(6)).unwrap()));
}

fn h0_bench(c: &mut Criterion) {
    let p = LaurentPoly::monomial(rat(1), &[("z", 2), ("u", 1)]) + LaurentPoly::monomial(rat(1), &[("z", -1)]);
    let m = BundleTransition::canonical(2, 4, p).restrict_to_line().unwrap();
    c.bench_function("h0 twist j=4 m=-2..2", |b| {
        b.iter(|| (-2..=2).map(|t| h0_twist(black_box(&m), t).unwrap()).sum::<usize>())
    });
    c.bench_function("collar iso n=4 (3, 11)", |b| b.iter(|| collar_line_iso(4, black_box(3), 11, None).unwrap()));
}

fn duality_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("duality");
    g.sample_size(10);
    for n in [4u32, 8] {
        g.bench_function(format!("report n={n}"), |b| {
            b.iter(|| duality_report(black_box(n), &SquareOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, skeleton_bench, h0_bench, duality_bench);
criterion_main!(benches);
