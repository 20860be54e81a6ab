use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use singord::cohomology::generic_orders_with;
use singord::par::Exec;
use singord::schemes::{build_scheme, Position, SampleMode, SchemeKind, ZeroDimScheme};
use singord::MultiPoly;

fn scenarios() -> Vec<(&'static str, ZeroDimScheme)> {
    let f = |s: &str| MultiPoly::parse(s).unwrap();
    let fat = build_scheme(None, &SchemeKind::Fat(4), Position::Generic).unwrap();
    vec![
        ("two-fat-4", fat.union(&fat).unwrap()),
        ("s-e7", build_scheme(Some(&f("x^3 + x*y^3")), &SchemeKind::S, Position::Generic).unwrap()),
        ("a-x4y5", build_scheme(Some(&f("x^4 + y^5")), &SchemeKind::A, Position::Generic).unwrap()),
    ]
}

fn trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("generic_orders_T8");
    g.sample_size(10);
    for (name, z) in scenarios() {
        for (label, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
            g.bench_with_input(BenchmarkId::new(label, name), &z, |b, z| {
                b.iter(|| generic_orders_with(exec, z, SampleMode::Iso, 8, 0).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
