use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ordplanes::circles::{ordinary_circles_via_lift, PlanarPointSet};
use ordplanes::generators::{random_planar, ExtremalKind};
use ordplanes::structure::{classify_extremal, recover_pencil, RecoverOptions};
use ordplanes_bench::extremal;

fn structure(c: &mut Criterion) {
    let mut g = c.benchmark_group("structure");
    g.sample_size(10);
    for m in [6, 10] {
        let s = extremal(ExtremalKind::AntiPrism, m);
        g.bench_with_input(BenchmarkId::new("classify", 2 * m), &s, |b, s| {
            b.iter(|| classify_extremal(s).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("recover", 2 * m), &s, |b, s| {
            b.iter(|| recover_pencil(s, RecoverOptions::default()).unwrap())
        });
    }
    let planar = PlanarPointSet::new(random_planar(12, 1, 6).unwrap()).unwrap();
    g.bench_function("lift/12", |b| b.iter(|| ordinary_circles_via_lift(&planar, 1).unwrap()));
    g.finish();
}

criterion_group!(benches, structure);
criterion_main!(benches);
