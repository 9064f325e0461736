use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gwlkit::batch::run_pairs_sequential;
use gwlkit::engines::TestKind;
use gwlkit::random::{self, connected_radial_graph, perturbed_copy};
use gwlkit::{GeometricGraph, GroupSpec, NumericMode};

fn pairs(count: usize, n: usize) -> Vec<(GeometricGraph, GeometricGraph)> {
    let mut rng = random::rng(1);
    (0..count)
        .map(|_| {
            let g = connected_radial_graph(&mut rng, n, 3, NumericMode::Exact, 2).unwrap();
            let h = perturbed_copy(&mut rng, &g, 2).unwrap();
            (g, h)
        })
        .collect()
}

fn batch(c: &mut Criterion) {
    let group = GroupSpec::orthogonal(3);
    let mut bench = c.benchmark_group("gwl_batch");
    bench.sample_size(10);
    for n in [6, 10] {
        let input = pairs(64, n);
        bench.bench_with_input(BenchmarkId::new("sequential", n), &input, |b, input| {
            b.iter(|| run_pairs_sequential(input, TestKind::Gwl, group, None))
        });
        #[cfg(feature = "parallel")]
        bench.bench_with_input(BenchmarkId::new("parallel", n), &input, |b, input| {
            b.iter(|| gwlkit::batch::run_pairs(input, TestKind::Gwl, group, None))
        });
    }
    bench.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
