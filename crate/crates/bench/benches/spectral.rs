use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pks_core::spectral::{forward_transform, inverse_transform};
use pks_core::GridSpec;

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    for n in [64usize, 128, 256] {
        let grid = GridSpec::new(n, n, 32.0, 32.0).unwrap();
        let samples: Vec<f64> = (0..grid.len()).map(|i| ((i * 7919) % 1013) as f64 / 1013.0).collect();
        let field = forward_transform(&grid, &samples).unwrap();
        group.bench_with_input(BenchmarkId::new("forward", n), &samples, |b, s| {
            b.iter(|| forward_transform(&grid, black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("inverse", n), &field, |b, f| b.iter(|| inverse_transform(black_box(f))));
    }
    group.finish();
}

criterion_group!(benches, transforms);
criterion_main!(benches);
