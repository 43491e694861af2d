use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use kirillov::ncdl::{schedule_degenerate, sigma_degenerate, TestFunctionField};
use kirillov::reps::{induced_kernel, operator_norm, Grid, TestFunction};
use kirillov::topology::OrbitSequence;

fn kernels(c: &mut Criterion) {
    let test = TestFunction::gaussian(1.0, 1.0);
    let f = [0.0, 0.0, 0.2, 0.1, 0.3, 0.2, 0.5];
    let mut group = c.benchmark_group("induced_kernel");
    group.sample_size(20);
    for n in [16usize, 32, 48] {
        let grid = Grid::plane([0.0, 0.0], 6.0, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, g| {
            b.iter(|| induced_kernel(&test, black_box(&f), g).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("operator_norm");
    group.sample_size(20);
    for n in [16usize, 32, 48] {
        let grid = Grid::plane([0.0, 0.0], 6.0, n).unwrap();
        let op = induced_kernel(&test, &f, &grid).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &op.matrix, |b, m| b.iter(|| operator_norm(black_box(m))));
    }
    group.finish();

    let seq = OrbitSequence::gamma2("k^3/2", "k", "1/k^3", 64).unwrap();
    let step = schedule_degenerate(&seq, None, &[16]).unwrap().remove(0);
    let grid = Grid::plane([0.0, 0.0], 6.0, 32).unwrap();
    let field = TestFunctionField(&test);
    let mut group = c.benchmark_group("sigma");
    group.sample_size(10);
    group.bench_function("degenerate k=16 n=32", |b| b.iter(|| sigma_degenerate(&field, black_box(&step), &grid).unwrap()));
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
