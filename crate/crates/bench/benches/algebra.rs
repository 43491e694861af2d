use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kirillov::lie::bch::{bch_generic, bch_product};
use kirillov::lie::coadjoint::coadjoint_f64;
use kirillov::lie::law::derive_group_law;
use kirillov::lie::validate_algebra;
use kirillov::orbits::vergne_polarization;
use kirillov::scalar::rat;
use kirillov::{Algebra, StructureConstants};

fn algebra(c: &mut Criterion) {
    let alg = Algebra::n7();
    let sc = StructureConstants::n7();
    let x: Vec<_> = (1..=7).map(|i| rat(i, 3)).collect();
    let y: Vec<_> = (1..=7).map(|i| rat(-i, 5)).collect();
    let xf: Vec<f64> = (1..=7).map(|i| i as f64 / 3.0).collect();
    let yf: Vec<f64> = (1..=7).map(|i| -(i as f64) / 5.0).collect();

    c.bench_function("validate_algebra", |b| b.iter(|| validate_algebra(black_box(&sc))));
    c.bench_function("bch_product rational", |b| b.iter(|| bch_product(&alg, black_box(&x), black_box(&y)).unwrap()));
    c.bench_function("bch f64", |b| b.iter(|| bch_generic(&alg, black_box(&xf), black_box(&yf)).unwrap()));
    c.bench_function("derive_group_law", |b| b.iter(|| derive_group_law(black_box(&alg))));
    c.bench_function("coadjoint f64", |b| b.iter(|| coadjoint_f64(&alg, black_box(&xf), black_box(&yf))));
    let f: Vec<_> = [0, 0, 1, 2, 0, 0, 3].iter().map(|&v| rat(v, 1)).collect();
    c.bench_function("vergne_polarization", |b| b.iter(|| vergne_polarization(&alg, black_box(&f), None).unwrap()));
}

criterion_group!(benches, algebra);
criterion_main!(benches);
