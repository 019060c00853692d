use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rapidline_core::{
    brute_force, captation_partition, evaluate, solve, validate_instance, DemandPoint, Instance,
    Point, RawInstance, Segment,
};

fn random_instance(seed: u64, m: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..m)
        .map(|_| {
            DemandPoint::new(
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(0.1..5.0),
            )
        })
        .collect();
    validate_instance(RawInstance {
        points,
        length: 4.0,
        speedup: 5.0,
    })
    .expect("valid instance")
}

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for m in [4usize, 8, 16, 32] {
        let inst = random_instance(7 + m as u64, m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &inst, |b, inst| {
            b.iter(|| solve(inst));
        });
    }
    group.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let inst = random_instance(11, 32);
    let seg = Segment::new(Point::new(2.0, 3.0), Point::new(-1.0, 0.5));
    c.bench_function("evaluate/32", |b| b.iter(|| evaluate(&inst, &seg)));
}

fn bench_partition(c: &mut Criterion) {
    let inst = random_instance(13, 32);
    let seg = Segment::new(Point::new(2.0, 3.0), Point::new(-1.0, 0.5));
    c.bench_function("captation_partition/32", |b| {
        b.iter(|| captation_partition(&inst, &seg, 1e-9))
    });
}

fn bench_oracle(c: &mut Criterion) {
    let inst = random_instance(17, 8);
    c.bench_function("brute_force/33x64", |b| {
        b.iter(|| brute_force(&inst, 33, 64).unwrap())
    });
}

criterion_group!(
    benches,
    bench_solve,
    bench_evaluate,
    bench_partition,
    bench_oracle
);
criterion_main!(benches);
