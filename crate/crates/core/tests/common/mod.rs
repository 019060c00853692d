//! Shared generators for the randomized integration tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rapidline_core::{validate_instance, DemandPoint, Instance, Point, RawInstance, Segment};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Desk-scale random instance: M ≤ `max_points`, coordinates in [−10, 10],
/// weights in (0, 5], ℓ in (0, `max_len`], k in [1, 10].
pub fn random_instance(rng: &mut ChaCha8Rng, max_points: usize, max_len: f64) -> Instance {
    let m = rng.gen_range(1..=max_points);
    let points = (0..m)
        .map(|_| {
            DemandPoint::new(
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(0.05..5.0),
            )
        })
        .collect();
    let length = rng.gen_range(1e-3..max_len);
    let speedup = rng.gen_range(1.0..10.0);
    validate_instance(RawInstance {
        points,
        length,
        speedup,
    })
    .expect("generated instance is valid")
}

/// A random segment of the instance's length anywhere in the plane, at any
/// angle in [0, 2π).
pub fn random_segment(rng: &mut ChaCha8Rng, instance: &Instance) -> Segment {
    let ell = instance.length();
    let facility = Point::new(rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0));
    let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
    Segment::new(
        Point::new(
            facility.x + ell * alpha.cos(),
            facility.y + ell * alpha.sin(),
        ),
        facility,
    )
}
