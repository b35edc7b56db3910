#![allow(dead_code)]

use std::f64::consts::PI;

use polyarc::oracle::Profile;
use polyarc::{Point, Polyline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The right-angled V: 21 vertices 3 apart, legs along the axes so every
/// coordinate is an integer and both legs are exactly collinear.
pub fn v_polyline() -> Polyline {
    Polyline::new(
        (0..=20)
            .map(|j| {
                let j = j as f64;
                Point::new(3.0 * j.min(10.0), 3.0 * (j - 10.0).max(0.0))
            })
            .collect(),
    )
    .unwrap()
}

/// 19 vertices on the unit circle, 5° apart.
pub fn circle_run() -> Polyline {
    Polyline::new(
        (0..=18)
            .map(|j| {
                let a = PI - (j as f64) * 5f64.to_radians();
                Point::new(a.cos(), a.sin())
            })
            .collect(),
    )
    .unwrap()
}

/// A tolerance suited to the vertex spacing of each random profile.
pub fn tolerance_for(profile: Profile, rng: &mut ChaCha8Rng) -> f64 {
    match profile {
        Profile::Walk => rng.gen_range(0.1..0.6),
        Profile::Smooth => rng.gen_range(0.025..0.1),
        Profile::Mixed => rng.gen_range(0.05..0.4),
    }
}

pub fn tolerance_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x70_1e_4a_9c)
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-18
}
