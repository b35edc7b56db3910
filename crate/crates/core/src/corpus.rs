//! Seeded synthetic corpora: chains of noisy semicircular arches and noisy
//! zigzags.
//!
//! Noise comes from `ChaCha8Rng` seeded with the corpus seed, with the word
//! stream set to the primitive index, so primitive `m` sees the same deviates
//! regardless of how many primitives precede it.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geom::{Point, Polyline};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusKind {
    Arcs,
    Zigzag,
}

impl FromStr for CorpusKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arcs" => Ok(CorpusKind::Arcs),
            "zigzag" => Ok(CorpusKind::Zigzag),
            other => Err(ConfigError::Corpus(format!(
                "unknown corpus kind `{other}`"
            ))),
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusKind::Arcs => "arcs",
            CorpusKind::Zigzag => "zigzag",
        })
    }
}

/// Seed used by the benchmark and regression corpora.
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub count: usize,
    /// Arc radius or segment length.
    pub scale: f64,
    /// Sampling intervals per primitive; each primitive contributes this many
    /// vertices, the shared join counted once.
    pub points_per_primitive: usize,
    pub noise: f64,
    pub seed: u64,
}

impl CorpusSpec {
    pub fn new(kind: CorpusKind, points_per_primitive: usize) -> Self {
        CorpusSpec {
            kind,
            count: 100,
            scale: 1.0,
            points_per_primitive,
            noise: 0.05,
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.count < 1 {
            return Err(ConfigError::Corpus("count must be at least 1".into()));
        }
        if self.points_per_primitive < 2 {
            return Err(ConfigError::Corpus(
                "need at least 2 points per primitive".into(),
            ));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(ConfigError::Corpus(format!("bad noise {}", self.noise)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(ConfigError::Corpus(format!("bad scale {}", self.scale)));
        }
        Ok(())
    }

    fn rng(&self, primitive: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(primitive as u64);
        rng
    }

    fn deviate(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.noise == 0.0 {
            0.0
        } else {
            rng.gen_range(-self.noise..=self.noise)
        }
    }
}

pub fn generate(spec: &CorpusSpec) -> Result<Polyline, ConfigError> {
    match spec.kind {
        CorpusKind::Arcs => gen_arcs(spec),
        CorpusKind::Zigzag => gen_zigzag(spec),
    }
}

/// Semicircular arches of radius `scale`, all bulging upward, standing on a
/// common baseline. Arch `m` spans `x` from `2 m r` to `2 (m + 1) r`; join
/// vertices lie exactly on the baseline and interior samples are pushed
/// radially by the noise.
pub fn gen_arcs(spec: &CorpusSpec) -> Result<Polyline, ConfigError> {
    spec.validate()?;
    let r = spec.scale;
    let m = spec.points_per_primitive;
    let mut pts = Vec::with_capacity(spec.count * m + 1);
    pts.push(Point::new(0.0, 0.0));
    for arch in 0..spec.count {
        let mut rng = spec.rng(arch);
        let center = Point::new((2 * arch + 1) as f64 * r, 0.0);
        for s in 1..=m {
            let a = PI - PI * s as f64 / m as f64;
            let rad = if s == m {
                r
            } else {
                r + spec.deviate(&mut rng)
            };
            let p = if s == m {
                Point::new(center.x + r, 0.0)
            } else {
                center + Point::new(a.cos(), a.sin()) * rad
            };
            pts.push(p);
        }
    }
    Polyline::new(pts).map_err(|e| ConfigError::Corpus(e.to_string()))
}

/// Legs of length `scale` alternating between +45° and -45°, with interior
/// samples pushed perpendicular to their leg by the noise.
pub fn gen_zigzag(spec: &CorpusSpec) -> Result<Polyline, ConfigError> {
    spec.validate()?;
    let m = spec.points_per_primitive;
    let mut pts = Vec::with_capacity(spec.count * m + 1);
    let mut start = Point::new(0.0, 0.0);
    pts.push(start);
    for leg in 0..spec.count {
        let mut rng = spec.rng(leg);
        let up = if leg % 2 == 0 { 1.0 } else { -1.0 };
        let dir = Point::new(FRAC_1_SQRT_2, up * FRAC_1_SQRT_2);
        let normal = dir.perp();
        let end = start + dir * spec.scale;
        for s in 1..=m {
            if s == m {
                pts.push(end);
            } else {
                let t = s as f64 / m as f64;
                pts.push(start + dir * (spec.scale * t) + normal * spec.deviate(&mut rng));
            }
        }
        start = end;
    }
    Polyline::new(pts).map_err(|e| ConfigError::Corpus(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::dist_point_segment;

    #[test]
    fn noiseless_arcs_on_circle() {
        let spec = CorpusSpec {
            noise: 0.0,
            ..CorpusSpec::new(CorpusKind::Arcs, 16)
        };
        let p = gen_arcs(&spec).unwrap();
        assert_eq!(p.len(), 100 * 16 + 1);
        for (j, v) in p.vertices().iter().enumerate() {
            let arch = (j.saturating_sub(1)) / 16;
            let c = Point::new((2 * arch + 1) as f64, 0.0);
            assert!((v.dist(c) - 1.0).abs() < 1e-12, "vertex {j}");
            assert!(v.y >= -1e-12);
        }
    }

    #[test]
    fn four_arcs_within_noise() {
        let spec = CorpusSpec {
            count: 4,
            ..CorpusSpec::new(CorpusKind::Arcs, 64)
        };
        let p = gen_arcs(&spec).unwrap();
        assert_eq!(p.len(), 4 * 64 + 1);
        for (j, v) in p.vertices().iter().enumerate() {
            let arch = (j.saturating_sub(1)) / 64;
            let c = Point::new((2 * arch + 1) as f64, 0.0);
            assert!((v.dist(c) - 1.0).abs() <= 0.05 + 1e-12);
        }
        assert_eq!(p[64], Point::new(2.0, 0.0));
    }

    #[test]
    fn deterministic() {
        for kind in [CorpusKind::Arcs, CorpusKind::Zigzag] {
            let spec = CorpusSpec::new(kind, 20);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
            let other = CorpusSpec { seed: 1, ..spec };
            assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
        }
    }

    #[test]
    fn streams_are_per_primitive() {
        let short = CorpusSpec {
            count: 3,
            ..CorpusSpec::new(CorpusKind::Arcs, 10)
        };
        let long = CorpusSpec { count: 5, ..short };
        let a = gen_arcs(&short).unwrap();
        let b = gen_arcs(&long).unwrap();
        assert_eq!(a.vertices(), &b.vertices()[..a.len()]);
    }

    #[test]
    fn zigzag_structure() {
        let spec = CorpusSpec::new(CorpusKind::Zigzag, 32);
        let p = gen_zigzag(&spec).unwrap();
        assert_eq!(p.len(), 100 * 32 + 1);
        let h = FRAC_1_SQRT_2;
        for leg in 0..100 {
            let a = p[leg * 32];
            let b = p[(leg + 1) * 32];
            assert!((a.dist(b) - 1.0).abs() < 1e-12);
            assert!((a.x - leg as f64 * h).abs() < 1e-9);
            for j in leg * 32..=(leg + 1) * 32 {
                assert!(dist_point_segment(p[j], a, b) <= 0.05 + 1e-12);
            }
        }
        let clean = gen_zigzag(&CorpusSpec { noise: 0.0, ..spec }).unwrap();
        for j in 1..32 {
            assert!(dist_point_segment(clean[j], clean[0], clean[32]) < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = CorpusSpec::new(CorpusKind::Arcs, 1);
        assert!(s.validate().is_err());
        s.points_per_primitive = 4;
        s.noise = -1.0;
        assert!(s.validate().is_err());
        s.noise = 0.0;
        s.count = 0;
        assert!(s.validate().is_err());
        assert!("wiggle".parse::<CorpusKind>().is_err());
        assert_eq!("zigzag".parse::<CorpusKind>().unwrap(), CorpusKind::Zigzag);
    }
}
