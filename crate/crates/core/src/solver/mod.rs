//! Minimum-penalty, then minimum-SSE compression of a polyline into anchored
//! segments and arcs.

mod dp;
mod jump;

pub use dp::{dp_compress, dp_compress_with_tables};
pub use jump::{jump_compress, JumpState};

use serde::Serialize;

use crate::error::{ConfigError, SolverError};
use crate::fit::{ArcFit, FitOptions, FitStats, SegmentFit};
use crate::geom::{max_deviation, Polyline, Primitive};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PenaltyConfig {
    pub p_seg: u32,
    pub p_arc: u32,
    /// Fewest vertices (anchors included) an arc may cover.
    pub min_arc_vertices: usize,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig {
            p_seg: 2,
            p_arc: 3,
            min_arc_vertices: 4,
        }
    }
}

impl PenaltyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.p_seg < 1 || self.p_arc < 1 {
            return Err(ConfigError::Penalty {
                seg: self.p_seg,
                arc: self.p_arc,
            });
        }
        if self.min_arc_vertices < 3 {
            return Err(ConfigError::MinArcVertices(self.min_arc_vertices));
        }
        Ok(())
    }

    pub fn of(&self, prim: &Primitive) -> u32 {
        if prim.is_arc() {
            self.p_arc
        } else {
            self.p_seg
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SolverConfig {
    pub penalties: PenaltyConfig,
    pub fit: FitOptions,
    /// Record every fitted `(k, i, kind)` to count repeated fits. Costs a hash
    /// set insert per fit.
    pub track_duplicates: bool,
    /// Keep one [`LevelTrace`] per penalty level of the jump solver.
    pub trace: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FittedPrimitive {
    pub primitive: Primitive,
    pub sse: f64,
    pub max_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompressedPolyline {
    pub primitives: Vec<FittedPrimitive>,
    pub total_penalty: u32,
    pub total_sse: f64,
}

impl CompressedPolyline {
    pub fn arc_count(&self) -> usize {
        self.primitives
            .iter()
            .filter(|p| p.primitive.is_arc())
            .count()
    }

    pub fn max_deviation(&self) -> f64 {
        self.primitives.iter().fold(0.0, |m, p| m.max(p.max_dev))
    }

    /// Indices where consecutive primitives meet, anchors excluded.
    pub fn breakpoints(&self) -> Vec<usize> {
        self.primitives
            .iter()
            .skip(1)
            .map(|p| p.primitive.start())
            .collect()
    }

    /// Recomputes every deviation exactly and returns the vertices farther
    /// than `tol` from their primitive, plus any gap in index coverage.
    pub fn violations(&self, poly: &Polyline, tol: f64) -> Vec<usize> {
        let mut bad = Vec::new();
        let mut expected = 0;
        for p in &self.primitives {
            let (k, i) = (p.primitive.start(), p.primitive.end());
            if k != expected || i <= k || i >= poly.len() {
                bad.push(k);
            }
            expected = i;
            match max_deviation(poly, &p.primitive) {
                Ok(d) if d <= tol => {}
                _ => bad.push(k),
            }
        }
        if expected + 1 != poly.len() {
            bad.push(expected);
        }
        bad
    }
}

/// One penalty level of the jump solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelTrace {
    pub level: u32,
    /// Jump target, or `None` when neither source could be extended.
    pub target: Option<usize>,
    pub retries: u32,
    pub solve_calls: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub fits: FitStats,
    pub solve_calls: u64,
    pub levels: u32,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub compressed: CompressedPolyline,
    pub stats: SolveStats,
    pub trace: Vec<LevelTrace>,
}

/// Best known way to reach a vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Link {
    pub from: usize,
    pub fitted: FittedPrimitive,
}

impl Link {
    pub fn segment(from: usize, f: SegmentFit) -> Self {
        Link {
            from,
            fitted: FittedPrimitive {
                primitive: Primitive::Segment(f.prim),
                sse: f.sse,
                max_dev: f.max_dev,
            },
        }
    }

    pub fn arc(from: usize, f: ArcFit) -> Self {
        Link {
            from,
            fitted: FittedPrimitive {
                primitive: Primitive::Arc(f.prim),
                sse: f.sse,
                max_dev: f.max_dev,
            },
        }
    }
}

/// Whether `(error, link)` should replace `(best_error, best)` among
/// realizations of equal penalty: smaller error, then segments over arcs,
/// then the later start vertex.
pub(crate) fn improves(error: f64, link: &Link, best_error: f64, best: &Link) -> bool {
    if error != best_error {
        return error < best_error;
    }
    let seg = !link.fitted.primitive.is_arc();
    let best_seg = !best.fitted.primitive.is_arc();
    if seg != best_seg {
        return seg;
    }
    link.from > best.from
}

/// Follows the links back from the last vertex and re-accumulates the totals.
pub(crate) fn reconstruct(
    pred: &[Option<Link>],
    final_error: f64,
    cfg: &PenaltyConfig,
) -> Result<CompressedPolyline, SolverError> {
    let mut chain = Vec::new();
    let mut at = pred.len() - 1;
    while at > 0 {
        let link = pred[at].ok_or(SolverError::BrokenChain(at))?;
        if link.from >= at {
            return Err(SolverError::BrokenChain(at));
        }
        chain.push(link.fitted);
        at = link.from;
    }
    chain.reverse();
    let total_sse = chain.iter().fold(0.0, |s, p| s + p.sse);
    let total_penalty = chain.iter().map(|p| cfg.of(&p.primitive)).sum();
    if (total_sse - final_error).abs() > 1e-12 {
        return Err(SolverError::ErrorMismatch {
            reconstructed: total_sse,
            recorded: final_error,
        });
    }
    Ok(CompressedPolyline {
        primitives: chain,
        total_penalty,
        total_sse,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::geom::{Point, Polyline};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    pub fn v_shape() -> Polyline {
        let s = 3.0 / 2f64.sqrt();
        Polyline::new(
            (0..=20)
                .map(|j| {
                    let j = j as f64;
                    Point::new(j * s, -(10.0 - (j - 10.0).abs()) * s)
                })
                .collect(),
        )
        .unwrap()
    }

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

    pub fn walk(seed: u64, n: usize) -> Polyline {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Point::new(0.0, 0.0);
        let mut heading: f64 = 0.0;
        let mut pts = vec![p];
        for _ in 1..n {
            heading += rng.gen_range(-0.5..0.5);
            p = p + Point::new(heading.cos(), heading.sin()) * rng.gen_range(0.5..1.5);
            pts.push(p);
        }
        Polyline::new(pts).unwrap()
    }
}
