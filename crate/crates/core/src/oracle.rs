//! Brute-force reference implementations for small instances, plus seeded
//! random instance streams.
//!
//! The arc search here deliberately avoids the interval construction used by
//! the fitter: tangent angles are sampled densely on each side, the
//! admissible runs are refined by golden-section search and bisection, and
//! the sum of squares is minimized by sampling plus golden-section search.

use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ConfigError, OracleError};
use crate::fit::{min_tangent_angle, FitOptions};
use crate::geom::{
    dist_point_segment, AnchoredArc, AnchoredSegment, ArcGeometry, Orientation, Point, Polyline,
    Primitive,
};
use crate::solver::{FittedPrimitive, PenaltyConfig};

pub const ORACLE_MAX_VERTICES: usize = 25;
pub const REACH_MAX_VERTICES: usize = 60;

const SAMPLES_PER_SIDE: usize = 2048;
const SSE_SAMPLES: usize = 256;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub penalty: u32,
    pub sse: f64,
    pub witness: Vec<FittedPrimitive>,
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    [(x1, f1), (x2, f2), (x, fx)]
        .into_iter()
        .fold((x, fx), |b, c| if c.1 < b.1 { c } else { b })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Check {
    Circle,
    Arc,
}

/// Arcs from `a` to `b` indexed by signed tangent angle at `a`.
struct ArcFamily<'a> {
    a: Point,
    b: Point,
    half: f64,
    interior: &'a [Point],
    tol: f64,
    monotone: bool,
}

impl ArcFamily<'_> {
    fn arc(&self, theta: f64) -> ArcGeometry {
        let offset = -self.half / theta.tan();
        let orientation = if theta > 0.0 {
            Orientation::Cw
        } else {
            Orientation::Ccw
        };
        ArcGeometry::from_anchors(self.a, self.b, offset, orientation).expect("distinct anchors")
    }

    /// Largest distance of an interior vertex beyond the tolerance. Stops
    /// early, returning some value above `cutoff`, once that is exceeded.
    fn excess_until(&self, theta: f64, cutoff: f64, mode: Check) -> f64 {
        let g = self.arc(theta);
        let mut m = f64::NEG_INFINITY;
        for &v in self.interior {
            let d = match mode {
                Check::Circle => g.radial_residual(v).abs(),
                Check::Arc => g.distance(v),
            };
            m = m.max(d - self.tol);
            if m > cutoff {
                break;
            }
        }
        if mode == Check::Arc && m <= 0.0 && self.accept(theta).is_none() {
            // within distance but out of order along the arc
            return f64::MIN_POSITIVE;
        }
        m
    }

    fn excess(&self, theta: f64, mode: Check) -> f64 {
        self.excess_until(theta, f64::INFINITY, mode)
    }

    /// Exact acceptance check; returns `(sse, max_dev)`.
    fn accept(&self, theta: f64) -> Option<(f64, f64)> {
        let g = self.arc(theta);
        let mut prev = 0.0f64;
        let mut sse = 0.0;
        let mut max_dev = 0.0f64;
        for &v in self.interior {
            let (d, t) = g.distance_and_param(v);
            if d > self.tol {
                return None;
            }
            if self.monotone && t < prev - 1e-12 * g.sweep {
                return None;
            }
            prev = prev.max(t);
            max_dev = max_dev.max(d);
            let r = g.radial_residual(v);
            sse += r * r;
        }
        Some((sse, max_dev))
    }

    fn sse(&self, theta: f64) -> f64 {
        let g = self.arc(theta);
        self.interior
            .iter()
            .map(|&v| {
                let r = g.radial_residual(v);
                r * r
            })
            .sum()
    }

    /// Maximal angle intervals within `[lo, hi]` where every interior vertex
    /// is within tolerance of the circle or of the arc.
    fn admissible_runs(&self, lo: f64, hi: f64, mode: Check) -> Vec<(f64, f64)> {
        let step = (hi - lo) / SAMPLES_PER_SIDE as f64;
        let grid: Vec<f64> = (0..SAMPLES_PER_SIDE)
            .map(|s| lo + step * (s as f64 + 0.5))
            .collect();
        let mut cutoff = f64::INFINITY;
        let ex: Vec<f64> = grid
            .iter()
            .map(|&t| {
                let e = self.excess_until(t, cutoff.max(0.0), mode);
                cutoff = cutoff.min(e);
                e
            })
            .collect();
        let ok = |t: f64| self.excess_until(t, 0.0, mode) <= 0.0;
        let bisect = |mut good: f64, mut bad: f64| {
            for _ in 0..64 {
                let m = 0.5 * (good + bad);
                if ok(m) {
                    good = m;
                } else {
                    bad = m;
                }
            }
            good
        };
        let edge = |s: isize| -> f64 {
            if s < 0 {
                lo
            } else if s as usize >= SAMPLES_PER_SIDE {
                hi
            } else {
                grid[s as usize]
            }
        };
        let mut runs = Vec::new();
        let mut s = 0;
        while s < SAMPLES_PER_SIDE {
            if ex[s] > 0.0 {
                s += 1;
                continue;
            }
            let start = s;
            while s + 1 < SAMPLES_PER_SIDE && ex[s + 1] <= 0.0 {
                s += 1;
            }
            let before = edge(start as isize - 1);
            let after = edge(s as isize + 1);
            let l = if ok(before) {
                before
            } else {
                bisect(grid[start], before)
            };
            let h = if ok(after) {
                after
            } else {
                bisect(grid[s], after)
            };
            runs.push((l, h));
            s += 1;
        }
        if runs.is_empty() {
            // a run narrower than the grid spacing: look near the best sample
            let best = (0..SAMPLES_PER_SIDE)
                .min_by(|&x, &y| ex[x].total_cmp(&ex[y]))
                .expect("nonempty grid");
            let (t, e) = golden_min(
                |t| self.excess(t, mode),
                edge(best as isize - 1),
                edge(best as isize + 1),
                120,
            );
            if e <= 0.0 {
                let l = bisect(t, edge(best as isize - 1));
                let h = bisect(t, edge(best as isize + 1));
                runs.push((l, h));
            }
        }
        runs
    }

    fn best_in(&self, lo: f64, hi: f64) -> (f64, f64) {
        if hi <= lo {
            return (lo, self.sse(lo));
        }
        let step = (hi - lo) / SSE_SAMPLES as f64;
        let best = (0..=SSE_SAMPLES)
            .map(|s| lo + step * s as f64)
            .map(|t| (t, self.sse(t)))
            .fold((lo, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        golden_min(
            |t| self.sse(t),
            (best.0 - step).max(lo),
            (best.0 + step).min(hi),
            120,
        )
    }
}

/// Dense-sampling arc search with the same acceptance rule as the fitter.
pub fn oracle_fit_arc(
    poly: &Polyline,
    k: usize,
    i: usize,
    tol: f64,
    opts: FitOptions,
) -> Option<(AnchoredArc, f64, f64)> {
    let fam = family(poly, k, i, tol, opts.monotone_check);
    let eps = min_tangent_angle();
    let cap_margin = 2e-9 * eps;
    let at_cap = |x: f64| x.abs() <= eps + cap_margin || x.abs() >= PI - eps - cap_margin;
    let mut best: Option<(f64, f64, f64)> = None;
    for (side_lo, side_hi) in [(eps, PI - eps), (-PI + eps, -eps)] {
        for (clo, chi) in fam.admissible_runs(side_lo, side_hi, Check::Circle) {
            let (t, s) = fam.best_in(clo, chi);
            // the objective is flat near the cap, so a sampled minimum can
            // stop short of a cap end that is just as good
            let cap_as_good = [clo, chi]
                .into_iter()
                .any(|e| at_cap(e) && fam.sse(e) <= s * (1.0 + 8.0 * f64::EPSILON));
            if at_cap(t) || cap_as_good {
                continue;
            }
            for (lo, hi) in fam.admissible_runs(clo, chi, Check::Arc) {
                let (t, _) = fam.best_in(lo, hi);
                let nudge = 1e-9 * (hi - lo);
                let t = t.clamp(lo + nudge, (hi - nudge).max(lo + nudge));
                for theta in [t, lo, hi, 0.5 * (lo + hi)] {
                    if let Some((sse, max_dev)) = fam.accept(theta) {
                        if best.is_none_or(|b| sse < b.1) {
                            best = Some((theta, sse, max_dev));
                        }
                        break;
                    }
                }
            }
        }
    }
    let (theta, sse, max_dev) = best?;
    let g = fam.arc(theta);
    Some((
        AnchoredArc {
            start: k,
            end: i,
            offset: -fam.half / theta.tan(),
            orientation: g.orientation,
        },
        sse,
        max_dev,
    ))
}

fn family(poly: &Polyline, k: usize, i: usize, tol: f64, monotone: bool) -> ArcFamily<'_> {
    ArcFamily {
        a: poly[k],
        b: poly[i],
        half: 0.5 * poly[k].dist(poly[i]),
        interior: &poly.vertices()[k + 1..i],
        tol,
        monotone,
    }
}

fn oracle_segment(poly: &Polyline, k: usize, i: usize, tol: f64) -> Option<(f64, f64)> {
    let (a, b) = (poly[k], poly[i]);
    let mut sse = 0.0;
    let mut max_dev = 0.0f64;
    for &v in &poly.vertices()[k + 1..i] {
        let d = dist_point_segment(v, a, b);
        if d > tol {
            return None;
        }
        sse += d * d;
        max_dev = max_dev.max(d);
    }
    Some((sse, max_dev))
}

/// Exhaustive optimum over all anchored pairs, without reach tables.
pub fn oracle_compress(
    poly: &Polyline,
    tol: f64,
    cfg: &PenaltyConfig,
    opts: FitOptions,
) -> Result<OracleResult, OracleError> {
    let n = poly.len();
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    cfg.validate()?;
    let mut best: Vec<Option<(u32, f64, usize, FittedPrimitive)>> = vec![None; n];
    let mut pen = vec![0u32; n];
    let mut err = vec![0.0f64; n];
    for i in 1..n {
        for k in 0..i {
            let mut cands = Vec::with_capacity(2);
            if let Some((sse, max_dev)) = oracle_segment(poly, k, i, tol) {
                cands.push((
                    cfg.p_seg,
                    FittedPrimitive {
                        primitive: Primitive::Segment(AnchoredSegment { start: k, end: i }),
                        sse,
                        max_dev,
                    },
                ));
            }
            if i - k + 1 >= cfg.min_arc_vertices {
                if let Some((arc, sse, max_dev)) = oracle_fit_arc(poly, k, i, tol, opts) {
                    cands.push((
                        cfg.p_arc,
                        FittedPrimitive {
                            primitive: Primitive::Arc(arc),
                            sse,
                            max_dev,
                        },
                    ));
                }
            }
            for (p, f) in cands {
                let cand = (pen[k] + p, err[k] + f.sse, k, f);
                let better = match &best[i] {
                    None => true,
                    Some(b) => (cand.0, cand.1) < (b.0, b.1),
                };
                if better {
                    best[i] = Some(cand);
                }
            }
        }
        let b = best[i].as_ref().expect("adjacent segments always fit");
        pen[i] = b.0;
        err[i] = b.1;
    }
    let mut witness = Vec::new();
    let mut at = n - 1;
    while at > 0 {
        let b = best[at].as_ref().expect("every vertex is reachable");
        witness.push(b.3);
        at = b.2;
    }
    witness.reverse();
    Ok(OracleResult {
        penalty: pen[n - 1],
        sse: err[n - 1],
        witness,
    })
}

/// Farthest end vertex from `i` reachable by a segment, and by an arc that
/// only has to pass within tolerance of its interior vertices (no ordering
/// check, no offset cap). The arc reach is `i` when no arc fits.
pub fn oracle_reach(poly: &Polyline, tol: f64, i: usize) -> Result<(usize, usize), OracleError> {
    let n = poly.len();
    if n > REACH_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            limit: REACH_MAX_VERTICES,
        });
    }
    let seg = (i + 1..n)
        .rev()
        .find(|&m| oracle_segment(poly, i, m, tol).is_some())
        .unwrap_or(i);
    let eps = min_tangent_angle();
    let arc = (i + 2..n)
        .rev()
        .find(|&m| {
            let fam = family(poly, i, m, tol, false);
            [(eps, PI - eps), (-PI + eps, -eps)]
                .into_iter()
                .any(|(lo, hi)| !fam.admissible_runs(lo, hi, Check::Arc).is_empty())
        })
        .unwrap_or(i);
    Ok((seg, arc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Walk,
    Smooth,
    Mixed,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Walk, Profile::Smooth, Profile::Mixed];
}

impl FromStr for Profile {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "walk" => Ok(Profile::Walk),
            "smooth" => Ok(Profile::Smooth),
            "mixed" => Ok(Profile::Mixed),
            other => Err(ConfigError::Corpus(format!("unknown profile `{other}`"))),
        }
    }
}

fn push_walk(rng: &mut ChaCha8Rng, pts: &mut Vec<Point>, count: usize) {
    let mut p = *pts.last().expect("seeded with a start vertex");
    for _ in 0..count {
        p = p + Point::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        pts.push(p);
    }
}

/// One noisy segment or arc continuing from the last vertex; returns the new heading.
fn push_piece(rng: &mut ChaCha8Rng, pts: &mut Vec<Point>, heading: f64) -> f64 {
    let start = *pts.last().expect("seeded with a start vertex");
    let m = rng.gen_range(3..=12usize);
    let noise = 0.02;
    let heading = heading + rng.gen_range(-0.8..0.8);
    let dir = Point::new(heading.cos(), heading.sin());
    if rng.gen_bool(0.4) {
        let len = rng.gen_range(1.0..4.0);
        for s in 1..=m {
            let t = s as f64 / m as f64;
            let wobble = if s == m {
                0.0
            } else {
                rng.gen_range(-noise..=noise)
            };
            pts.push(start + dir * (len * t) + dir.perp() * wobble);
        }
        heading
    } else {
        let r = rng.gen_range(1.0..5.0);
        let turn: f64 = rng.gen_range(0.4..2.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        // center to the left for a left turn
        let center = start + dir.perp() * (r * turn.signum());
        let a0 = (start - center).angle();
        for s in 1..=m {
            let a = a0 + turn * s as f64 / m as f64;
            let rr = if s == m {
                r
            } else {
                r + rng.gen_range(-noise..=noise)
            };
            pts.push(center + Point::new(a.cos(), a.sin()) * rr);
        }
        heading + turn
    }
}

/// Deterministic stream of `count` instances; instance `j` depends only on
/// `seed` and `j`.
pub fn random_instances(
    seed: u64,
    count: usize,
    n_range: RangeInclusive<usize>,
    profile: Profile,
) -> Vec<Polyline> {
    (0..count)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let n = rng.gen_range(n_range.clone()).max(2);
            let mut pts = vec![Point::new(0.0, 0.0)];
            let mut heading = rng.gen_range(-PI..PI);
            while pts.len() < n {
                match profile {
                    Profile::Walk => {
                        let c = n - pts.len();
                        push_walk(&mut rng, &mut pts, c);
                    }
                    Profile::Smooth => heading = push_piece(&mut rng, &mut pts, heading),
                    Profile::Mixed => {
                        if rng.gen_bool(0.5) {
                            let c = rng.gen_range(3..=10);
                            push_walk(&mut rng, &mut pts, c);
                        } else {
                            heading = push_piece(&mut rng, &mut pts, heading);
                        }
                    }
                }
            }
            pts.truncate(n);
            Polyline::new(pts).expect("random vertices are distinct")
        })
        .collect()
}
