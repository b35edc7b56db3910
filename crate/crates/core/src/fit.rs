//! Anchored fit queries: does a segment or an arc through `p_k` and `p_i`
//! pass within tolerance of every vertex in between, and if so, which one
//! minimizes the squared deviations.
//!
//! Arcs through two fixed anchors `a` and `b` form a one-parameter family.
//! It is parametrized here by the signed tangent angle `theta` at `a`,
//! measured from the chord: `theta > 0` bulges left, `theta < 0` bulges
//! right, `theta -> 0` flattens onto the chord and `|theta| -> π` closes
//! into a full circle. Inverting the plane about `a` (with radius `|ab|`)
//! maps the arc with angle `theta` onto the ray leaving `b` in direction
//! `theta`, and maps the tolerance disk around a vertex onto another disk.
//! The arcs passing within tolerance of that vertex are therefore exactly
//! the rays hitting the image disk, an angular interval shorter than `π`.
//! Intersecting those intervals over all interior vertices gives the exact
//! feasible set, which is always a single interval.

use std::collections::HashSet;
use std::f64::consts::PI;

use serde::Serialize;

use crate::geom::{
    dist_point_segment, wrap_angle, AnchoredArc, AnchoredSegment, ArcGeometry, Orientation, Point,
    Polyline, H_MAX,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FitOptions {
    /// Require interior vertices to project onto the arc in order from the
    /// start anchor to the end anchor.
    pub monotone_check: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            monotone_check: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SegmentFit {
    pub prim: AnchoredSegment,
    pub sse: f64,
    pub max_dev: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArcFit {
    pub prim: AnchoredArc,
    pub sse: f64,
    pub max_dev: f64,
}

/// Smallest `|theta|` (and distance of `|theta|` from `π`) an arc may have
/// before it counts as a segment, equivalent to `|h| <= H_MAX * L`.
pub fn min_tangent_angle() -> f64 {
    (0.5 / H_MAX).atan()
}

/// Closed interval of center offsets for one orientation. Bounds may be
/// infinite; `lo > hi` is empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HInterval {
    pub orientation: Orientation,
    pub lo: f64,
    pub hi: f64,
}

impl HInterval {
    pub fn empty(orientation: Orientation) -> Self {
        HInterval {
            orientation,
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, h: f64) -> bool {
        self.lo <= h && h <= self.hi
    }
}

/// Constraint one vertex places on the tangent angle of arcs through two anchors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TangentConstraint {
    /// The vertex lies within tolerance of an anchor, so every arc qualifies.
    Free,
    /// Feasible angles are `center ± half_width` (mod 2π); `half_width < π/2`.
    Arc { center: f64, half_width: f64 },
}

/// Local frame of a chord: origin at the start anchor, x along the chord.
#[derive(Clone, Copy, Debug)]
struct Chord {
    a: Point,
    b: Point,
    t: Point,
    n: Point,
    len: f64,
}

impl Chord {
    fn new(a: Point, b: Point) -> Self {
        let d = b - a;
        let len = d.norm();
        let t = d * (1.0 / len);
        Chord {
            a,
            b,
            t,
            n: t.perp(),
            len,
        }
    }

    fn constraint(&self, v: Point, tol: f64) -> TangentConstraint {
        let rel = v - self.a;
        let d0_sq = rel.norm_sq();
        if d0_sq <= tol * tol || v.dist(self.b) <= tol {
            return TangentConstraint::Free;
        }
        let scale = self.len * self.len / (d0_sq - tol * tol);
        let cx = rel.dot(self.t) * scale - self.len;
        let cy = rel.dot(self.n) * scale;
        let radius = tol * scale;
        let dist = cx.hypot(cy);
        if dist <= radius {
            return TangentConstraint::Free;
        }
        TangentConstraint::Arc {
            center: cy.atan2(cx),
            half_width: (radius / dist).asin(),
        }
    }

    /// Center offset of the arc with tangent angle `theta`.
    fn offset(&self, theta: f64) -> (Orientation, f64) {
        let (s, c) = theta.sin_cos();
        let orientation = if theta > 0.0 {
            Orientation::Cw
        } else {
            Orientation::Ccw
        };
        (orientation, -0.5 * self.len * c / s)
    }
}

/// Exact constraint vertex `v` places on arcs from `a` to `b`.
pub fn tangent_constraint(v: Point, a: Point, b: Point, tol: f64) -> TangentConstraint {
    Chord::new(a, b).constraint(v, tol)
}

/// The center offsets `h` for which the arc from `a` to `b` passes within
/// `tol` of `v`, split by orientation. The split is needed because the
/// feasible tangent-angle interval can cross the flat arc or the full
/// circle, where the offset jumps between `±inf`.
pub fn feasible_h_interval(v: Point, a: Point, b: Point, tol: f64) -> Vec<HInterval> {
    let chord = Chord::new(a, b);
    let (center, half) = match chord.constraint(v, tol) {
        TangentConstraint::Free => {
            return [Orientation::Cw, Orientation::Ccw]
                .into_iter()
                .map(|orientation| HInterval {
                    orientation,
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY,
                })
                .collect();
        }
        TangentConstraint::Arc { center, half_width } => (center, half_width),
    };
    let to_h = |theta: f64| -0.5 * chord.len / theta.tan();
    let mut out = Vec::new();
    for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
        let lo = center - half + shift;
        let hi = center + half + shift;
        for (orientation, side_lo, side_hi) in
            [(Orientation::Cw, 0.0, PI), (Orientation::Ccw, -PI, 0.0)]
        {
            let l = lo.max(side_lo);
            let h = hi.min(side_hi);
            if l <= h {
                let hl = if l == side_lo {
                    f64::NEG_INFINITY
                } else {
                    to_h(l)
                };
                let hh = if h == side_hi { f64::INFINITY } else { to_h(h) };
                out.push(HInterval {
                    orientation,
                    lo: hl,
                    hi: hh,
                });
            }
        }
    }
    out
}

/// Interior vertex indices of `(k, i)`, nearest to an anchor first.
fn nearest_anchor_first(k: usize, i: usize) -> impl Iterator<Item = usize> {
    let mut lo = k + 1;
    let mut hi = i;
    let mut from_start = true;
    std::iter::from_fn(move || {
        if lo >= hi {
            return None;
        }
        let j = if from_start {
            lo += 1;
            lo - 1
        } else {
            hi -= 1;
            hi
        };
        from_start = !from_start;
        Some(j)
    })
}

/// Fits the chord `[p_k, p_i]` if every interior vertex lies within `tol` of it.
pub fn fit_segment(poly: &Polyline, k: usize, i: usize, tol: f64) -> Option<SegmentFit> {
    debug_assert!(k < i);
    let (a, b) = (poly[k], poly[i]);
    let mut max_dev = 0.0f64;
    let mut sse = 0.0;
    for j in nearest_anchor_first(k, i) {
        let d = dist_point_segment(poly[j], a, b);
        if d > tol {
            return None;
        }
        max_dev = max_dev.max(d);
        sse += d * d;
    }
    Some(SegmentFit {
        prim: AnchoredSegment { start: k, end: i },
        sse,
        max_dev,
    })
}

/// Running intersection of tangent-angle intervals. `None` means unconstrained.
#[derive(Clone, Copy, Debug)]
pub(crate) struct AngleRange {
    pub lo: f64,
    pub hi: f64,
}

impl AngleRange {
    /// Intersects with `center ± half`, choosing the representative of
    /// `center` closest to this range. Both arcs are shorter than `π`, so the
    /// intersection is connected.
    pub fn intersect(self, center: f64, half: f64) -> Option<AngleRange> {
        let mid = 0.5 * (self.lo + self.hi);
        let c = mid + wrap_angle(center - mid);
        let lo = self.lo.max(c - half);
        let hi = self.hi.min(c + half);
        (lo <= hi).then_some(AngleRange { lo, hi })
    }
}

/// One orientation's share of the feasible tangent angles, with the flat and
/// full-circle ends removed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct ThetaPiece {
    pub orientation: Orientation,
    pub lo: f64,
    pub hi: f64,
}

/// Splits a feasible angle range (or the unconstrained set) into per-orientation pieces.
pub(crate) fn theta_pieces(range: Option<AngleRange>) -> Vec<ThetaPiece> {
    let eps = min_tangent_angle();
    let cw = (eps, PI - eps);
    let ccw = (-PI + eps, -eps);
    let Some(r) = range else {
        return vec![
            ThetaPiece {
                orientation: Orientation::Cw,
                lo: cw.0,
                hi: cw.1,
            },
            ThetaPiece {
                orientation: Orientation::Ccw,
                lo: ccw.0,
                hi: ccw.1,
            },
        ];
    };
    let mid = 0.5 * (r.lo + r.hi);
    let shift = wrap_angle(mid) - mid;
    let (lo, hi) = (r.lo + shift, r.hi + shift);
    let mut out = Vec::with_capacity(2);
    for s in [-2.0 * PI, 0.0, 2.0 * PI] {
        for (orientation, (a, b)) in [(Orientation::Cw, cw), (Orientation::Ccw, ccw)] {
            let l = lo.max(a + s);
            let h = hi.min(b + s);
            if l <= h {
                out.push(ThetaPiece {
                    orientation,
                    lo: l - s,
                    hi: h - s,
                });
            }
        }
    }
    out
}

/// Interior vertices of a chord, expressed relative to the chord midpoint.
struct ArcProblem<'a> {
    chord: Chord,
    mid: Point,
    interior: &'a [Point],
}

impl ArcProblem<'_> {
    fn quarter_chord_sq(&self) -> f64 {
        0.25 * self.chord.len * self.chord.len
    }

    /// Interval ends and stationary points of the algebraic surrogate
    /// `sum (|u|^2 - L^2/4 - 2 h u.n)^2 / (4 h^2 + L^2)` on `[lo, hi]`, with
    /// their surrogate values, best first.
    fn surrogate_candidates(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let q = self.quarter_chord_sq();
        let (mut saa, mut sab, mut sbb) = (0.0, 0.0, 0.0);
        for &v in self.interior {
            let u = v - self.mid;
            let a = u.norm_sq() - q;
            let b = u.dot(self.chord.n);
            saa += a * a;
            sab += a * b;
            sbb += b * b;
        }
        let l_sq = 4.0 * q;
        let value = |h: f64| (saa - 4.0 * h * sab + 4.0 * h * h * sbb) / (4.0 * h * h + l_sq);
        // stationary points: 4 SAB h^2 + 2 (SBB L^2 - SAA) h - SAB L^2 = 0
        let qa = 4.0 * sab;
        let qb = 2.0 * (sbb * l_sq - saa);
        let qc = -sab * l_sq;
        let mut candidates = vec![lo, hi];
        if qa.abs() > 0.0 {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                // numerically stable pair of roots
                let t = -0.5 * (qb + qb.signum() * sq);
                if t != 0.0 {
                    candidates.push(t / qa);
                    candidates.push(qc / t);
                }
            }
        } else if qb != 0.0 {
            candidates.push(-qc / qb);
        }
        let mut out: Vec<(f64, f64)> = candidates
            .into_iter()
            .filter(|h| h.is_finite())
            .map(|h| h.clamp(lo, hi))
            .map(|h| (value(h), h))
            .collect();
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    /// Radial sum of squares at `h` with its Gauss-Newton gradient and curvature.
    fn radial_terms(&self, h: f64) -> (f64, f64, f64) {
        let q = self.quarter_chord_sq();
        let n = self.chord.n;
        let r = h.hypot(self.chord.len * 0.5);
        let dr = h / r;
        let (mut s, mut g, mut hess) = (0.0, 0.0, 0.0);
        for &v in self.interior {
            let u = v - self.mid;
            let b = u.dot(n);
            let d = (u - n * h).norm();
            let num = u.norm_sq() - q - 2.0 * h * b;
            let den = d + r;
            let e = num / den;
            let dd = if d > 0.0 { (h - b) / d } else { 0.0 };
            let de = (-2.0 * b * den - num * (dd + dr)) / (den * den);
            s += e * e;
            g += e * de;
            hess += de * de;
        }
        (s, g, hess)
    }

    fn radial_sse(&self, h: f64) -> f64 {
        self.radial_terms(h).0
    }

    /// Minimizes the radial sum of squares over `[lo, hi]`. The objective
    /// can have several basins, so besides the surrogate optimum every local
    /// minimum of a coarse scan in `atan(h / L)` seeds a Gauss-Newton descent.
    fn minimize(&self, lo: f64, hi: f64) -> (f64, f64) {
        let len = self.chord.len;
        let first = self
            .surrogate_candidates(lo, hi)
            .first()
            .map_or(lo, |c| c.1);
        let mut best = self.descend(first, lo, hi);
        let (p0, p1) = ((lo / len).atan(), (hi / len).atan());
        let grid: Vec<(f64, f64)> = (0..=SCAN_STEPS)
            .map(|j| {
                let h = match j {
                    0 => lo,
                    SCAN_STEPS => hi,
                    _ => len * (p0 + (p1 - p0) * j as f64 / SCAN_STEPS as f64).tan(),
                };
                (h, self.radial_sse(h))
            })
            .collect();
        for j in 0..grid.len() {
            let s = grid[j].1;
            let left = j == 0 || grid[j - 1].1 > s;
            let right = j + 1 == grid.len() || grid[j + 1].1 >= s;
            if left && right {
                let (h, s) = self.descend(grid[j].0, lo, hi);
                if s < best.1 {
                    best = (h, s);
                }
            }
        }
        best
    }

    /// Gauss-Newton descent on the radial sum of squares, confined to `[lo, hi]`.
    fn descend(&self, start: f64, lo: f64, hi: f64) -> (f64, f64) {
        let scale = self.chord.len;
        let mut h = start;
        let (mut s, mut g, mut hess) = self.radial_terms(h);
        for _ in 0..50 {
            if hess <= 0.0 || g == 0.0 {
                break;
            }
            let target = (h - g / hess).clamp(lo, hi);
            let mut step = target - h;
            let mut accepted = None;
            for _ in 0..40 {
                if step.abs() <= 1e-14 * (h.abs() + scale) {
                    break;
                }
                let cand = h + step;
                let terms = self.radial_terms(cand);
                if terms.0 <= s {
                    accepted = Some((cand, terms));
                    break;
                }
                step *= 0.5;
            }
            let Some((cand, terms)) = accepted else { break };
            let moved = (cand - h).abs();
            h = cand;
            (s, g, hess) = terms;
            if moved <= 1e-12 * (h.abs() + scale) {
                break;
            }
        }
        (h, s)
    }
}

/// Checks an arc exactly: every interior vertex within `tol` of the closed
/// arc and, optionally, projecting in order along it. Returns `(sse, max_dev)`.
pub(crate) fn verify_arc(
    geom: &ArcGeometry,
    interior: &[Point],
    tol: f64,
    monotone: bool,
) -> Option<(f64, f64)> {
    let slack = 1e-12 * geom.sweep;
    let mut prev = 0.0f64;
    let mut sse = 0.0;
    let mut max_dev = 0.0f64;
    for &v in interior {
        let (d, t) = geom.distance_and_param(v);
        if d > tol {
            return None;
        }
        if monotone && t < prev - slack {
            return None;
        }
        prev = prev.max(t);
        max_dev = max_dev.max(d);
        let r = geom.radial_residual(v);
        sse += r * r;
    }
    Some((sse, max_dev))
}

/// Moves an angle that sits on a piece boundary slightly inside the piece.
pub(crate) fn nudge_inside(theta: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    let step = 1e-9 * width;
    if theta - lo <= step {
        (lo + step).min(hi)
    } else if hi - theta <= step {
        (hi - step).max(lo)
    } else {
        theta
    }
}

/// Inverse of the tangent-angle-to-offset map for one orientation.
pub(crate) fn offset_to_theta(orientation: Orientation, h: f64, len: f64) -> f64 {
    match orientation {
        Orientation::Cw => (0.5 * len).atan2(-h),
        Orientation::Ccw => -(0.5 * len).atan2(h),
    }
}

/// Fits the best arc through `p_k` and `p_i` within `tol` of every interior vertex.
pub fn fit_arc(poly: &Polyline, k: usize, i: usize, tol: f64, opts: FitOptions) -> Option<ArcFit> {
    debug_assert!(k < i);
    if i - k < 2 {
        return None;
    }
    let chord = Chord::new(poly[k], poly[i]);
    let mut range: Option<AngleRange> = None;
    for j in nearest_anchor_first(k, i) {
        if let TangentConstraint::Arc { center, half_width } = chord.constraint(poly[j], tol) {
            range = Some(match range {
                None => AngleRange {
                    lo: center - half_width,
                    hi: center + half_width,
                },
                Some(r) => r.intersect(center, half_width)?,
            });
        }
    }
    let problem = ArcProblem {
        chord,
        mid: chord.a.lerp(chord.b, 0.5),
        interior: &poly.vertices()[k + 1..i],
    };

    // A piece whose best circle sits on the offset cap is really a segment
    // (or a degenerate giant circle) and is dropped.
    let cap = H_MAX * chord.len * (1.0 - 1e-9);
    let mut ranked: Vec<(f64, ThetaPiece, f64)> = theta_pieces(range)
        .into_iter()
        .filter_map(|piece| {
            let (_, h_lo) = chord.offset(piece.lo);
            let (_, h_hi) = chord.offset(piece.hi);
            let (h, s) = problem.minimize(h_lo.min(h_hi), h_lo.max(h_hi));
            if h.abs() >= cap {
                return None;
            }
            let theta = offset_to_theta(piece.orientation, h, chord.len);
            Some((
                s,
                piece,
                nudge_inside(theta.clamp(piece.lo, piece.hi), piece.lo, piece.hi),
            ))
        })
        .collect();
    ranked.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(x.1.orientation.cmp(&y.1.orientation))
    });

    let check = |theta: f64| -> Option<ArcFit> {
        let (orientation, offset) = chord.offset(theta);
        let geom = ArcGeometry::from_anchors(chord.a, chord.b, offset, orientation).ok()?;
        let (sse, max_dev) = verify_arc(&geom, problem.interior, tol, opts.monotone_check)?;
        Some(ArcFit {
            prim: AnchoredArc {
                start: k,
                end: i,
                offset,
                orientation,
            },
            sse,
            max_dev,
        })
    };
    let mut best: Option<ArcFit> = None;
    for (s, piece, theta) in ranked {
        if best.is_some_and(|b| b.sse <= s) {
            break;
        }
        let found = check(theta).or_else(|| {
            verified_runs(&chord, problem.interior, tol, opts.monotone_check, piece)
                .into_iter()
                .filter_map(|(lo, hi)| {
                    let (_, h_lo) = chord.offset(lo);
                    let (_, h_hi) = chord.offset(hi);
                    let (h, _) = problem.minimize(h_lo.min(h_hi), h_lo.max(h_hi));
                    let inside = offset_to_theta(piece.orientation, h, chord.len);
                    let interior = (inside > lo && inside < hi)
                        .then(|| check(inside))
                        .flatten();
                    interior
                        .into_iter()
                        .chain(best_in_run(&check, lo, hi))
                        .min_by(|x, y| x.sse.total_cmp(&y.sse))
                })
                .min_by(|x, y| x.sse.total_cmp(&y.sse))
        });
        if let Some(f) = found {
            if best.is_none_or(|b| f.sse < b.sse) {
                best = Some(f);
            }
        }
    }
    best
}

const SCAN_STEPS: usize = 12;

/// Maximal angle intervals of `piece` on which the arc verifies.
///
/// Inside a piece every vertex is within `tol` of the full circle, so a
/// vertex can only fail by projecting off the arc, which flips when the
/// center crosses the line through it and an anchor. Consecutive vertices
/// swap order along the arc when the center crosses the line through both,
/// or when one of them leaves the arc. Sweeping those crossings in angle order and re-evaluating
/// just the affected condition finds every run in `O(n log n)`.
fn verified_runs(
    chord: &Chord,
    interior: &[Point],
    tol: f64,
    monotone: bool,
    piece: ThetaPiece,
) -> Vec<(f64, f64)> {
    let m = interior.len();
    let mid = chord.a.lerp(chord.b, 0.5);
    let mut cuts: Vec<(f64, usize)> = Vec::with_capacity(3 * m);
    let mut through = |p: Point, q: Point, cond: usize| {
        let d = q - p;
        let den = d.cross(chord.n);
        if den != 0.0 {
            let theta = offset_to_theta(piece.orientation, -d.cross(mid - p) / den, chord.len);
            if theta > piece.lo && theta < piece.hi {
                cuts.push((theta, cond));
            }
        }
    };
    for (j, &v) in interior.iter().enumerate() {
        through(chord.a, v, j);
        through(chord.b, v, j);
        if monotone && j + 1 < m {
            through(v, interior[j + 1], m + j);
        }
    }
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));

    let geom_at = |theta: f64| {
        let (orientation, offset) = chord.offset(theta);
        ArcGeometry::from_anchors(chord.a, chord.b, offset, orientation).ok()
    };
    let holds = |g: &ArcGeometry, cond: usize| {
        if cond < m {
            g.distance_and_param(interior[cond]).0 <= tol
        } else {
            let j = cond - m;
            let t0 = g.distance_and_param(interior[j]).1;
            let t1 = g.distance_and_param(interior[j + 1]).1;
            t1 >= t0 - 1e-12 * g.sweep
        }
    };

    let conds = if monotone { 2 * m - 1 } else { m };
    let mut ok = vec![false; conds];
    let mut failing = conds;
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut push = |a: f64, b: f64, good: bool| {
        if !good {
            return;
        }
        match runs.last_mut() {
            Some(r) if r.1 == a => r.1 = b,
            _ => runs.push((a, b)),
        }
    };

    let mut left = piece.lo;
    let mut c = 0;
    let mut first = true;
    loop {
        let right = cuts.get(c).map_or(piece.hi, |x| x.0);
        if right > left {
            if let Some(g) = geom_at(0.5 * (left + right)) {
                if first {
                    for (cond, slot) in ok.iter_mut().enumerate() {
                        *slot = holds(&g, cond);
                    }
                    failing = ok.iter().filter(|&&b| !b).count();
                    first = false;
                } else {
                    for &(_, cut) in cuts[..c].iter().rev().take_while(|x| x.0 == left) {
                        // a vertex leaving or wrapping around the arc also
                        // reorders it against its neighbours
                        let pairs = if monotone && cut < m {
                            [
                                cut.checked_sub(1).map(|j| m + j),
                                (cut + 1 < m).then_some(m + cut),
                            ]
                        } else {
                            [None, None]
                        };
                        for cond in std::iter::once(cut).chain(pairs.into_iter().flatten()) {
                            let now = holds(&g, cond);
                            if now != ok[cond] {
                                ok[cond] = now;
                                if now {
                                    failing -= 1;
                                } else {
                                    failing += 1;
                                }
                            }
                        }
                    }
                }
                push(left, right, failing == 0);
            } else {
                first = true;
            }
            left = right;
        }
        if c == cuts.len() {
            break;
        }
        c += 1;
    }
    runs
}

/// Better of the two ends of a verified run.
fn best_in_run(check: &impl Fn(f64) -> Option<ArcFit>, lo: f64, hi: f64) -> Option<ArcFit> {
    let inner = 0.5 * (lo + hi);
    let end = |e: f64| {
        let probe = e + 1e-9 * (inner - e);
        if let Some(f) = check(probe) {
            return Some(f);
        }
        let (mut good, mut bad, mut fit) = (inner, probe, check(inner)?);
        for _ in 0..52 {
            let m = 0.5 * (good + bad);
            match check(m) {
                Some(f) => {
                    good = m;
                    fit = f;
                }
                None => bad = m,
            }
        }
        Some(fit)
    };
    [end(lo), end(hi)]
        .into_iter()
        .flatten()
        .min_by(|x, y| x.sse.total_cmp(&y.sse))
}

/// Radial sum of squares of the interior vertices of `(k, i)` for the circle
/// with center offset `h`; exposed for checking the line search.
pub fn radial_sse(poly: &Polyline, k: usize, i: usize, h: f64) -> f64 {
    let chord = Chord::new(poly[k], poly[i]);
    ArcProblem {
        chord,
        mid: chord.a.lerp(chord.b, 0.5),
        interior: &poly.vertices()[k + 1..i],
    }
    .radial_sse(h)
}

/// Counters for one solver run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FitStats {
    pub segment_fits: u64,
    pub arc_fits: u64,
    /// Number of `(k, i, kind)` triples fitted more than once. Only counted
    /// when duplicate tracking is enabled.
    pub duplicate_pairs: u64,
}

/// Fit queries bound to one polyline and tolerance, with per-run instrumentation.
pub struct Fitter<'a> {
    poly: &'a Polyline,
    tol: f64,
    opts: FitOptions,
    stats: FitStats,
    seen: Option<HashSet<(u32, u32, bool)>>,
    repeated: Option<HashSet<(u32, u32, bool)>>,
}

impl<'a> Fitter<'a> {
    pub fn new(poly: &'a Polyline, tol: f64, opts: FitOptions, track_duplicates: bool) -> Self {
        Fitter {
            poly,
            tol,
            opts,
            stats: FitStats::default(),
            seen: track_duplicates.then(HashSet::new),
            repeated: track_duplicates.then(HashSet::new),
        }
    }

    pub fn polyline(&self) -> &'a Polyline {
        self.poly
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn record(&mut self, k: usize, i: usize, arc: bool) {
        if let (Some(seen), Some(repeated)) = (self.seen.as_mut(), self.repeated.as_mut()) {
            let key = (k as u32, i as u32, arc);
            if !seen.insert(key) && repeated.insert(key) {
                self.stats.duplicate_pairs += 1;
            }
        }
    }

    pub fn segment(&mut self, k: usize, i: usize) -> Option<SegmentFit> {
        self.stats.segment_fits += 1;
        self.record(k, i, false);
        fit_segment(self.poly, k, i, self.tol)
    }

    pub fn arc(&mut self, k: usize, i: usize) -> Option<ArcFit> {
        self.stats.arc_fits += 1;
        self.record(k, i, true);
        fit_arc(self.poly, k, i, self.tol, self.opts)
    }

    /// Cumulative counters since construction.
    pub fn count_fit_calls(&self) -> FitStats {
        self.stats
    }
}
