//! Planar geometry: points, polylines, anchored segments and arcs, and the
//! vertex-to-primitive distance measures used by fitting and verification.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Largest allowed ratio `|h| / L` between an arc's center offset and its
/// chord length. Flatter arcs are treated as segments.
pub const H_MAX: f64 = 1e6;

/// Consecutive vertices closer than this fraction of the bounding-box
/// diagonal are collapsed on ingestion.
pub const DUPLICATE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An ordered vertex sequence with at least two vertices, all finite, and no
/// two consecutive vertices coincident.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
    collapsed: usize,
}

impl Polyline {
    /// Builds a polyline, collapsing consecutive near-duplicate vertices.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        let eps = DUPLICATE_EPS * bbox_diagonal(&vertices);
        let original = vertices.len();
        let mut out: Vec<Point> = Vec::with_capacity(original);
        for p in vertices {
            match out.last() {
                Some(&q) if q.dist(p) < eps || q == p => {}
                _ => out.push(p),
            }
        }
        if out.len() < 2 {
            return Err(GeometryError::TooFewVertices { found: out.len() });
        }
        let collapsed = original - out.len();
        Ok(Polyline {
            vertices: out,
            collapsed,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of vertices dropped as consecutive duplicates during construction.
    pub fn collapsed(&self) -> usize {
        self.collapsed
    }

    /// The same vertices in reverse order.
    pub fn reversed(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline {
            vertices,
            collapsed: 0,
        }
    }
}

impl std::ops::Index<usize> for Polyline {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.vertices[i]
    }
}

fn bbox_diagonal(pts: &[Point]) -> f64 {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    if pts.is_empty() {
        0.0
    } else {
        (hi - lo).norm()
    }
}

/// Maximum allowed distance between a source vertex and its primitive.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(value: f64) -> Result<Self, GeometryError> {
        if value.is_finite() && value > 0.0 {
            Ok(Tolerance(value))
        } else {
            Err(GeometryError::BadTolerance(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnchoredSegment {
    pub start: usize,
    pub end: usize,
}

/// Direction in which an arc is traversed from its start anchor to its end anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    /// Counter-clockwise; the arc bulges to the right of the chord.
    Ccw,
    /// Clockwise; the arc bulges to the left of the chord.
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }
}

/// A circular arc through two source vertices.
///
/// `offset` is the signed distance of the circle center from the chord
/// midpoint along the chord's left normal. Together with the orientation it
/// selects one arc of the circle. A clockwise arc flattens onto its chord as
/// `offset -> -inf`, is a semicircle at `offset == 0` and closes into a full
/// circle as `offset -> +inf`; counter-clockwise arcs mirror this.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchoredArc {
    pub start: usize,
    pub end: usize,
    pub offset: f64,
    pub orientation: Orientation,
}

impl AnchoredArc {
    /// The minor arc of the circle with the given center offset. A center on
    /// the left of the chord gives an arc bulging right, and vice versa; a
    /// zero offset picks the right-bulging semicircle.
    pub fn minor(start: usize, end: usize, offset: f64) -> Self {
        let orientation = if offset >= 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        };
        AnchoredArc {
            start,
            end,
            offset,
            orientation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Primitive {
    Segment(AnchoredSegment),
    Arc(AnchoredArc),
}

impl Primitive {
    pub fn start(&self) -> usize {
        match self {
            Primitive::Segment(s) => s.start,
            Primitive::Arc(a) => a.start,
        }
    }

    pub fn end(&self) -> usize {
        match self {
            Primitive::Segment(s) => s.end,
            Primitive::Arc(a) => a.end,
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, Primitive::Arc(_))
    }
}

/// Euclidean distance from `q` to the closed segment `[a, b]`.
pub fn dist_point_segment(q: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return q.dist(a);
    }
    let t = (q - a).dot(ab) / len_sq;
    if t <= 0.0 {
        q.dist(a)
    } else if t >= 1.0 {
        q.dist(b)
    } else {
        // perpendicular distance; cross product is better conditioned than
        // subtracting the projected point
        ((q - a).cross(ab)).abs() / len_sq.sqrt()
    }
}

/// Resolved circle and sweep of an anchored arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcGeometry {
    pub start: Point,
    pub end: Point,
    pub center: Point,
    pub radius: f64,
    pub orientation: Orientation,
    /// Swept angle in radians, in `(0, 2π)`.
    pub sweep: f64,
    start_angle: f64,
    mid: Point,
    normal: Point,
    offset: f64,
    quarter_chord_sq: f64,
}

impl ArcGeometry {
    pub fn from_anchors(
        start: Point,
        end: Point,
        offset: f64,
        orientation: Orientation,
    ) -> Result<Self, GeometryError> {
        let chord = end - start;
        let len = chord.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(GeometryError::DegenerateChord);
        }
        let normal = chord.perp() * (1.0 / len);
        let mid = start.lerp(end, 0.5);
        let half = 0.5 * len;
        let center = mid + normal * offset;
        let radius = offset.hypot(half);
        let half_sweep = match orientation {
            Orientation::Cw => half.atan2(-offset),
            Orientation::Ccw => half.atan2(offset),
        };
        Ok(ArcGeometry {
            start,
            end,
            center,
            radius,
            orientation,
            sweep: 2.0 * half_sweep,
            start_angle: (start - center).angle(),
            mid,
            normal,
            offset,
            quarter_chord_sq: half * half,
        })
    }

    /// Signed tangent angle at the start anchor, measured from the chord.
    /// Positive values bulge to the left of the chord.
    pub fn tangent_angle(&self) -> f64 {
        -self.orientation.sign() * 0.5 * self.sweep
    }

    /// Signed radial residual `|q - center| - radius`, evaluated without
    /// cancellation for very large radii.
    #[inline]
    pub fn radial_residual(&self, q: Point) -> f64 {
        let u = q - self.mid;
        let power = u.norm_sq() - 2.0 * self.offset * u.dot(self.normal) - self.quarter_chord_sq;
        power / ((q - self.center).norm() + self.radius)
    }

    /// Angle of `q` around the center, measured from the start anchor in the
    /// traversal direction, in `[0, 2π)`.
    #[inline]
    fn raw_param(&self, q: Point) -> f64 {
        let a = self.orientation.sign() * ((q - self.center).angle() - self.start_angle);
        let a = a.rem_euclid(TAU);
        if a >= TAU {
            0.0
        } else {
            a
        }
    }

    /// Angular parameter of the closest point of the arc to `q`, clamped to
    /// `[0, sweep]`.
    pub fn project_param(&self, q: Point) -> f64 {
        let a = self.raw_param(q);
        if a <= self.sweep {
            a
        } else if q.dist(self.start) <= q.dist(self.end) {
            0.0
        } else {
            self.sweep
        }
    }

    /// Exact distance from `q` to the closed arc.
    pub fn distance(&self, q: Point) -> f64 {
        self.distance_and_param(q).0
    }

    /// Distance from `q` to the closed arc together with the clamped angular
    /// parameter of its projection.
    #[inline]
    pub fn distance_and_param(&self, q: Point) -> (f64, f64) {
        let a = self.raw_param(q);
        if a <= self.sweep {
            (self.radial_residual(q).abs(), a)
        } else {
            let ds = q.dist(self.start);
            let de = q.dist(self.end);
            if ds <= de {
                (ds, 0.0)
            } else {
                (de, self.sweep)
            }
        }
    }

    /// Point on the arc at angular parameter `t` in `[0, sweep]`.
    pub fn point_at(&self, t: f64) -> Point {
        let ang = self.start_angle + self.orientation.sign() * t;
        self.center + Point::new(ang.cos(), ang.sin()) * self.radius
    }

    /// Height of the arc's apex above its chord.
    pub fn sagitta(&self) -> f64 {
        match self.orientation {
            Orientation::Cw => self.radius + self.offset,
            Orientation::Ccw => self.radius - self.offset,
        }
    }
}

/// Center, radius and sweep direction of an anchored arc.
pub fn arc_geometry(arc: &AnchoredArc, poly: &Polyline) -> Result<ArcGeometry, GeometryError> {
    ArcGeometry::from_anchors(poly[arc.start], poly[arc.end], arc.offset, arc.orientation)
}

/// Exact distance from `q` to an anchored arc of `poly`.
pub fn dist_point_arc(q: Point, arc: &AnchoredArc, poly: &Polyline) -> Result<f64, GeometryError> {
    Ok(arc_geometry(arc, poly)?.distance(q))
}

/// Evaluates per-vertex deviations of the interior vertices of a primitive.
fn interior_deviations<'a>(
    poly: &'a Polyline,
    prim: &Primitive,
) -> Result<Box<dyn Iterator<Item = (f64, f64)> + 'a>, GeometryError> {
    let (k, i) = (prim.start(), prim.end());
    let inner = &poly.vertices()[k + 1..i];
    match *prim {
        Primitive::Segment(_) => {
            let (a, b) = (poly[k], poly[i]);
            Ok(Box::new(inner.iter().map(move |&q| {
                let d = dist_point_segment(q, a, b);
                (d, d * d)
            })))
        }
        Primitive::Arc(ref arc) => {
            let g = arc_geometry(arc, poly)?;
            Ok(Box::new(inner.iter().map(move |&q| {
                let r = g.radial_residual(q);
                (g.distance(q), r * r)
            })))
        }
    }
}

/// Largest distance from an interior vertex to the primitive; zero when the
/// primitive spans two adjacent vertices.
pub fn max_deviation(poly: &Polyline, prim: &Primitive) -> Result<f64, GeometryError> {
    Ok(interior_deviations(poly, prim)?.fold(0.0, |m, (d, _)| m.max(d)))
}

/// Sum of squared deviations of the interior vertices. Arcs use the radial
/// residual, segments the exact distance.
pub fn sse(poly: &Polyline, prim: &Primitive) -> Result<f64, GeometryError> {
    Ok(interior_deviations(poly, prim)?.map(|(_, s)| s).sum())
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn poly(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn segment_distance_cases() {
        let a = Point::new(-1.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert_eq!(dist_point_segment(Point::new(0.0, 1.0), a, b), 1.0);
        assert_eq!(dist_point_segment(Point::new(2.0, 0.0), a, b), 1.0);
        assert_eq!(
            dist_point_segment(
                Point::new(0.0, 0.0),
                Point::new(0.0, 0.0),
                Point::new(5.0, 0.0)
            ),
            0.0
        );
    }

    #[test]
    fn semicircle_geometry() {
        let g = ArcGeometry::from_anchors(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            0.0,
            Orientation::Cw,
        )
        .unwrap();
        assert_eq!(g.center, Point::new(0.0, 0.0));
        assert_eq!(g.radius, 1.0);
        assert_relative_eq!(g.sweep, PI);
        // upper semicircle passes through (0, 1)
        let apex = g.point_at(0.5 * g.sweep);
        assert_relative_eq!(apex.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(apex.y, 1.0, epsilon = 1e-15);
        assert_relative_eq!(g.sagitta(), 1.0);
    }

    #[test]
    fn flat_arc_radius_grows_with_offset() {
        let a = Point::new(-1.0, 0.0);
        let b = Point::new(1.0, 0.0);
        let mut prev = 0.0;
        for h in [1.0, 10.0, 1e3, 1e6] {
            let g = ArcGeometry::from_anchors(a, b, h, Orientation::Ccw).unwrap();
            assert!(g.radius > prev);
            prev = g.radius;
            assert!(g.sagitta() < 1.0 / h);
        }
    }

    #[test]
    fn quarter_circle_offset() {
        // anchors (-1,0) and (0,1) with the center at the origin
        let a = Point::new(-1.0, 0.0);
        let b = Point::new(0.0, 1.0);
        let mid = a.lerp(b, 0.5);
        let n = (b - a).perp() * (1.0 / (b - a).norm());
        let h = (Point::new(0.0, 0.0) - mid).dot(n);
        assert_relative_eq!(h.abs(), 2f64.sqrt() / 2.0, epsilon = 1e-15);
        let g = ArcGeometry::from_anchors(a, b, h, Orientation::Cw).unwrap();
        assert_relative_eq!(g.radius, 1.0, epsilon = 1e-15);
        assert!(g.center.norm() < 1e-15);
    }

    #[test]
    fn arc_distance_cases() {
        let g = ArcGeometry::from_anchors(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            0.0,
            Orientation::Cw,
        )
        .unwrap();
        assert_relative_eq!(g.distance(Point::new(0.0, 0.5)), 0.5, epsilon = 1e-15);
        let on = Point::new((0.3f64).cos(), (0.3f64).sin());
        assert!(g.distance(on) < 1e-15);
        // below the chord the nearest points are the anchors
        assert_relative_eq!(
            g.distance(Point::new(0.0, -1.0)),
            2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn v_shape_deviation() {
        let s = 3.0 / 2f64.sqrt();
        let pts: Vec<(f64, f64)> = (0..=20)
            .map(|j| {
                let j = j as f64;
                (j * s, -(10.0 - (j - 10.0).abs()) * s)
            })
            .collect();
        let p = poly(&pts);
        let seg = Primitive::Segment(AnchoredSegment { start: 0, end: 20 });
        assert_relative_eq!(
            max_deviation(&p, &seg).unwrap(),
            10.0 * 3.0 / 2f64.sqrt(),
            epsilon = 1e-12
        );
        let half = Primitive::Segment(AnchoredSegment { start: 0, end: 10 });
        assert!(max_deviation(&p, &half).unwrap() < 1e-12);
        assert!(sse(&p, &half).unwrap() < 1e-24);
    }

    #[test]
    fn circle_run_arc_fits_exactly() {
        let pts: Vec<(f64, f64)> = (0..=18)
            .map(|j| {
                let a = PI - (j as f64) * 5f64.to_radians();
                (a.cos(), a.sin())
            })
            .collect();
        let p = poly(&pts);
        let a = p[0];
        let b = p[18];
        let n = (b - a).perp() * (1.0 / (b - a).norm());
        let h = (Point::new(0.0, 0.0) - a.lerp(b, 0.5)).dot(n);
        let arc = Primitive::Arc(AnchoredArc {
            start: 0,
            end: 18,
            offset: h,
            orientation: Orientation::Cw,
        });
        assert!(max_deviation(&p, &arc).unwrap() < 1e-12);
        assert!(sse(&p, &arc).unwrap() < 1e-24);
    }

    #[test]
    fn sse_radial_arithmetic() {
        // interior vertices off the unit circle by 0.01, -0.02, 0.03
        let mut pts = vec![(-1.0, 0.0)];
        for (ang, res) in [(2.5f64, 0.01), (1.5, -0.02), (0.5, 0.03)] {
            let r = 1.0 + res;
            pts.push((r * ang.cos(), r * ang.sin()));
        }
        pts.push((1.0, 0.0));
        let p = poly(&pts);
        let arc = Primitive::Arc(AnchoredArc {
            start: 0,
            end: 4,
            offset: 0.0,
            orientation: Orientation::Cw,
        });
        assert_relative_eq!(sse(&p, &arc).unwrap(), 0.0014, epsilon = 1e-15);
    }

    #[test]
    fn collapses_duplicates_and_rejects_short() {
        let p = poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (1.0, 1e-20), (2.0, 0.0)]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.collapsed(), 2);
        assert!(Polyline::new(vec![Point::new(1.0, 1.0), Point::new(1.0, 1.0)]).is_err());
        assert!(Polyline::new(vec![Point::new(f64::NAN, 1.0), Point::new(1.0, 1.0)]).is_err());
    }

    #[test]
    fn wrap_angle_range() {
        assert_relative_eq!(wrap_angle(3.0 * PI), PI);
        assert_relative_eq!(wrap_angle(-PI), PI);
        assert_relative_eq!(wrap_angle(0.5), 0.5);
        assert_relative_eq!(wrap_angle(-7.0), -7.0 + TAU);
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::new(x, y))
    }

    fn brute_arc_distance(g: &ArcGeometry, q: Point) -> f64 {
        let samples = 100_000;
        (0..=samples)
            .map(|s| g.point_at(g.sweep * s as f64 / samples as f64).dist(q))
            .fold(f64::INFINITY, f64::min)
    }

    proptest! {
        #[test]
        fn segment_distance_symmetric(q in arb_point(), a in arb_point(), b in arb_point()) {
            prop_assume!(a.dist(b) > 1e-6);
            let d1 = dist_point_segment(q, a, b);
            let d2 = dist_point_segment(q, b, a);
            prop_assert!((d1 - d2).abs() <= 1e-12 * (1.0 + d1));
        }

        #[test]
        fn anchors_on_circle(a in arb_point(), b in arb_point(), h in -50.0..50.0f64, cw in any::<bool>()) {
            prop_assume!(a.dist(b) > 1e-3);
            let o = if cw { Orientation::Cw } else { Orientation::Ccw };
            let g = ArcGeometry::from_anchors(a, b, h, o).unwrap();
            let l = a.dist(b);
            prop_assert!(((a - g.center).norm() - g.radius).abs() <= 1e-12 * l.max(g.radius));
            prop_assert!(((b - g.center).norm() - g.radius).abs() <= 1e-12 * l.max(g.radius));
            let end = g.point_at(g.sweep);
            prop_assert!(end.dist(b) <= 1e-9 * g.radius.max(1.0));
        }

        #[test]
        fn arc_distance_matches_sampling(
            a in arb_point(), b in arb_point(), h in -5.0..5.0f64, cw in any::<bool>(), q in arb_point()
        ) {
            prop_assume!(a.dist(b) > 0.5);
            let o = if cw { Orientation::Cw } else { Orientation::Ccw };
            let g = ArcGeometry::from_anchors(a, b, h, o).unwrap();
            let d = g.distance(q);
            let brute = brute_arc_distance(&g, q);
            // sampling overestimates by at most half the sample spacing squared over the distance
            let spacing = g.radius * g.sweep / 100_000.0;
            prop_assert!(d <= brute + 1e-9);
            prop_assert!(brute - d <= 1e-6 * d + 1e-9 + spacing * spacing / (d + spacing));
        }

        #[test]
        fn deviation_invariant_under_rigid_motion(
            seed_pts in proptest::collection::vec(arb_point(), 6),
            ang in -3.0..3.0f64, tx in -100.0..100.0f64, ty in -100.0..100.0f64, h in -3.0..3.0f64
        ) {
            let p = Polyline::new(seed_pts.clone()).unwrap();
            prop_assume!(p.len() == 6);
            let (s, c) = ang.sin_cos();
            let moved = Polyline::new(seed_pts.iter().map(|q| Point::new(c * q.x - s * q.y + tx, s * q.x + c * q.y + ty)).collect()).unwrap();
            for prim in [
                Primitive::Segment(AnchoredSegment { start: 0, end: 5 }),
                Primitive::Arc(AnchoredArc { start: 0, end: 5, offset: h, orientation: Orientation::Ccw }),
            ] {
                let m1 = max_deviation(&p, &prim).unwrap();
                let m2 = max_deviation(&moved, &prim).unwrap();
                prop_assert!((m1 - m2).abs() <= 1e-9 * m1.max(1.0));
                let s1 = sse(&p, &prim).unwrap();
                let s2 = sse(&moved, &prim).unwrap();
                prop_assert!((s1 - s2).abs() <= 1e-9 * s1.max(1.0));
                prop_assert!(s1 >= 0.0);
                if m1 == 0.0 {
                    prop_assert!(s1 == 0.0);
                }
            }
        }
    }
}
