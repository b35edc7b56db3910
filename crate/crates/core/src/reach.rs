//! Forward and backward reach tables.
//!
//! `fw_seg[i]` is an index past which no segment starting at `i` can fit, and
//! `bw_seg[i]` an index before which no segment ending at `i` can start; the
//! arc tables are the same for arcs. Entries only need to be sound, not tight.
//! Forward tables are made non-decreasing, which the jump solver relies on
//! when it jumps from an over-estimated last position.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::ConfigError;
use crate::fit::AngleRange;
use crate::geom::{Point, Polyline};

/// Relative widening of every reach constraint, so near-tangent cases
/// resolve toward feasible.
const SLACK: f64 = 1e-9;

/// Number of sampled center directions for the arc relaxation.
const ARC_DIRECTIONS: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachTables {
    pub fw_seg: Vec<usize>,
    pub fw_arc: Vec<usize>,
    pub bw_seg: Vec<usize>,
    pub bw_arc: Vec<usize>,
}

impl ReachTables {
    pub fn compute(poly: &Polyline, tol: f64) -> Self {
        let (bw_seg, bw_arc) = compute_bw(poly, tol);
        ReachTables {
            fw_seg: compute_fw_seg(poly, tol),
            fw_arc: compute_fw_arc(poly, tol),
            bw_seg,
            bw_arc,
        }
    }

    /// Tables that exclude nothing.
    pub fn loosest(n: usize) -> Self {
        ReachTables {
            fw_seg: vec![n - 1; n],
            fw_arc: vec![n - 1; n],
            bw_seg: vec![0; n],
            bw_arc: vec![0; n],
        }
    }

    /// Real backward tables with the loosest forward tables, for solvers that
    /// only scan backward.
    pub fn backward_only(poly: &Polyline, tol: f64) -> Self {
        let n = poly.len();
        let (bw_seg, bw_arc) = compute_bw(poly, tol);
        ReachTables {
            fw_seg: vec![n - 1; n],
            fw_arc: vec![n - 1; n],
            bw_seg,
            bw_arc,
        }
    }

    pub fn len(&self) -> usize {
        self.fw_seg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fw_seg.is_empty()
    }

    /// Checks that the tables have the right length and shape for `n` vertices.
    pub fn validate(&self, n: usize) -> Result<(), ConfigError> {
        let lens = [
            self.fw_seg.len(),
            self.fw_arc.len(),
            self.bw_seg.len(),
            self.bw_arc.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(ConfigError::TableSize {
                tables: lens[0],
                vertices: n,
            });
        }
        let ok = (0..n).all(|i| {
            self.fw_seg[i] < n
                && self.fw_arc[i] < n
                && self.fw_seg[i] >= (i + 1).min(n - 1)
                && self.fw_arc[i] >= i
                && self.bw_seg[i] <= i.saturating_sub(1)
                && self.bw_arc[i] <= i
                && (i == 0
                    || (self.fw_seg[i] >= self.fw_seg[i - 1]
                        && self.fw_arc[i] >= self.fw_arc[i - 1]))
        });
        if ok {
            Ok(())
        } else {
            Err(ConfigError::TableSize {
                tables: n,
                vertices: n,
            })
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "vertex,fw_seg,fw_arc,bw_seg,bw_arc")?;
        for i in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{},{}",
                i, self.fw_seg[i], self.fw_arc[i], self.bw_seg[i], self.bw_arc[i]
            )?;
        }
        Ok(())
    }
}

fn prefix_max(v: &mut [usize]) {
    for i in 1..v.len() {
        v[i] = v[i].max(v[i - 1]);
    }
}

/// Reach of segments: a segment from `p_i` to `p_m` lies on a ray from `p_i`,
/// and a ray passes within `tol` of a vertex at distance `d > tol` only if
/// its direction is within `asin(tol / d)` of the vertex direction.
pub fn compute_fw_seg(poly: &Polyline, tol: f64) -> Vec<usize> {
    let n = poly.len();
    let pts = poly.vertices();
    let mut fw = vec![n - 1; n];
    for i in 0..n.saturating_sub(1) {
        let origin = pts[i];
        let mut range: Option<AngleRange> = None;
        for (m, &p) in pts.iter().enumerate().skip(i + 1) {
            let x = p - origin;
            let d = x.norm();
            if d <= tol {
                continue;
            }
            let half = ((tol / d).asin() * (1.0 + SLACK) + SLACK).min(0.5 * PI);
            let center = x.angle();
            let next = match range {
                None => Some(AngleRange {
                    lo: center - half,
                    hi: center + half,
                }),
                Some(r) => r.intersect(center, half),
            };
            match next {
                Some(r) => range = Some(r),
                None => {
                    fw[i] = m - 1;
                    break;
                }
            }
        }
    }
    prefix_max(&mut fw);
    fw
}

/// Reach of arcs. Circles through `p_i` are written as
/// `kappa |x|^2 = 2 x . nu(psi)` with `x` relative to `p_i`, `nu` the unit
/// direction of the center and `kappa` the signed curvature; lines are
/// `kappa = 0`. A vertex `x` with `|x| > tol` lies within `tol` of such a
/// circle (of radius at least `tol`) exactly when
/// `kappa in [(2 x.nu - 2 tol) / D, (2 x.nu + 2 tol) / D]`, `D = |x|^2 - tol^2`.
/// The bounds are Lipschitz in `psi`, so sampling `psi` and padding each
/// bound by its Lipschitz constant times half the sample spacing keeps every
/// feasible circle inside the relaxation. Circles smaller than `tol` stay
/// within `3 tol` of `p_i`, so vertices that close are skipped and the reach
/// never stops before the first vertex farther than that.
pub fn compute_fw_arc(poly: &Polyline, tol: f64) -> Vec<usize> {
    let n = poly.len();
    let pts = poly.vertices();
    let step = PI / ARC_DIRECTIONS as f64;
    let dirs: Vec<Point> = (0..=ARC_DIRECTIONS)
        .map(|k| {
            let (s, c) = (k as f64 * step).sin_cos();
            Point::new(c, s)
        })
        .collect();
    let band = 2.0 * tol * (1.0 + SLACK);
    let near = 3.0 * tol;
    let mut fw = vec![n - 1; n];
    let mut alive: Vec<(u32, f64, f64)> = Vec::with_capacity(dirs.len());
    for i in 0..n.saturating_sub(1) {
        let origin = pts[i];
        alive.clear();
        let mut started = false;
        let mut floor = i + 1;
        let mut escaped = false;
        for (m, &p) in pts.iter().enumerate().skip(i + 1) {
            let x = p - origin;
            let d_sq = x.norm_sq();
            if d_sq <= near * near {
                if !escaped {
                    floor = m;
                }
                continue;
            }
            escaped = true;
            let denom = d_sq - tol * tol;
            let pad = (2.0 * d_sq.sqrt() / denom) * 0.5 * step * (1.0 + SLACK);
            let bound = |nu: Point| {
                let c = 2.0 * x.dot(nu);
                ((c - band) / denom - pad, (c + band) / denom + pad)
            };
            if !started {
                started = true;
                alive.extend(dirs.iter().enumerate().map(|(k, &nu)| {
                    let (lo, hi) = bound(nu);
                    (k as u32, lo, hi)
                }));
            } else {
                alive.retain_mut(|(k, lo, hi)| {
                    let (l, h) = bound(dirs[*k as usize]);
                    *lo = lo.max(l);
                    *hi = hi.min(h);
                    *lo <= *hi
                });
            }
            if alive.is_empty() {
                fw[i] = (m - 1).max(floor);
                break;
            }
        }
    }
    prefix_max(&mut fw);
    fw
}

/// Backward tables from the forward construction on the reversed polyline.
pub fn compute_bw(poly: &Polyline, tol: f64) -> (Vec<usize>, Vec<usize>) {
    let rev = poly.reversed();
    let n = poly.len();
    let mirror = |fw: Vec<usize>| -> Vec<usize> { (0..n).map(|i| n - 1 - fw[n - 1 - i]).collect() };
    (
        mirror(compute_fw_seg(&rev, tol)),
        mirror(compute_fw_arc(&rev, tol)),
    )
}
