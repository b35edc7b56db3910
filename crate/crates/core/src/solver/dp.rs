//! Dynamic-programming baseline: every vertex is solved in order by scanning
//! all admissible start vertices.

use crate::error::SolverError;
use crate::fit::Fitter;
use crate::geom::Polyline;
use crate::reach::ReachTables;

use super::{improves, reconstruct, Link, Solution, SolveStats, SolverConfig};

/// Solves with backward reach tables computed on the spot.
pub fn dp_compress(poly: &Polyline, tol: f64, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    let tables = ReachTables::backward_only(poly, tol);
    dp_compress_with_tables(poly, tol, cfg, &tables)
}

/// Solves using the backward entries of `tables` to bound the start scan.
pub fn dp_compress_with_tables(
    poly: &Polyline,
    tol: f64,
    cfg: &SolverConfig,
    tables: &ReachTables,
) -> Result<Solution, SolverError> {
    cfg.penalties.validate()?;
    let n = poly.len();
    tables.validate(n)?;
    let pc = cfg.penalties;
    let mut fitter = Fitter::new(poly, tol, cfg.fit, cfg.track_duplicates);
    let mut penalty = vec![0u32; n];
    let mut error = vec![0.0f64; n];
    let mut pred: Vec<Option<Link>> = vec![None; n];

    for i in 1..n {
        let mut best: Option<(u32, f64, Link)> = None;
        let mut offer = |pen: u32, err: f64, link: Link| match &best {
            Some((bp, be, bl)) if pen > *bp || (pen == *bp && !improves(err, &link, *be, bl)) => {}
            _ => best = Some((pen, err, link)),
        };
        if i + 1 >= pc.min_arc_vertices {
            let hi = i + 1 - pc.min_arc_vertices;
            let lo = tables.bw_arc[i];
            for k in (lo..=hi).rev() {
                if let Some(f) = fitter.arc(k, i) {
                    offer(penalty[k] + pc.p_arc, error[k] + f.sse, Link::arc(k, f));
                }
            }
        }
        for k in (tables.bw_seg[i]..i).rev() {
            if let Some(f) = fitter.segment(k, i) {
                offer(penalty[k] + pc.p_seg, error[k] + f.sse, Link::segment(k, f));
            }
        }
        let (p, e, link) = best.ok_or(SolverError::NoSolution)?;
        penalty[i] = p;
        error[i] = e;
        pred[i] = Some(link);
    }

    let compressed = reconstruct(&pred, error[n - 1], &pc)?;
    debug_assert_eq!(compressed.total_penalty, penalty[n - 1]);
    Ok(Solution {
        compressed,
        stats: SolveStats {
            fits: fitter.count_fit_calls(),
            ..SolveStats::default()
        },
        trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::geom::{arc_geometry, Primitive};
    use crate::solver::fixtures::{circle_run, v_shape};

    #[test]
    fn v_shape_two_segments() {
        let s = dp_compress(&v_shape(), 2.0, &SolverConfig::default()).unwrap();
        let c = &s.compressed;
        assert_eq!(c.total_penalty, 4);
        assert_eq!(c.primitives.len(), 2);
        assert_eq!(c.breakpoints(), vec![10]);
        assert!(c.total_sse < 1e-20);
        assert!(c.primitives.iter().all(|p| !p.primitive.is_arc()));
    }

    #[test]
    fn two_vertices() {
        let p = Polyline::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)]).unwrap();
        let s = dp_compress(&p, 0.1, &SolverConfig::default()).unwrap();
        assert_eq!(s.compressed.total_penalty, 2);
        assert_eq!(s.compressed.total_sse, 0.0);
    }

    #[test]
    fn circle_run_one_arc() {
        let p = circle_run();
        let s = dp_compress(&p, 0.01, &SolverConfig::default()).unwrap();
        let c = &s.compressed;
        assert_eq!(c.total_penalty, 3);
        let Primitive::Arc(a) = c.primitives[0].primitive else {
            panic!("expected an arc")
        };
        let g = arc_geometry(&a, &p).unwrap();
        assert!(g.center.norm() < 1e-6);
        assert!((g.radius - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = SolverConfig::default();
        cfg.penalties.p_seg = 0;
        assert!(dp_compress(&v_shape(), 2.0, &cfg).is_err());
        cfg.penalties.p_seg = 2;
        cfg.penalties.min_arc_vertices = 2;
        assert!(dp_compress(&v_shape(), 2.0, &cfg).is_err());
    }
}
