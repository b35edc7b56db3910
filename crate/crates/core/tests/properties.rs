mod common;

use common::rel_close;
use polyarc::oracle::{oracle_compress, oracle_reach, random_instances, Profile};
use polyarc::solver::dp_compress_with_tables;
use polyarc::{
    dp_compress, jump_compress, FitOptions, PenaltyConfig, Point, Polyline, ReachTables,
    SolverConfig,
};
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = Profile> {
    prop_oneof![
        Just(Profile::Walk),
        Just(Profile::Smooth),
        Just(Profile::Mixed)
    ]
}

fn instance(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Polyline, f64)> {
    (any::<u64>(), profile(), 0.0..1.0f64).prop_map(move |(seed, p, u)| {
        let tol = match p {
            Profile::Walk => 0.1 + 0.5 * u,
            Profile::Smooth => 0.025 + 0.075 * u,
            Profile::Mixed => 0.05 + 0.35 * u,
        };
        (random_instances(seed, 1, n.clone(), p).remove(0), tol)
    })
}

fn raw_points() -> impl Strategy<Value = Polyline> {
    prop::collection::vec((-4.0..4.0f64, -4.0..4.0f64), 2..40).prop_filter_map("degenerate", |v| {
        Polyline::new(v.into_iter().map(|(x, y)| Point::new(x, y)).collect()).ok()
    })
}

fn penalties() -> impl Strategy<Value = PenaltyConfig> {
    (1u32..5, 1u32..7, 3usize..7).prop_map(|(p_seg, p_arc, min_arc_vertices)| PenaltyConfig {
        p_seg,
        p_arc,
        min_arc_vertices,
    })
}

fn cfg(penalties: PenaltyConfig) -> SolverConfig {
    SolverConfig {
        penalties,
        track_duplicates: true,
        ..SolverConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jump_matches_dp((poly, tol) in instance(2..=90), pc in penalties()) {
        let cfg = cfg(pc);
        let d = dp_compress(&poly, tol, &cfg).unwrap();
        let t = ReachTables::compute(&poly, tol);
        let j = jump_compress(&poly, tol, &cfg, &t).unwrap();
        prop_assert_eq!(d.compressed.total_penalty, j.compressed.total_penalty);
        prop_assert!(rel_close(d.compressed.total_sse, j.compressed.total_sse, 1e-9));
        prop_assert_eq!(j.stats.fits.duplicate_pairs, 0);
    }

    #[test]
    fn results_independent_of_tables((poly, tol) in instance(2..=60)) {
        let cfg = cfg(PenaltyConfig::default());
        let loose = ReachTables::loosest(poly.len());
        let a = jump_compress(&poly, tol, &cfg, &ReachTables::compute(&poly, tol)).unwrap();
        let b = jump_compress(&poly, tol, &cfg, &loose).unwrap();
        let c = dp_compress_with_tables(&poly, tol, &cfg, &loose).unwrap();
        prop_assert_eq!(a.compressed.total_penalty, b.compressed.total_penalty);
        prop_assert_eq!(a.compressed.total_penalty, c.compressed.total_penalty);
        prop_assert!(rel_close(a.compressed.total_sse, b.compressed.total_sse, 1e-9));
        prop_assert!(rel_close(a.compressed.total_sse, c.compressed.total_sse, 1e-9));
    }

    #[test]
    fn arbitrary_points_stay_within_tolerance(poly in raw_points(), tol in 0.05..2.0f64) {
        let cfg = cfg(PenaltyConfig::default());
        let t = ReachTables::compute(&poly, tol);
        let j = jump_compress(&poly, tol, &cfg, &t).unwrap();
        let d = dp_compress(&poly, tol, &cfg).unwrap();
        prop_assert!(j.compressed.violations(&poly, tol).is_empty());
        prop_assert!(j.compressed.max_deviation() <= tol);
        prop_assert_eq!(j.compressed.total_penalty, d.compressed.total_penalty);
        let bp = j.compressed.breakpoints();
        prop_assert!(bp.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(bp.iter().all(|&b| b > 0 && b + 1 < poly.len()));
    }

    #[test]
    fn reversal_keeps_penalty((poly, tol) in instance(2..=60)) {
        let cfg = cfg(PenaltyConfig::default());
        let fwd = dp_compress(&poly, tol, &cfg).unwrap();
        let rev = poly.reversed();
        let back = jump_compress(&rev, tol, &cfg, &ReachTables::compute(&rev, tol)).unwrap();
        prop_assert_eq!(fwd.compressed.total_penalty, back.compressed.total_penalty);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn small_instances_match_oracle((poly, tol) in instance(4..=16), pc in penalties()) {
        let o = oracle_compress(&poly, tol, &pc, FitOptions::default()).unwrap();
        let j = jump_compress(&poly, tol, &cfg(pc), &ReachTables::compute(&poly, tol)).unwrap();
        prop_assert_eq!(o.penalty, j.compressed.total_penalty);
        prop_assert!(rel_close(o.sse, j.compressed.total_sse, 1e-6));
    }

    #[test]
    fn reach_tables_are_sound((poly, tol) in instance(5..=40)) {
        let t = ReachTables::compute(&poly, tol);
        for i in 0..poly.len() {
            let (seg, arc) = oracle_reach(&poly, tol, i).unwrap();
            prop_assert!(seg <= t.fw_seg[i], "segment reach at {}: {} > {}", i, seg, t.fw_seg[i]);
            prop_assert!(arc <= t.fw_arc[i], "arc reach at {}: {} > {}", i, arc, t.fw_arc[i]);
        }
    }
}
