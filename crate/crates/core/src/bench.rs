//! Timing harness comparing the DP baseline with the jump solver on the
//! synthetic corpora.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::corpus::{generate, CorpusKind, CorpusSpec};
use crate::error::BenchError;
use crate::reach::ReachTables;
use crate::solver::{dp_compress, jump_compress, SolverConfig};

/// Points-per-primitive grid of the reference timing plots.
pub const REFERENCE_SIZES: [usize; 21] = [
    8, 10, 11, 13, 16, 19, 23, 27, 32, 38, 45, 54, 64, 76, 91, 108, 128, 152, 181, 215, 256,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dp,
    Jump,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Jump => "jump",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub points_per_primitive: usize,
    pub algorithm: Algorithm,
    pub mean_seconds: f64,
    pub repeats: usize,
    pub total_penalty: u32,
    pub total_sse: f64,
    pub fit_call_count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub kind: CorpusKind,
    pub tolerance: f64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    fn row(&self, size: usize, algorithm: Algorithm) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.points_per_primitive == size && r.algorithm == algorithm)
    }

    /// Mean DP time over mean jump time at `size`.
    pub fn ratio(&self, size: usize) -> Option<f64> {
        Some(
            self.row(size, Algorithm::Dp)?.mean_seconds
                / self.row(size, Algorithm::Jump)?.mean_seconds,
        )
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "points_per_primitive,algorithm,mean_seconds,repeats,total_penalty,total_sse,fit_call_count"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.points_per_primitive,
                r.algorithm.name(),
                r.mean_seconds,
                r.repeats,
                r.total_penalty,
                r.total_sse,
                r.fit_call_count
            )?;
        }
        Ok(())
    }

    /// Line chart of mean time against corpus size, one polyline per algorithm.
    pub fn render_svg(&self) -> String {
        let (w, h, m) = (640.0, 400.0, 50.0);
        let max_x = self
            .rows
            .iter()
            .map(|r| r.points_per_primitive)
            .max()
            .unwrap_or(1) as f64;
        let max_y = self
            .rows
            .iter()
            .map(|r| r.mean_seconds)
            .fold(1e-9, f64::max);
        let sx = |x: f64| m + (w - 2.0 * m) * x / max_x;
        let sy = |y: f64| h - m - (h - 2.0 * m) * y / max_y;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">"#
        );
        let _ = writeln!(
            s,
            r#"<path d="M {m} {} L {} {} M {m} {} L {m} {m}" stroke="black" fill="none"/>"#,
            h - m,
            w - m,
            h - m,
            h - m
        );
        for (alg, color) in [(Algorithm::Dp, "#36c"), (Algorithm::Jump, "#3a3")] {
            let pts: Vec<String> = self
                .rows
                .iter()
                .filter(|r| r.algorithm == alg)
                .map(|r| {
                    format!(
                        "{:.2},{:.2}",
                        sx(r.points_per_primitive as f64),
                        sy(r.mean_seconds)
                    )
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="2"><title>{}</title></polyline>"#,
                pts.join(" "),
                alg.name()
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">points per primitive</text>"#,
            w / 2.0,
            h - 10.0
        );
        let _ = writeln!(s, r#"<text x="10" y="20">max {max_y:.3} s</text>"#);
        let _ = writeln!(s, "</svg>");
        s
    }
}

/// Times both solvers on the 100-primitive corpus of each size. The jump
/// timing includes building its reach tables, the DP timing its backward
/// tables. Fails if the two solvers disagree.
pub fn run_bench(
    kind: CorpusKind,
    sizes: &[usize],
    repeats: usize,
    tol: f64,
) -> Result<BenchReport, BenchError> {
    if sizes.is_empty() || repeats == 0 {
        return Err(BenchError::Empty);
    }
    let cfg = SolverConfig::default();
    let mut rows = Vec::with_capacity(2 * sizes.len());
    for &size in sizes {
        let poly = generate(&CorpusSpec::new(kind, size))?;
        let mut dp_time = 0.0;
        let mut jump_time = 0.0;
        let mut last = None;
        for _ in 0..repeats {
            let t = Instant::now();
            let dp = dp_compress(&poly, tol, &cfg)?;
            dp_time += t.elapsed().as_secs_f64();

            let t = Instant::now();
            let tables = ReachTables::compute(&poly, tol);
            let jump = jump_compress(&poly, tol, &cfg, &tables)?;
            jump_time += t.elapsed().as_secs_f64();

            let (a, b) = (&dp.compressed, &jump.compressed);
            let sse_close =
                (a.total_sse - b.total_sse).abs() <= 1e-9 * a.total_sse.abs().max(1e-300);
            if a.total_penalty != b.total_penalty || !sse_close {
                return Err(BenchError::Disagreement {
                    size,
                    dp: (a.total_penalty, a.total_sse),
                    jump: (b.total_penalty, b.total_sse),
                });
            }
            last = Some((dp, jump));
        }
        let (dp, jump) = last.expect("at least one repeat");
        log::info!(
            "{kind} {size}: dp {:.4}s jump {:.4}s",
            dp_time / repeats as f64,
            jump_time / repeats as f64
        );
        for (algorithm, time, sol) in [
            (Algorithm::Dp, dp_time, dp),
            (Algorithm::Jump, jump_time, jump),
        ] {
            rows.push(BenchRow {
                points_per_primitive: size,
                algorithm,
                mean_seconds: time / repeats as f64,
                repeats,
                total_penalty: sol.compressed.total_penalty,
                total_sse: sol.compressed.total_sse,
                fit_call_count: sol.stats.fits.segment_fits + sol.stats.fits.arc_fits,
            });
        }
    }
    Ok(BenchReport {
        kind,
        tolerance: tol,
        rows,
    })
}
