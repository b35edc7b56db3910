//! Benchmarks for the polyarc solvers.

use polyarc::corpus::{generate, CorpusKind, CorpusSpec};
use polyarc::Polyline;

/// Tolerance used by the reference timing runs.
pub const BENCH_TOLERANCE: f64 = 0.06;

/// The default-seed corpus with `points` vertices per primitive.
pub fn corpus(kind: CorpusKind, points: usize) -> Polyline {
    generate(&CorpusSpec::new(kind, points)).expect("reference corpus spec is valid")
}
