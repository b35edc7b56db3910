use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("a polyline needs at least 2 distinct vertices, found {found}")]
    TooFewVertices { found: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("arc anchors coincide")]
    DegenerateChord,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("segment and arc penalties must be at least 1 (got {seg} and {arc})")]
    Penalty { seg: u32, arc: u32 },
    #[error("an arc needs at least 3 vertices, got {0}")]
    MinArcVertices(usize),
    #[error("reach tables cover {tables} vertices but the polyline has {vertices}")]
    TableSize { tables: usize, vertices: usize },
    #[error("invalid corpus: {0}")]
    Corpus(String),
}

/// Internal consistency failures of a solver run. Any of these indicates a bug.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("no compression reaches the last vertex")]
    NoSolution,
    #[error("predecessor chain broken at vertex {0}")]
    BrokenChain(usize),
    #[error("recursion depth {depth} exceeds the bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
    #[error("penalty level {0} exceeds the trivial upper bound")]
    RunawayPenalty(u32),
    #[error("reconstructed error {reconstructed} disagrees with recorded error {recorded}")]
    ErrorMismatch { reconstructed: f64, recorded: f64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("geojson: {0}")]
    GeoJson(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("no sizes or repeats to run")]
    Empty,
    #[error(
        "solvers disagree at size {size}: dp (penalty {}, sse {}) vs jump (penalty {}, sse {})",
        dp.0, dp.1, jump.0, jump.1
    )]
    Disagreement {
        size: usize,
        dp: (u32, f64),
        jump: (u32, f64),
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("reference search is limited to {limit} vertices, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}
