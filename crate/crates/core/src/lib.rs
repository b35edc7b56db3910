//! Optimal compression of polylines into chains of line segments and circular arcs.

pub mod bench;
pub mod corpus;
pub mod error;
pub mod fit;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod reach;
pub mod solver;

pub use error::{BenchError, ConfigError, GeometryError, IoError, OracleError, SolverError};
pub use fit::{fit_arc, fit_segment, ArcFit, FitOptions, FitStats, Fitter, SegmentFit};
pub use geom::{AnchoredArc, AnchoredSegment, Orientation, Point, Polyline, Primitive, Tolerance};
pub use reach::ReachTables;
pub use solver::{
    dp_compress, jump_compress, CompressedPolyline, FittedPrimitive, PenaltyConfig, Solution,
    SolverConfig,
};
