//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by polygon, flow, braid, and cohomology operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Principal-branch logarithm requested at (or too near) -1.
    #[error("logarithm undefined near the antipode: trace = {trace}")]
    AntipodalLog { trace: f64 },

    /// Conjugacy class radius outside the open interval (0, pi).
    #[error("class radius {radius} outside (0, pi)")]
    BadRadius { radius: f64 },

    /// Fewer than three sides requested for a polygon.
    #[error("a polygon needs at least 3 sides, got {n}")]
    BadSideCount { n: usize },

    /// Closure solver exhausted its restart budget. Either the
    /// side-length vector is infeasible or the solver failed; the two
    /// are not distinguished.
    #[error("no closed tuple found after {restarts} restarts")]
    NoSolution { restarts: usize },

    /// Index outside the valid range for the anchoring tuple.
    #[error("index {index} out of range {min}..={max}")]
    BadIndex {
        index: usize,
        min: usize,
        max: usize,
    },

    /// Pair of indices violating the required ordering or range.
    #[error("index pair ({i}, {j}) invalid for n = {n}")]
    BadIndices { i: usize, j: usize, n: usize },

    /// Operation requires a closed tuple.
    #[error("tuple is not closed: residual = {residual}")]
    NotClosed { residual: f64 },

    /// Tuple lies on a geodesic; the reduced space is singular there.
    #[error("degenerate tuple: all edge axes parallel")]
    DegeneratePoint,

    /// Diagonal length at the boundary value 0 or pi; the length flow
    /// is undefined there.
    #[error("degenerate diagonal at prefix {j}: |f_j| = {f_abs}")]
    DegenerateDiagonal { j: usize, f_abs: f64 },

    /// Central group element where a class-angle expression degenerates.
    #[error("central group element: |trace| = {trace_abs}")]
    DegenerateElement { trace_abs: f64 },

    /// Cocycle pair anchored at different tuples.
    #[error("cocycles anchored at different tuples")]
    AnchorMismatch,

    /// Cocycle closure projection has no unique solution (degenerate
    /// anchor).
    #[error("cocycle closure constraint is rank-deficient")]
    ProjectionSingular,

    /// Braid word failed to parse.
    #[error("unrecognized braid token {token:?} at byte {offset}")]
    ParseWord { token: String, offset: usize },

    /// Invalid run configuration (CLI).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// File I/O failure (CLI).
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the CLI: 0 ok, 1 config/parse, 2 no
    /// solution, 3 degenerate, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoSolution { .. } => 2,
            Error::DegenerateDiagonal { .. }
            | Error::DegeneratePoint
            | Error::DegenerateElement { .. } => 3,
            _ => 1,
        }
    }

    /// Short machine-parsable kind tag, used on stderr by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AntipodalLog { .. } => "antipodal_log",
            Error::BadRadius { .. } => "bad_radius",
            Error::BadSideCount { .. } => "bad_side_count",
            Error::NoSolution { .. } => "no_solution",
            Error::BadIndex { .. } => "bad_index",
            Error::BadIndices { .. } => "bad_indices",
            Error::NotClosed { .. } => "not_closed",
            Error::DegeneratePoint => "degenerate_point",
            Error::DegenerateDiagonal { .. } => "degenerate_diagonal",
            Error::DegenerateElement { .. } => "degenerate_element",
            Error::AnchorMismatch => "anchor_mismatch",
            Error::ProjectionSingular => "projection_singular",
            Error::ParseWord { .. } => "parse_word",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
