use thiserror::Error;

/// Errors raised by every layer of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible groups: {left} vs {right}")]
    IncompatibleGroup { left: String, right: String },

    #[error("invalid group descriptor `{0}`")]
    InvalidDescriptor(String),

    #[error("invalid group element `{text}` for {descriptor}: {reason}")]
    InvalidElement {
        descriptor: String,
        text: String,
        reason: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error(
        "broken path at letter {position}: expected to start at `{expected}`, found `{found}`"
    )]
    BrokenPath {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("paths are not composable: target `{target}` of the first path differs from source `{source_vertex}` of the second")]
    NonComposable {
        target: String,
        source_vertex: String,
    },

    #[error("graph mismatch: `{left}` vs `{right}`")]
    GraphMismatch { left: String, right: String },

    #[error("path literal error at column {column}: {reason}")]
    PathLiteral { column: usize, reason: String },

    #[error("connection is missing a value for edge `{0}`")]
    MissingAssignment(String),

    #[error("gauge transformation is missing a value for vertex `{0}`")]
    MissingGaugeValue(String),

    #[error("path is not closed: starts at `{source_vertex}`, ends at `{target}`")]
    NotClosed {
        source_vertex: String,
        target: String,
    },

    #[error("edge `{0}` has no polyline geometry")]
    NoGeometry(String),

    #[error("unsupported group {descriptor} for {operation}")]
    UnsupportedGroup {
        descriptor: String,
        operation: String,
    },

    #[error("invalid smooth connection: {0}")]
    InvalidSmoothSpec(String),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),

    #[error("exact integration is not available for {0}")]
    UnsupportedExact(String),

    #[error("exact enumeration of {count} assignments exceeds the budget of {limit}")]
    BudgetExceeded { count: String, limit: u64 },

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
