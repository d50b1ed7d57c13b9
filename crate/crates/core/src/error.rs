use thiserror::Error;

/// Errors raised by the library. The CLI maps every variant to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex label {vertex} out of range for D = {d}")]
    VertexOutOfRange { vertex: usize, d: usize },

    #[error("invalid path `{0}`")]
    InvalidPath(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("zeta series diverges at s = {s} (abscissa of convergence {abscissa})")]
    Divergence { s: f64, abscissa: f64 },

    #[error("truncated paths are identical; equality of the infinite paths must be declared by the caller")]
    AmbiguousTruncation,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("cannot refine a level-{from} function to level {to}")]
    Refinement { from: usize, to: usize },

    #[error("the adjoint of an isometry cannot strip a vertex from a level-0 function")]
    AdjointAtLevelZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot add surd multiples of sqrt({0}) and sqrt({1})")]
    IncompatibleSurds(String, String),

    #[error("degenerate symbol matrix: {0}")]
    DegenerateMatrix(String),

    #[error("unsupported output format `{0}`")]
    UnsupportedFormat(String),

    #[error("cannot parse `{0}`")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
