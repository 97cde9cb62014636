use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: requires a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("degenerate box on axis {axis}")]
    DegenerateBox { axis: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("interpolation points must be distinct and lie in [-1, 1]")]
    InvalidInterpolationPoints,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty index set")]
    EmptySet,
    #[error("empty mesh")]
    EmptyMesh,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("unsupported quadrature order {0} (supported: 1..=5)")]
    UnsupportedQuadratureOrder(usize),
    #[error("coincident box midpoints")]
    CoincidentMidpoints,
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
    #[error("block is not admissible")]
    Inadmissible,
    #[error("cluster {0} is not a leaf")]
    NotALeaf(usize),
    #[error("unknown block {0}")]
    UnknownBlock(usize),
    #[error("problem size {n} exceeds the dense memory guard ({limit}); pass force to override")]
    MemoryGuard { n: usize, limit: usize },
    #[error("unknown study '{0}'")]
    UnknownStudy(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
