use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid physical constants: {0}")]
    InvalidConstants(String),

    #[error("wavevector ({0}, {1}, {2}) is not a lattice node")]
    OffLattice(f64, f64, f64),

    #[error("position ({0}, {1}, {2}) is not a dual-lattice point")]
    OffDualLattice(f64, f64, f64),

    #[error("array has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("invariant measure needs omega > 0 on every node carrying content; use a half-cell offset grid")]
    ZeroFrequencyNode,

    #[error("direction undefined for |k| = 0")]
    UndefinedDirection,

    #[error("connection term diverges at the pole (theta = {theta}) for m = {m}")]
    PoleSingularity { theta: f64, m: i32 },

    #[error("states live on different grids")]
    GridMismatch,

    #[error("normalization convention mismatch: expected alpha = {expected}, got {got}")]
    ConventionMismatch { expected: f64, got: f64 },

    #[error("state is not normalizable")]
    NonNormalizable,

    #[error("state has indefinite (non-positive) norm {0}")]
    IndefiniteNorm(f64),

    #[error("packet does not decay at the k-space boundary: edge/peak = {ratio:.3e} (limit {limit:.1e})")]
    BoundarySupport { ratio: f64, limit: f64 },

    #[error("profile must be real")]
    ComplexProfile,

    #[error("boundary data is not transverse: longitudinal/total = {0:.3e}")]
    NotTransverse(f64),

    #[error("state carries independent negative-frequency content; real reduction needs c^- = 0")]
    NegativeFrequencyContent,

    #[error("integration window too small: tail/peak = {tail:.3e} (limit {limit:.1e})")]
    WindowTooSmall { tail: f64, limit: f64 },

    #[error("smoothing length {s} is under-resolved by band limit {k_max}")]
    UnderResolved { s: f64, k_max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
