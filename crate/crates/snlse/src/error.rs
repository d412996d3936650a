//! One error type for the whole crate, grouped by how the CLI exits.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("step size {tau} does not reach t = {t_final} in a whole number of steps")]
    StepMismatch { tau: f64, t_final: f64 },

    #[error("snapshot time {time} is not an integer multiple of the step size {tau}")]
    SnapshotOffStep { time: f64, tau: f64 },

    #[error("slope fit needs >= 2 points with positive abscissae and errors")]
    DegenerateFit,

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("expected a {expected}-dimensional field, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular kernel evaluated at zero density")]
    SingularDensity,

    #[error("zero density at node {node} under the exact singular kernel")]
    ZeroDensityNode { node: usize },

    #[error("non-finite field value after step {step}")]
    NonFinite { step: usize },

    #[error("field dump length does not match its header")]
    ShortRead,

    #[error("field dump does not start with the expected magic bytes")]
    BadMagic,

    #[error("field dump version {0} is not supported")]
    UnsupportedVersion(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Process exit class: configuration (2), numerical abort (3), I/O (4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numerical,
    Io,
}

impl ErrorClass {
    pub fn exit_code(&self) -> u8 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Numerical => 3,
            ErrorClass::Io => 4,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidGrid(_) | InvalidParameter { .. } | StepMismatch { .. }
            | SnapshotOffStep { .. } | DegenerateFit | GridMismatch
            | DimensionMismatch { .. } => ErrorClass::Config,
            SingularDensity | ZeroDensityNode { .. } | NonFinite { .. } => ErrorClass::Numerical,
            ShortRead | BadMagic | UnsupportedVersion(_) | Io(_) => ErrorClass::Io,
        }
    }
}
