use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("axis needs at least 2 breakpoints, got {0}")]
    TooFewBreakpoints(usize),
    #[error("breakpoints must be finite and strictly increasing (axis {axis}, index {index})")]
    NonIncreasing { axis: usize, index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported dimension {0} (1 <= d <= 3)")]
    UnsupportedDimension(usize),
    #[error("weight |x|^{exponent} is not integrable at the origin on axis {axis}")]
    NonIntegrableWeight { axis: usize, exponent: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("function is not monotone on its support")]
    NotMonotone,
    #[error("candidate atom vanished after moment projection")]
    DegenerateAtom,
    #[error("region touches the origin on axis {0}")]
    RegionTouchesOrigin(usize),
    #[error("empty lattice")]
    EmptyLattice,
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
