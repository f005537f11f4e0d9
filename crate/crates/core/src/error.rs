use thiserror::Error;

/// Errors raised by precondition failures across the crate.
///
/// Axiom violations are never errors; checkers return them as data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("diameter of an empty set is undefined")]
    EmptySetDiameter,
    #[error("point {point} is outside the carrier of size {n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("table is not a G-metric ({axioms})")]
    NotAGmetric { axioms: String },
    #[error("table is not a metric ({axioms})")]
    NotAMetric { axioms: String },
    #[error("carrier of size {n} exceeds the cap of {cap}")]
    CarrierTooLarge { n: usize, cap: usize },
    #[error("sequence of length {len} is shorter than the window {window}")]
    PrefixTooShort { len: usize, window: usize },
    #[error("window must be at least 1")]
    EmptyWindow,
    #[error("grid is empty")]
    EmptyGrid,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("argument must be positive, got {0}")]
    NonpositiveArgument(f64),
    #[error("alpha must be positive, got {0}")]
    NonpositiveAlpha(f64),
    #[error("{name} = {value} is outside {range}")]
    ParameterOutOfRange { name: &'static str, value: String, range: &'static str },
    #[error("complement of phi does not exceed {alpha} below {cap}")]
    CoercivityEvidenceFailed { alpha: f64, cap: f64 },
    #[error("invalid comparison function: {0}")]
    InvalidComparison(String),
    #[error("invalid self-map: {0}")]
    InvalidMap(String),
}

impl Error {
    /// Stable identifier used in reports.
    pub fn id(&self) -> &'static str {
        match self {
            Error::EmptySetDiameter => "empty-set-diameter",
            Error::PointOutOfRange { .. } => "point-out-of-range",
            Error::InvalidTable(_) => "invalid-table",
            Error::NotAGmetric { .. } => "not-a-gmetric",
            Error::NotAMetric { .. } => "not-a-metric",
            Error::CarrierTooLarge { .. } => "carrier-too-large",
            Error::PrefixTooShort { .. } => "prefix-too-short",
            Error::EmptyWindow => "empty-window",
            Error::EmptyGrid => "empty-grid",
            Error::InvalidGrid(_) => "invalid-grid",
            Error::NonpositiveArgument(_) => "nonpositive-argument",
            Error::NonpositiveAlpha(_) => "nonpositive-alpha",
            Error::ParameterOutOfRange { .. } => "parameter-out-of-range",
            Error::CoercivityEvidenceFailed { .. } => "coercivity-evidence-failed",
            Error::InvalidComparison(_) => "invalid-comparison",
            Error::InvalidMap(_) => "invalid-map",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
