use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant carries a stable machine-readable [`code`](Error::code) used by the CLI
/// when printing `error: <CODE>: <detail>` lines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value {value} at {location}")]
    NonFiniteEntry { location: String, value: f64 },

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("no convergence after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("column {name}")]
    ZeroVariance { name: String },

    #[error("need at least 2 values, got {count}")]
    TooFewValues { count: usize },

    #[error("need at least 2 rows, got {count}")]
    TooFewRows { count: usize },

    #[error("need at least 2 variables, got {d}")]
    DimensionTooSmall { d: usize },

    #[error("eigenvalues sum to {sum}, expected {d}")]
    NotACorrelationSpectrum { sum: f64, d: usize },

    #[error("{reason}")]
    NotACorrelationMatrix { reason: String },

    #[error("eigenvalues sum to zero")]
    DegenerateSpectrum,

    #[error("{0}")]
    BadArguments(String),

    #[error("{quantity} = {value} lies outside [{lo}, {hi}] beyond roundoff")]
    BoundViolation {
        quantity: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{path}: {message}")]
    File { path: String, message: String },

    #[error("row {row}, column {column}: '{token}'")]
    Parse {
        row: usize,
        column: String,
        token: String,
    },

    #[error("no numeric columns selected")]
    EmptySelection,

    #[error("no column named '{0}'")]
    UnknownColumn(String),

    #[error("{rows} rows by {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("entries ({row},{col}) and ({col},{row}) differ by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFiniteEntry { .. } => "NON_FINITE_ENTRY",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::ZeroVariance { .. } => "ZERO_VARIANCE",
            Error::TooFewValues { .. } => "TOO_FEW_VALUES",
            Error::TooFewRows { .. } => "TOO_FEW_ROWS",
            Error::DimensionTooSmall { .. } => "DIMENSION_TOO_SMALL",
            Error::NotACorrelationSpectrum { .. } => "NOT_A_CORRELATION_SPECTRUM",
            Error::NotACorrelationMatrix { .. } => "NOT_A_CORRELATION_MATRIX",
            Error::DegenerateSpectrum => "DEGENERATE_SPECTRUM",
            Error::BadArguments(_) => "BAD_ARGUMENTS",
            Error::BoundViolation { .. } => "BOUND_VIOLATION",
            Error::File { .. } => "FILE_ERROR",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::EmptySelection => "EMPTY_SELECTION",
            Error::UnknownColumn(_) => "UNKNOWN_COLUMN",
            Error::NotSquare { .. } => "NOT_SQUARE",
            Error::NotSymmetric { .. } => "NOT_SYMMETRIC",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Clamps `value` into `[lo, hi]` when it overshoots by at most `slack`; larger
/// violations are reported as [`Error::BoundViolation`].
pub(crate) fn clamp_roundoff(
    quantity: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    slack: f64,
) -> Result<f64> {
    if value >= lo && value <= hi {
        Ok(value)
    } else if value < lo && lo - value <= slack {
        Ok(lo)
    } else if value > hi && value - hi <= slack {
        Ok(hi)
    } else {
        Err(Error::BoundViolation {
            quantity,
            value,
            lo,
            hi,
        })
    }
}
