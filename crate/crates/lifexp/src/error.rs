//! Error types shared across the crate.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes the library reports.
#[derive(Debug)]
pub enum Error {
    /// Underlying I/O failure.
    Io(std::io::Error),
    /// Malformed CSV input; `row` is the 1-based data row number.
    Csv { row: usize, detail: String },
    /// Header or column-name level schema violation.
    Schema(String),
    /// A referenced column does not exist (or has the wrong type).
    MissingColumn(String),
    /// A precondition of an operation was violated.
    Contract(String),
    /// Matrix/vector dimensions do not line up.
    Shape(String),
    /// Least-squares system is numerically rank deficient.
    RankDeficient { rank: usize, n_cols: usize },
    /// Named design-matrix columns are collinear.
    Collinear { columns: Vec<String> },
    /// An iterative routine failed to converge.
    NoConvergence(&'static str),
    /// R² is undefined for a constant target; other metrics are still carried.
    ConstantTarget { mae: f64, mse: f64, rmse: f64 },
    /// Bad configuration (rule files, pipeline config, CLI arguments).
    Config(String),
    /// Chart specification is internally inconsistent.
    ChartSpec(String),
    /// A report field holds a non-finite number; `path` locates it.
    NonFinite { path: String },
    /// A grid-search candidate failed; wraps the underlying error.
    Candidate {
        candidate: String,
        source: Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Csv { row, detail } => write!(f, "csv error at row {row}: {detail}"),
            Error::Schema(msg) => write!(f, "schema error: {msg}"),
            Error::MissingColumn(name) => write!(f, "missing column: {name}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::RankDeficient { rank, n_cols } => {
                write!(f, "rank-deficient system: numerical rank {rank} of {n_cols} columns")
            }
            Error::Collinear { columns } => {
                write!(f, "collinear columns: {}", columns.join(", "))
            }
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::ConstantTarget { mae, mse, rmse } => write!(
                f,
                "R² undefined for constant target (mae={mae}, mse={mse}, rmse={rmse})"
            ),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::ChartSpec(msg) => write!(f, "chart spec error: {msg}"),
            Error::NonFinite { path } => write!(f, "non-finite number at {path}"),
            Error::Candidate { candidate, source } => {
                write!(f, "grid candidate {candidate} failed: {source}")
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            Error::Candidate { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
