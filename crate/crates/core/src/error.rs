use thiserror::Error;

/// Errors shared by all lattice and energy operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("point {point:?} lies outside the declared box")]
    PointOutsideBox { point: Vec<i64> },

    #[error(
        "enumeration of {required} tuples exceeds the oracle cap of {cap}; \
         use the convolution engine instead"
    )]
    OracleCapExceeded { required: u128, cap: u128 },

    #[error("dense grid of {cells} cells exceeds the memory budget of {budget} cells")]
    GridBudgetExceeded { cells: u128, budget: u128 },

    #[error("search space of {systems} systems exceeds the budget of {budget}; use local search")]
    SearchBudgetExceeded { systems: String, budget: u128 },

    #[error("quadrature tolerance {tol} not reached within {max_evals} evaluations")]
    ToleranceUnachievable { tol: f64, max_evals: u64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
