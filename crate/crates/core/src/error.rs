use thiserror::Error;

/// Errors raised by the operator backends, the solvers and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },

    #[error("last operator is not a contraction: I - S*S has eigenvalue {eigenvalue:e}")]
    NotContraction { eigenvalue: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("eigen-solver did not converge: {0}")]
    Convergence(String),

    #[error("sample budget exceeded: {requested} points requested, budget is {budget}")]
    Budget { requested: u128, budget: usize },

    #[error("no fundamental operators: equation {index} leaves residual {residual:e} > {tol:e}")]
    NoFundamentalOperators { index: usize, residual: f64, tol: f64 },

    #[error("symbolic square root unsupported: {0}")]
    SymbolicSqrtUnsupported(String),

    #[error("spectral radius of S_{index} is {radius}, must be < {bound}")]
    SpectralRadiusTooLarge { index: usize, radius: f64, bound: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
