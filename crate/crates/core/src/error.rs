use thiserror::Error;

/// Errors raised anywhere in the preprocessing / factorization stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("every column is zero")]
    AllColumnsZero,

    #[error("column {column}: {source}")]
    Column {
        column: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{method}: {source}")]
    InMethod {
        method: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("point violates the constraints by {violation:e}")]
    InfeasiblePoint { violation: f64 },

    #[error("active-set solver exceeded {0} iterations")]
    MaxIterations(usize),

    #[error("KKT residual {residual:e} exceeds tolerance {tol:e}")]
    KktTolerance { residual: f64, tol: f64 },

    #[error("power iteration did not converge; spectral radius lies in [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64 },

    #[error("numerical rank is {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("columns are multiples of each other: {0:?}")]
    DuplicateColumns(Vec<(usize, usize)>),

    #[error("I - alpha*B is singular (spectral radius of alpha*B = {rho})")]
    SingularQ { rho: f64 },

    #[error("affine chart is degenerate: {0}")]
    DegenerateChart(String),

    #[error("outer polygon is empty")]
    EmptyOuter,

    #[error("walk start point lies strictly inside the inner polygon")]
    StartInsideQ,

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn in_column(self, column: usize) -> Self {
        Error::Column {
            column,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
