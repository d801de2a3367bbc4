use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges or vertices")]
    EmptyInput,

    #[error("missing `*Vertices` header")]
    MissingVertices,

    #[error("line {line}: vertex id {id} out of range 1..={count}")]
    VertexOutOfRange { line: usize, id: i64, count: usize },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Power iteration stopped at `max_iter` without reaching the tolerance.
    /// The last iterate is kept so callers may still inspect or use it.
    #[error("PageRank did not converge in {iterations} iterations (L1 residual {residual:.3e})")]
    PageRankNotConverged {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("eigensolver did not converge in {iterations} iterations (max residual {residual:.3e})")]
    EigenNotConverged { iterations: usize, residual: f64 },

    #[error("criterion `{0}` is zero for every alternative")]
    ZeroCriterion(String),

    #[error("non-finite value in decision matrix at row {row}, criterion `{criterion}`")]
    NonFinite { row: usize, criterion: String },

    #[error("partition does not match graph: {0}")]
    Partition(String),

    #[error("seed sets differ in size ({0} vs {1})")]
    SeedSizeMismatch(usize, usize),

    #[error("experiment cell (method={method}, K={k}, kappa={kappa}) failed: {source}")]
    Cell {
        method: String,
        k: usize,
        kappa: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
