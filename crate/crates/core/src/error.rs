use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Reasons a matrix fails to be a density operator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("matrix is not Hermitian: max |m(i,j) - conj(m(j,i))| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },
    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    Positivity { min_eigenvalue: f64 },
    #[error("amplitudes are not normalized: squared norm {norm_sqr}")]
    Normalization { norm_sqr: f64 },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    Index { index: usize, n_qubits: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("validation failed: {0}")]
    Validation(#[from] ValidationError),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("state file schema error: {0}")]
    Schema(String),
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping any context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Size(_) => 3,
            _ => 2,
        }
    }
}
