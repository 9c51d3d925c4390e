use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("pole of zeta at s = 1")]
    Pole,
    #[error("range error: {0}")]
    Range(String),
    #[error("constraint violation: {}", .0.join("; "))]
    Constraint(Vec<String>),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("no crossing: {0}")]
    NoCrossing(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("completeness check failed: {0}")]
    Completeness(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("ordinates not strictly increasing at index {0}")]
    Monotonicity(usize),
    #[error("index error: {0}")]
    Index(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 for validation problems, 3 for computation or coverage.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Constraint(_)
            | Error::Parse { .. }
            | Error::Monotonicity(_)
            | Error::Index(_)
            | Error::Config(_)
            | Error::Infeasible(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
