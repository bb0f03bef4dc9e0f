use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("certification missing or failed: {0}")]
    Certification(String),

    #[error("bracket not found: {0}")]
    BracketNotFound(String),

    #[error("sampling insufficiency: {0}")]
    Sampling(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("problem file error: {0}")]
    Problem(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
