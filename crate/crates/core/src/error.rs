use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("could not bracket root: {0}")]
    BracketFailure(String),

    #[error("operation not available for {kind} kernel: {op}")]
    Kind { kind: &'static str, op: &'static str },

    #[error("coincident particles at distance {0:e}")]
    Coincident(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
