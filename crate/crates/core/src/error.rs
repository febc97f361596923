use thiserror::Error;

/// Errors raised by the engine. Parse errors carry a 1-based location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unbound even generator {0}")]
    UnboundGenerator(String),
    #[error("wrong bidegree: expected {expected}, found {found}")]
    Bidegree { expected: String, found: String },
    #[error("cannot contract a 0-form")]
    ContractZeroForm,
    #[error("not vertical: {0}")]
    NotVertical(String),
    #[error("not projectable: {0}")]
    NotProjectable(String),
    #[error("parity mismatch: {0}")]
    Parity(String),
    #[error("invalid structure constants: {0}")]
    Structure(String),
    #[error("divergence condition fails: L_v L - d_H sigma = {0}")]
    DivergenceMismatch(String),
    #[error("no item named `{0}` in the model")]
    UnknownName(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
