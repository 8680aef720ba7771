use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid word character {0:?} (expected one of a, b, A, B)")]
    InvalidLetter(char),

    #[error("radicand mismatch: {0} vs {1}")]
    RadicandMismatch(u64, u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A theorem hypothesis could not be certified for the given input.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is reducible")]
    Reducible,

    #[error("matrix has a negative entry")]
    NegativeEntry,

    #[error("power iteration did not reach the requested width after {0} steps")]
    NotConverged(usize),

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),

    #[error("pairs are not symplectic modulo the bounding class: {0}")]
    NotSymplectic(String),

    #[error("invalid homology class {0:?}")]
    InvalidClass(String),

    #[error("no hyperbolic class among words of length <= {max_length} at mu = {mu}")]
    NoHyperbolicClass { max_length: usize, mu: u64 },

    #[error("invalid rational {0:?}")]
    InvalidRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
