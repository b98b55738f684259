use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    /// A denominator has an irreducible factor of degree two or more over Q.
    #[error("denominator does not split into linear factors over Q: {0}")]
    NonSplitDenominator(String),

    #[error("gauge matrix is singular")]
    SingularGauge,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("input outside the supported class: {0}")]
    UnsupportedClass(String),

    #[error("no solution in the hyperexponential class: {0}")]
    NotInClass(String),

    #[error("size {size} exceeds the configured bound {bound}")]
    SizeLimit { size: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
