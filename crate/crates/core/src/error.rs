//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid variable context: {0}")]
    InvalidContext(String),
    #[error("mismatched variable contexts")]
    ContextMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero divisor in divisor list")]
    ZeroDivisor,
    #[error("empty polynomial list")]
    EmptyInput,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("minor order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("scale factor must be a nonzero constant")]
    ZeroScale,
    #[error("basis is not a reduced Groebner basis")]
    BasisNotReduced,
    #[error("ideal is not the unit ideal")]
    NotUnitIdeal,
    #[error("polynomial is not univariate in {0}")]
    NotUnivariate(String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("factor search exceeded degree bound {bound} (remaining degree {degree}); supply candidate factors")]
    FactorDegreeBound { degree: usize, bound: usize },
    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("malformed exponent table: {0}")]
    MalformedExponentTable(String),
    #[error("zero matrix is a degenerate input")]
    ZeroMatrix,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
