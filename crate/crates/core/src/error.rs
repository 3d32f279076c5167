use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index ({i}, {j}) out of range for degree {n}")]
    IndexOutOfRange { n: usize, i: usize, j: usize },

    #[error("mass matrix entries underflow in double precision at degree {n}")]
    DegreeTooLarge { n: usize },

    #[error("degree {n} is outside the supported range 0..={max}")]
    UnsupportedDegree { n: usize, max: usize },

    #[error("cannot elevate from degree {from} down to degree {to}")]
    ElevationOrder { from: usize, to: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("matrix is singular (no pivot in column {column})")]
    Singular { column: usize },

    #[error("matrix of degree {n} is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { n: usize, row: usize, pivot: f64 },

    #[error("first component of the last-column solution vanishes")]
    ZeroLeadingComponent,

    #[error("hankel matrix is not persymmetric")]
    NotPersymmetric,

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("reference vector has zero norm")]
    ZeroNormReference,

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("polynomial must have at least one coefficient")]
    EmptyPolynomial,

    #[error("malformed input: {0}")]
    Parse(String),
}
