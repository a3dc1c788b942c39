use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature mismatch: Cl({0}) vs Cl({1})")]
    SignatureMismatch(String, String),

    #[error("signature ({p},{q}) exceeds the supported total of {max} generators")]
    SignatureTooLarge { p: usize, q: usize, max: usize },

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("grade {grade} out of range 0..={max}")]
    GradeOutOfRange { grade: usize, max: usize },

    #[error("axis {axis} out of range 1..={n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("operation requires a Cl(0,n) value, got Cl({0})")]
    NotFieldAlgebra(String),

    #[error("operation requires a Cl(n,n) value, got Cl({0})")]
    NotOperatorAlgebra(String),

    #[error("lattice box mismatch")]
    BoxMismatch,

    #[error("invalid lattice box: {0}")]
    InvalidBox(String),

    #[error("valid region is empty")]
    EmptyRegion,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wave vector is not commensurate with the periodic box")]
    Incommensurate,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
