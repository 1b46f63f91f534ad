use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coefficients not normalized: a(1) = {0}")]
    NotNormalized(String),
    #[error("incomplete data: missing lambda({0})")]
    IncompleteData(u64),
    #[error("degenerate Satake parameters at p = {p}: alpha = beta = {root}")]
    DegenerateSatake { p: u64, root: f64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error: {invariant} violated at n = {witness}")]
    Validation { invariant: String, witness: u64 },
    #[error("insufficient range: need N_max >= {required}, have {available}")]
    InsufficientRange { required: u64, available: u64 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
