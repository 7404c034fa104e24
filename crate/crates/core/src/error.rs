use thiserror::Error;

use crate::complex::Face;

pub type Result<T> = std::result::Result<T, HdxError>;

#[derive(Debug, Error)]
pub enum HdxError {
    #[error("input contains no faces")]
    EmptyInput,
    #[error("complex is not pure: maximal face {face:?} has dimension {dim}, expected {expected}")]
    NotPure {
        face: Vec<String>,
        dim: i32,
        expected: i32,
    },
    #[error("face {0:?} is not in the complex")]
    FaceNotInComplex(Face),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("cochain belongs to a different complex")]
    ComplexMismatch,
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("{what} needs {required} enumeration steps, cap is {cap}")]
    TooLarge {
        what: String,
        required: String,
        cap: u64,
    },
    #[error("eta must lie strictly between 0 and 1, got {0}")]
    BadEta(String),
    #[error("precondition not verified: {0}")]
    PreconditionUnverified(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("no valid vertex typing: {0}")]
    NoValidTyping(String),
    #[error("type graph ({0}, {1}) is not biregular")]
    NotBiregular(usize, usize),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HdxError {
    pub(crate) fn too_large(what: impl Into<String>, log2_required: u32, cap: u64) -> Self {
        HdxError::TooLarge {
            what: what.into(),
            required: format!("2^{log2_required}"),
            cap,
        }
    }
}
